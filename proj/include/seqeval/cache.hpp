#pragma once

#include "seqeval/types.hpp"

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <future>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace seqeval {

/// A representation model: maps a batch of sequences to one row each.
using BatchModel = std::function<Matrix(std::span<const std::string>)>;

/// Representation cache keyed by (model id, exact sequence string).
///
/// With caching enabled every (model id, sequence) pair is computed at most
/// once per cache lifetime, also under concurrent callers: a second caller
/// asking for an in-flight key waits for the first computation. Misses of one
/// call are sent to the model as a single batch in input order.
class Cache {
 public:
  explicit Cache(bool enabled = true);

  Cache(const Cache&) = delete;
  Cache& operator=(const Cache&) = delete;

  bool enabled() const { return enabled_; }

  /// Optional on-disk store consulted before the model and written after it.
  void set_disk_dir(std::filesystem::path dir);

  /// Rows for `sequences`, aligned to input order. Throws InvalidInput when the
  /// model returns the wrong row count or inconsistent widths; in that case no
  /// entry of the failed batch is stored.
  Matrix get_or_compute(const std::string& model_id, const BatchModel& model,
                        std::span<const std::string> sequences);

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }
  std::size_t disk_hits() const { return disk_hits_.load(); }
  std::size_t size() const;

 private:
  using Row = std::vector<double>;

  struct KeyHash {
    std::size_t operator()(const std::pair<std::string, std::string>& k) const;
  };

  std::optional<Row> read_disk(const std::string& model_id, const std::string& seq) const;
  void write_disk(const std::string& model_id, const std::string& seq, const Row& row) const;

  bool enabled_;
  std::optional<std::filesystem::path> disk_dir_;
  mutable std::mutex mutex_;
  std::unordered_map<std::pair<std::string, std::string>, std::shared_future<Row>, KeyHash>
      entries_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
  std::atomic<std::size_t> disk_hits_{0};
};

/// 64-bit FNV-1a of a byte string; used for on-disk cache file names.
std::uint64_t content_hash(std::string_view bytes);

}  // namespace seqeval
