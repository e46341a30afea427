#include "seqeval/cache.hpp"

#include "seqeval/errors.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace seqeval {

std::uint64_t content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t Cache::KeyHash::operator()(const std::pair<std::string, std::string>& k) const {
  return std::hash<std::string>{}(k.first) * 31u ^ std::hash<std::string>{}(k.second);
}

Cache::Cache(bool enabled) : enabled_(enabled) {}

void Cache::set_disk_dir(std::filesystem::path dir) {
  std::filesystem::create_directories(dir);
  disk_dir_ = std::move(dir);
}

std::size_t Cache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

std::filesystem::path disk_path(const std::filesystem::path& dir, const std::string& model_id,
                                const std::string& seq) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.row",
                static_cast<unsigned long long>(content_hash(seq)));
  return dir / model_id / name;
}

void check_rows(const Matrix& rows, std::size_t expected, const std::string& model_id) {
  if (static_cast<std::size_t>(rows.rows()) != expected) {
    throw InvalidInput("model '" + model_id + "' returned " + std::to_string(rows.rows()) +
                       " rows for a batch of " + std::to_string(expected) + " sequences");
  }
}

}  // namespace

// Disk entries: u64 sequence length, sequence bytes, u64 width, width f64 values.
std::optional<Cache::Row> Cache::read_disk(const std::string& model_id,
                                           const std::string& seq) const {
  if (!disk_dir_) return std::nullopt;
  std::ifstream in(disk_path(*disk_dir_, model_id, seq), std::ios::binary);
  if (!in) return std::nullopt;
  std::uint64_t len = 0;
  if (!in.read(reinterpret_cast<char*>(&len), sizeof len) || len != seq.size()) return std::nullopt;
  std::string stored(len, '\0');
  if (!in.read(stored.data(), static_cast<std::streamsize>(len)) || stored != seq) return std::nullopt;
  std::uint64_t width = 0;
  if (!in.read(reinterpret_cast<char*>(&width), sizeof width)) return std::nullopt;
  Row row(width);
  if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(width * 8))) {
    return std::nullopt;
  }
  return row;
}

void Cache::write_disk(const std::string& model_id, const std::string& seq, const Row& row) const {
  if (!disk_dir_) return;
  const auto path = disk_path(*disk_dir_, model_id, seq);
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    const std::uint64_t len = seq.size();
    const std::uint64_t width = row.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(seq.data(), static_cast<std::streamsize>(len));
    out.write(reinterpret_cast<const char*>(&width), sizeof width);
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(width * 8));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

Matrix Cache::get_or_compute(const std::string& model_id, const BatchModel& model,
                             std::span<const std::string> sequences) {
  if (!enabled_) {
    Matrix rows = model(sequences);
    check_rows(rows, sequences.size(), model_id);
    misses_ += sequences.size();
    return rows;
  }

  std::vector<std::shared_future<Row>> futures(sequences.size());
  std::vector<std::string> miss_sequences;
  std::vector<std::promise<Row>> promises;
  {
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < sequences.size(); ++i) {
      auto key = std::make_pair(model_id, sequences[i]);
      if (auto it = entries_.find(key); it != entries_.end()) {
        futures[i] = it->second;
        ++hits_;
        continue;
      }
      promises.emplace_back();
      futures[i] = promises.back().get_future().share();
      entries_.emplace(std::move(key), futures[i]);
      miss_sequences.push_back(sequences[i]);
      ++misses_;
    }
  }

  if (!miss_sequences.empty()) {
    try {
      std::vector<std::optional<Row>> from_disk(miss_sequences.size());
      std::vector<std::string> to_model;
      std::vector<std::size_t> to_model_index;
      for (std::size_t i = 0; i < miss_sequences.size(); ++i) {
        from_disk[i] = read_disk(model_id, miss_sequences[i]);
        if (from_disk[i]) {
          ++disk_hits_;
        } else {
          to_model.push_back(miss_sequences[i]);
          to_model_index.push_back(i);
        }
      }
      Matrix computed;
      if (!to_model.empty()) {
        computed = model(to_model);
        check_rows(computed, to_model.size(), model_id);
      }
      std::vector<Row> rows(miss_sequences.size());
      for (std::size_t i = 0; i < miss_sequences.size(); ++i) {
        if (from_disk[i]) rows[i] = std::move(*from_disk[i]);
      }
      for (std::size_t j = 0; j < to_model.size(); ++j) {
        const auto r = computed.row(static_cast<Eigen::Index>(j));
        rows[to_model_index[j]] = Row(r.begin(), r.end());
        write_disk(model_id, to_model[j], rows[to_model_index[j]]);
      }
      for (std::size_t i = 0; i < rows.size(); ++i) promises[i].set_value(std::move(rows[i]));
    } catch (...) {
      {
        std::lock_guard lock(mutex_);
        for (const auto& s : miss_sequences) entries_.erase({model_id, s});
      }
      for (auto& p : promises) p.set_exception(std::current_exception());
      throw;
    }
  }

  Matrix out;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const Row& row = futures[i].get();
    if (i == 0) out.resize(static_cast<Eigen::Index>(sequences.size()),
                           static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != out.cols()) {
      throw InvalidInput("model '" + model_id + "' produced rows of inconsistent width");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  return out;
}

}  // namespace seqeval
