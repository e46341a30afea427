#pragma once

#include "seqeval/cache.hpp"
#include "seqeval/errors.hpp"
#include "seqeval/types.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace seqeval {

/// Resolves a representation id for a sequence set into rows aligned with it.
class RepresentationResolver {
 public:
  virtual ~RepresentationResolver() = default;
  virtual EmbeddingMatrix embeddings(const SequenceSet& set, std::string_view id) const = 0;
  virtual PropertyTable properties(const SequenceSet& set, std::string_view id) const = 0;
};

struct ColumnSchema {
  std::string name;
  ColumnType type = ColumnType::real;
  Eigen::Index width = 1;
  std::vector<std::string> categories;
};

/// A property model produces flattened numeric rows laid out per `schema`.
struct PropertyModel {
  std::vector<ColumnSchema> schema;
  BatchModel model;
};

/// Registry of representation producers backing RepresentationResolver.
///
/// Resolution order for an id: in-memory model, then binary embedding file,
/// then CSV file. Models go through the shared Cache; files are keyed by the
/// set name and loaded once per registry.
class RepresentationRegistry final : public RepresentationResolver {
 public:
  explicit RepresentationRegistry(std::shared_ptr<Cache> cache = std::make_shared<Cache>());
  RepresentationRegistry(const RepresentationRegistry& other);
  RepresentationRegistry& operator=(const RepresentationRegistry&) = delete;

  void add_embedder(std::string id, BatchModel model);
  void add_property_model(std::string id, PropertyModel model);
  void add_embedding_file(std::string id, std::string set_name, std::filesystem::path path);
  void add_property_file(std::string id, std::string set_name, std::filesystem::path path);

  bool has(std::string_view id) const;

  EmbeddingMatrix embeddings(const SequenceSet& set, std::string_view id) const override;
  PropertyTable properties(const SequenceSet& set, std::string_view id) const override;

  Cache& cache() const { return *cache_; }
  const std::shared_ptr<Cache>& shared_cache() const { return cache_; }

 private:
  std::vector<std::filesystem::path> files_for(const std::map<std::pair<std::string, std::string>,
                                                              std::vector<std::filesystem::path>>& m,
                                               std::string_view id, const SequenceSet& set) const;

  std::shared_ptr<Cache> cache_;
  std::map<std::string, BatchModel, std::less<>> embedders_;
  std::map<std::string, PropertyModel, std::less<>> property_models_;
  std::map<std::pair<std::string, std::string>, std::vector<std::filesystem::path>> embedding_files_;
  std::map<std::pair<std::string, std::string>, std::vector<std::filesystem::path>> property_files_;

  mutable std::mutex file_mutex_;
  mutable std::map<std::string, EmbeddingMatrix> loaded_embeddings_;
  mutable std::map<std::string, PropertyTable> loaded_properties_;
};

enum class KmerMode { frequency, counts };

struct KmerSpec {
  int k = 1;
  /// Ordered distinct k-mers of length k.
  std::vector<std::string> vocabulary;
  KmerMode mode = KmerMode::frequency;

  /// Every k-mer over `letters`, in lexicographic order of the letter order given.
  static KmerSpec all_over(std::string_view letters, int k);
  /// One k-mer per non-blank line of `text`, in file order.
  static KmerSpec from_vocabulary(std::string_view text, int k);
  void validate() const;
};

/// Row i holds the frequency (count / windows) of each vocabulary k-mer in
/// sequence i; k-mers outside the vocabulary are ignored.
EmbeddingMatrix kmer_embed(const SequenceSet& sequences, const KmerSpec& spec);
Matrix kmer_rows(std::span<const std::string> sequences, const KmerSpec& spec);

/// Real column "length" holding character counts.
PropertyTable length_property(const SequenceSet& sequences);
PropertyModel length_model();

/// Thrown by kmer_embed for a sequence shorter than k.
class ShortSequenceError : public InvalidInput {
 public:
  ShortSequenceError(std::size_t index, std::size_t length, int k);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

}  // namespace seqeval
