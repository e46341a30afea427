#pragma once

#include "seqeval/catalog.hpp"
#include "seqeval/chart.hpp"
#include "seqeval/engine.hpp"
#include "seqeval/report.hpp"
#include "seqeval/representations.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace seqeval {

inline constexpr int kConfigVersion = 1;

/// A named sequence set given by file or inline.
struct GroupDecl {
  std::string name;
  std::optional<std::filesystem::path> path;
  std::vector<std::string> sequences;
  std::string key;  // config location, for error messages
};

enum class RepresentationKind { file, kmer, length };
enum class FileRole { embedding, property };

/// Per set name, the file holding that set's rows.
using FileMap = std::map<std::string, std::filesystem::path>;

struct RepresentationDecl {
  std::string id;
  RepresentationKind kind = RepresentationKind::file;
  FileRole role = FileRole::embedding;
  FileMap files;
  KmerSpec kmer;
};

struct OutputDecl {
  enum class Kind { table, chart } kind = Kind::table;
  TableFormat format = TableFormat::markdown;
  ChartSpec chart;
  std::filesystem::path path;
};

struct IterationDecl {
  std::int64_t index = 0;
  std::vector<GroupDecl> groups;
  /// Representation id -> per-set files for this round.
  std::map<std::string, FileMap> files;
};

/// Parsed run configuration. Relative paths are already resolved against the
/// directory of the configuration file.
struct RunConfig {
  std::filesystem::path base_dir;
  std::uint64_t seed = 0;
  Alphabet alphabet = Alphabet::free;
  std::vector<GroupDecl> groups;
  /// Name of a group, or a separately loaded set (reference_set).
  std::optional<std::string> reference_group;
  std::optional<GroupDecl> reference_set;
  std::vector<RepresentationDecl> representations;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::array();
  std::vector<OutputDecl> outputs;
  std::vector<IterationDecl> iterations;
};

/// Validates the document and throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::ordered_json& doc, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Loads the sequences of a group (file or inline).
SequenceSet load_group(const GroupDecl& decl, Alphabet alphabet);

/// Everything needed to evaluate one round.
struct PreparedRun {
  std::vector<SequenceSet> groups;
  ReferenceSet reference;
  std::vector<MetricSpec> metrics;
};

/// Registers every declared representation; `overrides` replaces file maps per id.
void register_representations(RepresentationRegistry& registry, const RunConfig& config,
                              const std::map<std::string, FileMap>& overrides = {});

/// Loads the groups and reference and builds the metric list. `groups` replaces
/// the top-level group list when given (iterations).
PreparedRun prepare_run(const RunConfig& config, const std::vector<GroupDecl>* groups = nullptr,
                        const std::map<std::string, FileMap>& overrides = {});

}  // namespace seqeval
