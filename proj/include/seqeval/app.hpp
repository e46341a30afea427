#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

// Subcommand implementations behind the command-line tool. Each returns the
// process exit code: 0 success, 1 metric errors, 2 configuration or input errors.
namespace seqeval::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMetricError = 1;
inline constexpr int kExitConfigError = 2;

struct EvaluateArgs {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;  // 0: hardware concurrency
  bool allow_errors = false;
};

struct DiagnoseArgs {
  std::filesystem::path embeddings;
  std::optional<std::filesystem::path> properties;
  std::optional<std::string> labels;    // categorical/binary column for k-NN alignment and PCA colors
  std::optional<std::string> property;  // real/vector column for Spearman alignment
  std::optional<std::size_t> k;
  bool spearman = false;
  std::optional<std::filesystem::path> pca;
  std::size_t pca_dim = 2;
  std::uint64_t seed = 0;
};

struct EmbedArgs {
  std::filesystem::path sequences;
  int k = 1;
  std::optional<std::string> alphabet;
  std::optional<std::filesystem::path> vocab;
  std::filesystem::path out;
};

struct IterateArgs {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  bool allow_errors = false;
};

int run_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);
int run_diagnose(const DiagnoseArgs& args, std::ostream& out, std::ostream& err);
int run_embed(const EmbedArgs& args, std::ostream& out, std::ostream& err);
int run_iterate(const IterateArgs& args, std::ostream& out, std::ostream& err);

}  // namespace seqeval::app
