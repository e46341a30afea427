#pragma once

#include "seqeval/metric.hpp"
#include "seqeval/representations.hpp"
#include "seqeval/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace seqeval {

struct MetricColumn {
  std::string name;
  Direction direction = Direction::maximize;
  Arity arity = Arity::scalar;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
};

/// Groups x metrics grid of results; rows and columns keep input order.
struct ReportTable {
  std::vector<std::string> groups;
  std::vector<MetricColumn> metrics;
  std::vector<std::vector<MetricResult>> cells;  // [group][metric]

  const MetricResult& at(std::size_t group, std::size_t metric) const {
    return cells.at(group).at(metric);
  }
  const MetricResult& at(std::string_view group, std::string_view metric) const;
  bool has_errors() const;
};

struct EvaluateOptions {
  /// Worker threads for (group, metric) cells; 0 means hardware concurrency.
  unsigned jobs = 1;
};

/// Every metric on every group. A metric failing on one group yields an error
/// cell without touching the others. Throws ConfigError for duplicate metric
/// names or an empty group list.
ReportTable evaluate(const std::vector<SequenceSet>& groups, const std::vector<MetricSpec>& metrics,
                     const RepresentationResolver& representations, EvaluateOptions options = {});

/// Index lists of the K folds: a seeded uniform shuffle of 0..n-1 cut into K
/// consecutive chunks of floor(n/K); the trailing n mod K indices are dropped.
std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, std::size_t folds,
                                                     std::uint64_t seed);

/// Wraps `metric` so it runs on K disjoint equal-size subsets of the group and
/// reports the fold mean, the sample standard deviation and the per-fold values.
MetricSpec fold_wrap(MetricSpec metric, std::size_t folds, std::uint64_t seed);

struct Iteration {
  std::int64_t index = 0;
  std::vector<SequenceSet> groups;
};

/// Ordered design rounds; indices strictly increasing.
class IterationSeries {
 public:
  void add(std::int64_t index, std::vector<SequenceSet> groups);
  const std::vector<Iteration>& iterations() const { return iterations_; }
  std::size_t size() const { return iterations_.size(); }

 private:
  std::vector<Iteration> iterations_;
};

struct TrajectoryTable {
  std::vector<std::int64_t> iterations;
  std::vector<ReportTable> reports;  // one per iteration

  bool has_errors() const;
};

/// Calls evaluate once per iteration. The resolver callback may hand out a
/// per-iteration registry; sharing one Cache across them keeps each sequence
/// embedded once for the whole series.
TrajectoryTable evaluate_iterations(
    const IterationSeries& series, const std::vector<MetricSpec>& metrics,
    const std::function<const RepresentationResolver&(const Iteration&)>& representations,
    EvaluateOptions options = {});

TrajectoryTable evaluate_iterations(const IterationSeries& series,
                                    const std::vector<MetricSpec>& metrics,
                                    const RepresentationResolver& representations,
                                    EvaluateOptions options = {});

/// Mean and sample (n-1) standard deviation.
std::pair<double, double> mean_and_sample_std(std::span<const double> values);

}  // namespace seqeval
