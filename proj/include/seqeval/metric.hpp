#pragma once

#include "seqeval/representations.hpp"
#include "seqeval/types.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace seqeval {

enum class Arity { scalar, mean_and_deviation };

std::string_view to_string(Arity a);

/// What a metric computation returns.
struct MetricValue {
  MetricValue(double v = 0.0, std::optional<double> dev = std::nullopt,
              std::optional<std::vector<double>> folds = std::nullopt)
      : value(v), deviation(dev), per_fold(std::move(folds)) {}

  double value = 0.0;
  std::optional<double> deviation;
  std::optional<std::vector<double>> per_fold;
};

enum class Status { ok, error };

/// One cell of a report.
struct MetricResult {
  Status status = Status::ok;
  double value = 0.0;
  std::optional<double> deviation;
  std::optional<std::vector<double>> per_fold;
  std::string message;
  std::vector<std::string> warnings;

  bool ok() const { return status == Status::ok; }
  static MetricResult from(MetricValue v, std::vector<std::string> warnings = {});
  static MetricResult failure(std::string message, std::vector<std::string> warnings = {});
};

/// Input view handed to a metric: the (possibly subsetted) group plus access to
/// its representations and to the representations of other sets.
class MetricContext {
 public:
  MetricContext(const SequenceSet& group, const RepresentationResolver& resolver);

  const SequenceSet& sequences() const { return subset_ ? *subset_ : *group_; }
  std::size_t size() const { return sequences().size(); }

  /// Rows of the group representation, aligned with sequences().
  EmbeddingMatrix embeddings(std::string_view id) const;
  PropertyTable properties(std::string_view id) const;

  /// Representations of another set, e.g. the reference.
  EmbeddingMatrix embeddings_of(const SequenceSet& set, std::string_view id) const;
  PropertyTable properties_of(const SequenceSet& set, std::string_view id) const;

  /// Context over rows of the current view (indices relative to sequences()).
  MetricContext subset(std::span<const std::size_t> rows) const;

  void warn(std::string message) const;
  std::vector<std::string> warnings() const;

 private:
  const SequenceSet* group_;
  const RepresentationResolver* resolver_;
  std::shared_ptr<const SequenceSet> subset_;
  std::vector<std::size_t> rows_;  // into *group_, empty means all rows
  std::shared_ptr<std::vector<std::string>> warnings_;
};

using MetricFunction = std::function<MetricValue(const MetricContext&)>;

/// A named metric with its optimization direction.
struct MetricSpec {
  std::string name;
  Direction direction = Direction::maximize;
  Arity arity = Arity::scalar;
  /// Descriptive configuration record, echoed into JSON reports.
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::string> required_representations;
  MetricFunction compute;
};

}  // namespace seqeval
