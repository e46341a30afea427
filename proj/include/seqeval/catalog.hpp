#pragma once

#include "seqeval/embed_metrics.hpp"
#include "seqeval/hypervolume.hpp"
#include "seqeval/metric.hpp"
#include "seqeval/prop_metrics.hpp"
#include "seqeval/seq_metrics.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace seqeval {

using ReferenceSet = std::shared_ptr<const SequenceSet>;

// Ready-made metric specs. Names default to the usual display names
// ("Diversity", "FBD", ...); directions follow each metric's optimum.

MetricSpec novelty_metric(ReferenceSet reference);
MetricSpec uniqueness_metric();
MetricSpec diversity_metric(DiversityParams params = {});
MetricSpec ngram_jaccard_metric(ReferenceSet reference, NgramParams params, Direction direction);

MetricSpec fbd_metric(ReferenceSet reference, std::string embedding);
MetricSpec mmd_metric(ReferenceSet reference, std::string embedding, KernelSpec kernel = {});
MetricSpec precision_metric(ReferenceSet reference, std::string embedding, NeighborhoodParams params = {});
MetricSpec recall_metric(ReferenceSet reference, std::string embedding, NeighborhoodParams params = {});
MetricSpec authenticity_metric(ReferenceSet reference, std::string embedding);
MetricSpec vendi_metric(std::string embedding, KernelSpec kernel = {}, double renyi_alpha = 1.0);
MetricSpec fkea_vendi_metric(std::string embedding, FkeaParams params = {});

/// Mean of a scalar property with its standard deviation as the dispersion.
MetricSpec identity_metric(std::string property, std::string column, Direction direction);
MetricSpec threshold_metric(std::string property, std::string column, double threshold,
                            ThresholdSide side, Direction direction);

/// A row-wise predicate on property columns, e.g. "charge >= 2".
struct HitCondition {
  std::string column;
  std::string op;  // one of > >= < <= == !=
  double value = 0.0;
};
/// Fraction of rows that are 1 in a binary column (empty conditions) or that
/// satisfy every condition.
MetricSpec hit_rate_metric(std::string property, std::string column, std::vector<HitCondition> conditions = {});

enum class HypervolumeMode { indicator, convex_hull };
MetricSpec hypervolume_metric(std::string property, std::vector<std::string> columns, HypervolumeMode mode,
                              HypervolumeParams params = {});
MetricSpec conformity_metric(ReferenceSet reference, std::string property, std::vector<std::string> columns,
                             ConformityParams params = {}, std::optional<double> bandwidth = std::nullopt);
/// KDE-based KL for real/vector columns, smoothed frequency KL for
/// categorical or binary columns.
MetricSpec kl_metric(ReferenceSet reference, std::string property, std::string column, KdeParams params = {});

/// Everything a declarative metric entry can refer to.
struct CatalogContext {
  ReferenceSet reference;  // may be null when no metric needs one
  std::uint64_t seed = 0;
  /// Known representation ids; empty disables the check.
  std::vector<std::string> representations;
  /// Resolves a per-metric "reference" override; null disables overrides.
  std::function<ReferenceSet(const std::string&)> find_reference;
};

/// Builds a metric from a JSON entry such as
/// {"metric": "fbd", "embedding": "kmer3", "fold": {"K": 3}}.
/// `where` prefixes error messages (e.g. "metrics[1]"). Throws ConfigError.
MetricSpec build_metric(const nlohmann::ordered_json& entry, const CatalogContext& context,
                        const std::string& where);

/// Names accepted by build_metric.
std::vector<std::string> metric_names();

}  // namespace seqeval
