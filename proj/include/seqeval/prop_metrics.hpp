#pragma once

#include "seqeval/kde.hpp"
#include "seqeval/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace seqeval {

struct IdentityStat {
  double mean = 0.0;
  double variance = 0.0;  // population (1/n)
};

IdentityStat identity_stat(const Vector& values);

enum class ThresholdSide { above, below };

/// Fraction of values strictly above (or below) c.
double threshold_fraction(const Vector& values, double c, ThresholdSide side = ThresholdSide::above);

/// Mean of a {0,1} column; throws InvalidInput on any other value.
double hit_rate(const Vector& labels);

/// Conformity measure: scores `query` rows given the rows `fit` it is fitted on.
/// Must be permutation equivariant in `query` and invariant in `fit`.
using ConformityMeasure = std::function<Vector(const Matrix& fit, const Matrix& query)>;

/// Log-likelihood under a Gaussian KDE fitted on `fit`.
ConformityMeasure kde_log_likelihood(std::optional<double> bandwidth = std::nullopt);

struct ConformityParams {
  ConformityMeasure measure;  // empty: kde_log_likelihood()
  std::size_t folds = 1;
  std::uint64_t seed = 0;
  /// Share of the reference set used to fit the measure in each fold (K > 1).
  double train_fraction = 0.5;
};

/// Fraction of (a, b) pairs with a >= b.
double pairwise_conformity(const Vector& generated_scores, const Vector& reference_scores);

/// With K = 1 the measure is fitted on the whole reference set and scores
/// both sets. With K > 1 each fold fits on a seeded train split of the
/// reference, scores the held-out split against the generated set, and the
/// fold values are averaged.
double conformity_score(const Matrix& generated, const Matrix& reference,
                        const ConformityParams& params = {});

struct KdeParams {
  std::optional<double> bandwidth;  // nullopt: Scott's rule
  std::size_t mc_samples = 10000;
  std::uint64_t seed = 0;
  double density_floor = 1e-12;
};

/// Monte-Carlo estimate of KL(p_G || p_R) between Gaussian KDEs of the two
/// sets, with samples drawn from p_G and both densities floored at epsilon.
double kl_divergence(const Matrix& generated, const Matrix& reference, const KdeParams& params = {});

/// Exact KL between empirical category frequencies, each smoothed as
/// (p + eps) / (1 + C eps) over the C categories seen in either set.
double kl_divergence_categorical(const std::vector<std::string>& generated,
                                 const std::vector<std::string>& reference, double epsilon = 1e-12);

}  // namespace seqeval
