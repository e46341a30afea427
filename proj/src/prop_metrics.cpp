#include "seqeval/prop_metrics.hpp"

#include "seqeval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace seqeval {

IdentityStat identity_stat(const Vector& values) {
  if (values.size() == 0) throw InvalidInput("identity: empty property column");
  const double n = static_cast<double>(values.size());
  const double mean = values.sum() / n;
  const double var = (values.array() - mean).square().sum() / n;
  return {mean, var};
}

double threshold_fraction(const Vector& values, double c, ThresholdSide side) {
  if (values.size() == 0) throw InvalidInput("threshold: empty property column");
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (side == ThresholdSide::above ? values(i) > c : values(i) < c) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(values.size());
}

double hit_rate(const Vector& labels) {
  if (labels.size() == 0) throw InvalidInput("hit_rate: empty label column");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) != 0.0 && labels(i) != 1.0) {
      throw InvalidInput("hit_rate: label " + std::to_string(labels(i)) + " at row " +
                         std::to_string(i) + " is not 0 or 1");
    }
  }
  return labels.sum() / static_cast<double>(labels.size());
}

ConformityMeasure kde_log_likelihood(std::optional<double> bandwidth) {
  return [bandwidth](const Matrix& fit, const Matrix& query) {
    return GaussianKde(fit, bandwidth).log_densities(query);
  };
}

double pairwise_conformity(const Vector& a, const Vector& b) {
  if (a.size() == 0 || b.size() == 0) throw InvalidInput("conformity: empty score set");
  std::vector<double> sorted(b.data(), b.data() + b.size());
  std::sort(sorted.begin(), sorted.end());
  double pairs = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    pairs += static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), a(i)) - sorted.begin());
  }
  return pairs / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double conformity_score(const Matrix& generated, const Matrix& reference,
                        const ConformityParams& params) {
  if (generated.rows() == 0 || reference.rows() == 0) {
    throw InvalidInput("conformity: both sets must be non-empty");
  }
  if (generated.cols() != reference.cols()) throw InvalidInput("conformity: property widths differ");
  if (params.folds < 1) throw InvalidInput("conformity: fold count must be >= 1");
  const ConformityMeasure measure = params.measure ? params.measure : kde_log_likelihood();

  if (params.folds == 1) {
    return pairwise_conformity(measure(reference, generated), measure(reference, reference));
  }

  if (!(params.train_fraction > 0.0 && params.train_fraction < 1.0)) {
    throw InvalidInput("conformity: train fraction must be in (0, 1)");
  }
  const auto m = static_cast<std::size_t>(reference.rows());
  const auto train = static_cast<std::size_t>(std::floor(params.train_fraction * static_cast<double>(m)));
  if (train < 2 || m - train < 1) {
    throw InvalidInput("conformity: reference set of " + std::to_string(m) +
                       " is too small to split into folds");
  }
  std::mt19937_64 rng(params.seed);
  std::vector<std::size_t> order(m);
  double total = 0.0;
  for (std::size_t f = 0; f < params.folds; ++f) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    Matrix fit(static_cast<Eigen::Index>(train), reference.cols());
    Matrix held(static_cast<Eigen::Index>(m - train), reference.cols());
    for (std::size_t i = 0; i < m; ++i) {
      if (i < train) fit.row(static_cast<Eigen::Index>(i)) = reference.row(static_cast<Eigen::Index>(order[i]));
      else held.row(static_cast<Eigen::Index>(i - train)) = reference.row(static_cast<Eigen::Index>(order[i]));
    }
    total += pairwise_conformity(measure(fit, generated), measure(fit, held));
  }
  return total / static_cast<double>(params.folds);
}

double kl_divergence(const Matrix& generated, const Matrix& reference, const KdeParams& params) {
  if (generated.rows() < 2 || reference.rows() < 2) {
    throw InvalidInput("kl_divergence: both sets need at least 2 points");
  }
  if (generated.cols() != reference.cols()) throw InvalidInput("kl_divergence: property widths differ");
  if (params.mc_samples < 1) throw InvalidInput("kl_divergence: mc_samples must be >= 1");
  if (!(params.density_floor > 0.0)) throw InvalidInput("kl_divergence: density floor must be > 0");
  const GaussianKde pg(generated, params.bandwidth);
  const GaussianKde pr(reference, params.bandwidth);
  std::mt19937_64 rng(params.seed);
  const Matrix draws = pg.sample(params.mc_samples, rng);
  const double floor = std::log(params.density_floor);
  double total = 0.0;
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    const Vector x = draws.row(i).transpose();
    total += std::max(pg.log_density(x), floor) - std::max(pr.log_density(x), floor);
  }
  return total / static_cast<double>(draws.rows());
}

double kl_divergence_categorical(const std::vector<std::string>& generated,
                                 const std::vector<std::string>& reference, double epsilon) {
  if (generated.empty() || reference.empty()) throw InvalidInput("kl_divergence: empty label set");
  if (!(epsilon > 0.0)) throw InvalidInput("kl_divergence: epsilon must be > 0");
  std::map<std::string, std::pair<double, double>> freq;
  for (const auto& g : generated) freq[g].first += 1.0;
  for (const auto& r : reference) freq[r].second += 1.0;
  const double c = static_cast<double>(freq.size());
  const double ng = static_cast<double>(generated.size());
  const double nr = static_cast<double>(reference.size());
  double kl = 0.0;
  for (const auto& [label, counts] : freq) {
    const double p = (counts.first / ng + epsilon) / (1.0 + c * epsilon);
    const double q = (counts.second / nr + epsilon) / (1.0 + c * epsilon);
    kl += p * std::log(p / q);
  }
  return std::max(kl, 0.0);
}

}  // namespace seqeval
