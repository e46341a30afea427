#pragma once

#include "seqeval/types.hpp"

#include <optional>

namespace seqeval {

enum class KernelKind { gaussian_rbf, rational_quadratic };

/// Gaussian RBF exp(-|x-y|^2 / (2 sigma^2)) or rational quadratic
/// (1 + |x-y|^2 / (2 alpha sigma^2))^-alpha.
struct KernelSpec {
  KernelKind kind = KernelKind::gaussian_rbf;
  /// nullopt selects the median heuristic (RBF) or 1.0 (rational quadratic).
  std::optional<double> sigma;
  double alpha = 1.0;

  static KernelSpec rbf(std::optional<double> sigma = std::nullopt) {
    return {KernelKind::gaussian_rbf, sigma, 1.0};
  }
  static KernelSpec rational_quadratic(double alpha = 1.0, std::optional<double> sigma = 1.0) {
    return {KernelKind::rational_quadratic, sigma, alpha};
  }
};

/// Squared Euclidean distance between row i of a and row j of b.
inline double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  double s = 0.0;
  const double* pa = a.data() + i * a.cols();
  const double* pb = b.data() + j * b.cols();
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const double d = pa[c] - pb[c];
    s += d * d;
  }
  return s;
}

/// Median of all pairwise Euclidean distances among the rows (mean of the two
/// middle values for an even pair count).
double median_pairwise_distance(const Matrix& points);

/// Bandwidth after applying the heuristic to `pool`; throws InvalidInput when
/// it resolves to 0 or the spec is invalid.
double resolve_sigma(const KernelSpec& spec, const Matrix& pool);

/// Kernel value at a given squared distance with a resolved sigma.
double kernel_value(const KernelSpec& spec, double sigma, double squared_dist);

Matrix gram_matrix(const KernelSpec& spec, double sigma, const Matrix& x, const Matrix& y);

}  // namespace seqeval
