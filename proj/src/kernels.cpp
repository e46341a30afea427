#include "seqeval/kernels.hpp"

#include "seqeval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace seqeval {

double median_pairwise_distance(const Matrix& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw InvalidInput("median heuristic needs at least 2 points");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back(squared_distance(points, i, points, j));
  }
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  const double upper = std::sqrt(d[mid]);
  if (d.size() % 2 == 1) return upper;
  const double lower = std::sqrt(*std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid)));
  return 0.5 * (lower + upper);
}

double resolve_sigma(const KernelSpec& spec, const Matrix& pool) {
  if (spec.kind == KernelKind::rational_quadratic && !(spec.alpha > 0.0)) {
    throw InvalidInput("rational quadratic kernel needs alpha > 0");
  }
  if (spec.sigma) {
    if (!(*spec.sigma > 0.0) || !std::isfinite(*spec.sigma)) {
      throw InvalidInput("kernel bandwidth sigma must be a positive finite number");
    }
    return *spec.sigma;
  }
  if (spec.kind == KernelKind::rational_quadratic) return 1.0;
  const double sigma = median_pairwise_distance(pool);
  if (!(sigma > 0.0)) {
    throw InvalidInput(
        "median heuristic resolved sigma = 0 (at least half of the pooled points coincide); "
        "set an explicit kernel sigma");
  }
  return sigma;
}

double kernel_value(const KernelSpec& spec, double sigma, double squared_dist) {
  if (spec.kind == KernelKind::gaussian_rbf) {
    return std::exp(-squared_dist / (2.0 * sigma * sigma));
  }
  return std::pow(1.0 + squared_dist / (2.0 * spec.alpha * sigma * sigma), -spec.alpha);
}

Matrix gram_matrix(const KernelSpec& spec, double sigma, const Matrix& x, const Matrix& y) {
  if (x.cols() != y.cols()) throw InvalidInput("gram_matrix: dimension mismatch");
  Matrix k(x.rows(), y.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      k(i, j) = kernel_value(spec, sigma, squared_distance(x, i, y, j));
    }
  }
  return k;
}

}  // namespace seqeval
