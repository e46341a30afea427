#pragma once

#include "seqeval/types.hpp"

#include <optional>
#include <random>

namespace seqeval {

/// Gaussian kernel density estimate with a full bandwidth matrix.
///
/// Default bandwidth follows Scott's rule (sample covariance scaled by
/// n^(-2/(d+4))); a fixed bandwidth h gives h^2 I. Fit points are stored in
/// lexicographic order, so the estimate does not depend on input order.
class GaussianKde {
 public:
  explicit GaussianKde(const Matrix& data, std::optional<double> bandwidth = std::nullopt);

  Eigen::Index dim() const { return whitened_.cols(); }
  Eigen::Index size() const { return whitened_.rows(); }
  const Matrix& bandwidth_matrix() const { return bandwidth_; }

  double log_density(const Eigen::Ref<const Vector>& x) const;
  /// Log density at every row of `points`.
  Vector log_densities(const Matrix& points) const;

  /// Draws from the mixture: a uniformly chosen fit point plus N(0, H) noise.
  Matrix sample(std::size_t count, std::mt19937_64& rng) const;

 private:
  Matrix data_;
  Matrix bandwidth_;
  Matrix chol_;  // lower factor of the bandwidth matrix
  Matrix whitened_;
  double log_norm_ = 0.0;
};

}  // namespace seqeval
