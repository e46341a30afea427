#include "seqeval/kde.hpp"

#include "seqeval/errors.hpp"
#include "seqeval/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace seqeval {

GaussianKde::GaussianKde(const Matrix& data, std::optional<double> bandwidth) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (n < 1 || d < 1) throw InvalidInput("kde: no data to fit");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < d; ++c) {
      if (data(a, c) != data(b, c)) return data(a, c) < data(b, c);
    }
    return false;
  });
  data_.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) data_.row(i) = data.row(order[static_cast<std::size_t>(i)]);

  if (bandwidth) {
    if (!(*bandwidth > 0.0)) throw InvalidInput("kde: bandwidth must be > 0");
    bandwidth_ = Matrix::Identity(d, d) * (*bandwidth * *bandwidth);
  } else {
    if (n < 2) throw InvalidInput("kde: Scott's rule needs at least 2 points, got " + std::to_string(n));
    const double factor = std::pow(static_cast<double>(n), -1.0 / static_cast<double>(d + 4));
    bandwidth_ = sample_covariance(data_) * (factor * factor);
  }
  Eigen::LLT<Matrix> llt(bandwidth_);
  if (llt.info() != Eigen::Success || (bandwidth_.diagonal().array() <= 0.0).any()) {
    throw InvalidInput("kde: bandwidth matrix is singular (constant or collinear data)");
  }
  chol_ = llt.matrixL();
  if ((chol_.diagonal().array() <= 0.0).any()) {
    throw InvalidInput("kde: bandwidth matrix is singular (constant or collinear data)");
  }
  whitened_ = chol_.triangularView<Eigen::Lower>().solve(data_.transpose()).transpose();
  log_norm_ = -std::log(static_cast<double>(n)) -
              0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) -
              chol_.diagonal().array().log().sum();
}

double GaussianKde::log_density(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != dim()) throw InvalidInput("kde: query dimension mismatch");
  const Vector w = chol_.triangularView<Eigen::Lower>().solve(x);
  const Eigen::Index n = whitened_.rows();
  Vector expo(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < w.size(); ++c) {
      const double diff = w(c) - whitened_(i, c);
      s += diff * diff;
    }
    expo(i) = -0.5 * s;
  }
  const double top = expo.maxCoeff();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) sum += std::exp(expo(i) - top);
  return top + std::log(sum) + log_norm_;
}

Vector GaussianKde::log_densities(const Matrix& points) const {
  Vector out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out(i) = log_density(points.row(i).transpose());
  return out;
}

Matrix GaussianKde::sample(std::size_t count, std::mt19937_64& rng) const {
  std::uniform_int_distribution<Eigen::Index> pick(0, data_.rows() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(static_cast<Eigen::Index>(count), dim());
  Vector z(dim());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const Eigen::Index src = pick(rng);
    for (Eigen::Index c = 0; c < z.size(); ++c) z(c) = normal(rng);
    out.row(i) = data_.row(src) + (chol_ * z).transpose();
  }
  return out;
}

}  // namespace seqeval
