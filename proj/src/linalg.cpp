#include "seqeval/linalg.hpp"

#include "seqeval/errors.hpp"

#include <cmath>

namespace seqeval {

namespace {

void require_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw InvalidInput(std::string(what) + ": matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw InvalidInput(std::string(what) + ": matrix is not symmetric (max asymmetry " +
                       std::to_string(asym) + ")");
  }
}

}  // namespace

Matrix matrix_sqrt_psd(const Matrix& m) {
  require_symmetric(m, "matrix_sqrt_psd");
  if (m.rows() == 0) return m;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw InvalidInput("matrix_sqrt_psd: eigensolver failed");
  Vector ev = solver.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -1e-8 * std::max(1.0, top)) {
    throw InvalidInput("matrix_sqrt_psd: matrix is not positive semi-definite (eigenvalue " +
                       std::to_string(ev.minCoeff()) + ")");
  }
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    ev(i) = ev(i) <= kRelativeEigenFloor * top ? 0.0 : std::sqrt(ev(i));
  }
  const auto& v = solver.eigenvectors();
  Matrix s = v * ev.asDiagonal() * v.transpose();
  return 0.5 * (s + s.transpose());
}

Vector clamped_eigenvalues(const Matrix& symmetric) {
  if (symmetric.rows() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvalidInput("eigensolver failed");
  Vector ev = solver.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) <= kRelativeEigenFloor * top) ev(i) = 0.0;
  }
  return ev;
}

Vector column_mean(const Matrix& points) {
  return points.colwise().mean().transpose();
}

Matrix sample_covariance(const Matrix& points) {
  if (points.rows() < 2) throw InvalidInput("covariance needs at least 2 rows");
  const Matrix centered = points.rowwise() - points.colwise().mean();
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(points.rows() - 1);
  return 0.5 * (cov + cov.transpose());
}

double exp_renyi_entropy(const Vector& p, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("Renyi order must be > 0");
  if (alpha == 1.0) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p(i) > 0.0) h -= p(i) * std::log(p(i));
    }
    return std::exp(h);
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) s += std::pow(p(i), alpha);
  }
  return std::exp(std::log(s) / (1.0 - alpha));
}

}  // namespace seqeval
