#include "seqeval/embed_metrics.hpp"

#include "seqeval/errors.hpp"
#include "seqeval/linalg.hpp"

#include <cmath>
#include <random>

namespace seqeval {

namespace {

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.cols() != b.cols()) {
    throw InvalidInput(std::string(what) + ": embedding dimensions differ (" +
                       std::to_string(a.cols()) + " vs " + std::to_string(b.cols()) + ")");
  }
}

void require_rows(const Matrix& m, Eigen::Index min_rows, const char* what, const char* which) {
  if (m.rows() < min_rows) {
    throw InvalidInput(std::string(what) + ": " + which + " set needs at least " +
                       std::to_string(min_rows) + " points, got " + std::to_string(m.rows()));
  }
}

}  // namespace

GaussianSummary GaussianSummary::fit(const Matrix& points) {
  return {column_mean(points), sample_covariance(points), points.rows()};
}

double trace_sqrt_product(const Matrix& a, const Matrix& b) {
  const Matrix root_a = matrix_sqrt_psd(a);
  const Matrix inner = root_a * b * root_a;
  const Vector ev = clamped_eigenvalues(0.5 * (inner + inner.transpose()));
  return ev.cwiseSqrt().sum();
}

double fbd(const GaussianSummary& g, const GaussianSummary& r) {
  if (g.mean.size() != r.mean.size()) throw InvalidInput("fbd: embedding dimensions differ");
  const double mean_term = (g.mean - r.mean).squaredNorm();
  const double trace_term = g.covariance.trace() + r.covariance.trace() -
                            2.0 * trace_sqrt_product(g.covariance, r.covariance);
  return mean_term + std::max(trace_term, 0.0);
}

double fbd(const Matrix& generated, const Matrix& reference) {
  require_same_dim(generated, reference, "fbd");
  require_rows(generated, 2, "fbd", "generated");
  require_rows(reference, 2, "fbd", "reference");
  return fbd(GaussianSummary::fit(generated), GaussianSummary::fit(reference));
}

double mmd(const Matrix& x, const Matrix& y, const KernelSpec& kernel) {
  require_same_dim(x, y, "mmd");
  require_rows(x, 2, "mmd", "generated");
  require_rows(y, 2, "mmd", "reference");
  Matrix pool;
  if (!kernel.sigma && kernel.kind == KernelKind::gaussian_rbf) {
    pool.resize(x.rows() + y.rows(), x.cols());
    pool << x, y;
  }
  const double sigma = resolve_sigma(kernel, pool);
  const double n = static_cast<double>(x.rows());
  const double m = static_cast<double>(y.rows());

  double kxx = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) kxx += kernel_value(kernel, sigma, squared_distance(x, i, x, j));
  }
  double kyy = 0.0;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < y.rows(); ++j) kyy += kernel_value(kernel, sigma, squared_distance(y, i, y, j));
  }
  double kxy = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) kxy += kernel_value(kernel, sigma, squared_distance(x, i, y, j));
  }
  return 2.0 * kxx / (n * (n - 1)) + 2.0 * kyy / (m * (m - 1)) - 2.0 * kxy / (n * m);
}

namespace {

// Fraction of `queries` within the k-NN ball of at least one `support` point.
double manifold_coverage(const Matrix& queries, const Matrix& support, const NeighborhoodParams& p,
                         const char* what) {
  require_same_dim(queries, support, what);
  if (p.k < 1) throw InvalidInput(std::string(what) + ": k must be >= 1");
  if (static_cast<std::size_t>(support.rows()) <= p.k) {
    throw InvalidInput(std::string(what) + ": support set needs more than k = " +
                       std::to_string(p.k) + " points, got " + std::to_string(support.rows()));
  }
  if (queries.rows() == 0) throw InvalidInput(std::string(what) + ": empty query set");
  const auto radii = kth_neighbor_sq_distance(support, p.k, p.search);
  Eigen::Index inside = 0;
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    for (Eigen::Index j = 0; j < support.rows(); ++j) {
      if (squared_distance(queries, i, support, j) <= radii[static_cast<std::size_t>(j)]) {
        ++inside;
        break;
      }
    }
  }
  return static_cast<double>(inside) / static_cast<double>(queries.rows());
}

}  // namespace

double improved_precision(const Matrix& generated, const Matrix& reference,
                          const NeighborhoodParams& params) {
  return manifold_coverage(generated, reference, params, "improved_precision");
}

double improved_recall(const Matrix& generated, const Matrix& reference,
                       const NeighborhoodParams& params) {
  return manifold_coverage(reference, generated, params, "improved_recall");
}

double authenticity(const Matrix& generated, const Matrix& reference, NeighborSearch search) {
  require_same_dim(generated, reference, "authenticity");
  require_rows(reference, 2, "authenticity", "reference");
  require_rows(generated, 1, "authenticity", "generated");
  const auto closest = nearest_neighbor(generated, reference, search);
  const auto reference_gap = kth_neighbor_sq_distance(reference, 1, search);
  Eigen::Index authentic = 0;
  for (const auto& c : closest) {
    if (c.sq_dist > reference_gap[static_cast<std::size_t>(c.index)]) ++authentic;
  }
  return static_cast<double>(authentic) / static_cast<double>(generated.rows());
}

namespace {

double normalized_spectrum_score(const Matrix& gram, double alpha) {
  for (Eigen::Index i = 0; i < gram.size(); ++i) {
    if (!std::isfinite(gram.data()[i])) throw InvalidInput("vendi: non-finite kernel matrix");
  }
  const double trace = gram.trace();
  if (!(trace > 0.0)) throw InvalidInput("vendi: kernel matrix has zero trace");
  Vector ev = clamped_eigenvalues(gram / trace);
  ev /= ev.sum();
  return exp_renyi_entropy(ev, alpha);
}

}  // namespace

double vendi_exact(const Matrix& points, const KernelSpec& kernel, double renyi_alpha) {
  require_rows(points, 1, "vendi", "input");
  if (points.rows() == 1) return 1.0;
  const double sigma = (!kernel.sigma && kernel.kind == KernelKind::gaussian_rbf)
                           ? resolve_sigma(kernel, points)
                           : resolve_sigma(kernel, Matrix());
  return normalized_spectrum_score(gram_matrix(kernel, sigma, points, points), renyi_alpha);
}

double vendi_exact(const Matrix& points, const KernelSpec& kernel) {
  return vendi_exact(points, kernel, 1.0);
}

Matrix fourier_features(const Matrix& points, std::size_t m, double sigma, std::uint64_t seed) {
  if (m < 1) throw InvalidInput("fkea: number of features must be >= 1");
  if (!(sigma > 0.0)) throw InvalidInput("fkea: sigma must be > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix omega(static_cast<Eigen::Index>(m), points.cols());
  for (Eigen::Index i = 0; i < omega.size(); ++i) omega.data()[i] = normal(rng) / sigma;

  const Matrix proj = points * omega.transpose();  // n x m
  const double scale = std::sqrt(1.0 / static_cast<double>(m));
  Matrix phi(points.rows(), static_cast<Eigen::Index>(2 * m));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
      phi(i, 2 * j) = scale * std::cos(proj(i, j));
      phi(i, 2 * j + 1) = scale * std::sin(proj(i, j));
    }
  }
  return phi;
}

double vendi_fkea(const Matrix& points, const FkeaParams& params) {
  if (!(params.renyi_alpha > 0.0)) throw InvalidInput("fkea: Renyi alpha must be > 0");
  require_rows(points, 1, "fkea", "input");
  if (points.rows() == 1 && !params.sigma) return 1.0;
  const double sigma = params.sigma ? resolve_sigma(KernelSpec::rbf(params.sigma), Matrix())
                                    : resolve_sigma(KernelSpec::rbf(), points);
  const Matrix phi = fourier_features(points, params.num_features, sigma, params.seed);
  const Matrix cov = phi.transpose() * phi;  // 2m x 2m, shares the nonzero spectrum of phi phi^T
  return normalized_spectrum_score(0.5 * (cov + cov.transpose()), params.renyi_alpha);
}

}  // namespace seqeval
