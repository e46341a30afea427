#pragma once

#include "seqeval/kernels.hpp"
#include "seqeval/neighbors.hpp"
#include "seqeval/types.hpp"

#include <cstdint>
#include <optional>

namespace seqeval {

/// Mean and sample covariance of an embedding set.
struct GaussianSummary {
  Vector mean;
  Matrix covariance;
  Eigen::Index n = 0;

  static GaussianSummary fit(const Matrix& points);
};

/// Frechet distance between Gaussians fitted to the two sets:
/// |mu_g - mu_r|^2 + tr(S_g + S_r - 2 (S_g S_r)^1/2), with the trace of the
/// product root taken as tr((sqrt(S_g) S_r sqrt(S_g))^1/2). Clamped at 0.
double fbd(const Matrix& generated, const Matrix& reference);
double fbd(const GaussianSummary& generated, const GaussianSummary& reference);

/// tr((a b)^1/2) for symmetric PSD a and b through the symmetric conjugated form.
double trace_sqrt_product(const Matrix& a, const Matrix& b);

/// Unbiased MMD^2 estimator (within-set diagonals excluded). The median
/// heuristic, when selected, is computed on the pooled sets.
double mmd(const Matrix& generated, const Matrix& reference, const KernelSpec& kernel = {});

struct NeighborhoodParams {
  std::size_t k = 3;
  NeighborSearch search = NeighborSearch::automatic;
};

/// Fraction of generated points inside some reference point's k-NN ball.
double improved_precision(const Matrix& generated, const Matrix& reference,
                          const NeighborhoodParams& params = {});

/// Fraction of reference points inside some generated point's k-NN ball.
double improved_recall(const Matrix& generated, const Matrix& reference,
                       const NeighborhoodParams& params = {});

/// Fraction of generated points farther from their nearest reference point than
/// that reference point is from its own nearest other reference point.
double authenticity(const Matrix& generated, const Matrix& reference,
                    NeighborSearch search = NeighborSearch::automatic);

/// exp of the Shannon entropy of the trace-normalized Gram spectrum.
double vendi_exact(const Matrix& points, const KernelSpec& kernel = {});

/// Spectrum-based variant with Renyi order alpha on the exact Gram matrix.
double vendi_exact(const Matrix& points, const KernelSpec& kernel, double renyi_alpha);

struct FkeaParams {
  std::size_t num_features = 256;  // m; the feature map has 2m entries
  double renyi_alpha = 1.0;
  std::uint64_t seed = 0;
  std::optional<double> sigma;  // nullopt: median heuristic
};

/// Random Fourier feature map z -> sqrt(1/m) [cos(w_i.z), sin(w_i.z)]_i, with
/// frequencies w_i ~ N(0, sigma^-2 I) drawn from `seed`. n x 2m.
Matrix fourier_features(const Matrix& points, std::size_t num_features, double sigma,
                        std::uint64_t seed);

/// Vendi score approximated from the 2m x 2m feature covariance spectrum.
double vendi_fkea(const Matrix& points, const FkeaParams& params = {});

}  // namespace seqeval
