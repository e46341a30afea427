#pragma once

#include "seqeval/types.hpp"

namespace seqeval {

/// Eigenvalues below this fraction of the largest one are treated as zero.
inline constexpr double kRelativeEigenFloor = 1e-10;

/// Symmetric PSD square root S with S*S = M, via eigendecomposition with
/// clamped eigenvalues. Throws InvalidInput when M is not symmetric within
/// 1e-10 (relative to its largest entry) or has eigenvalues below -1e-8.
Matrix matrix_sqrt_psd(const Matrix& m);

/// Eigenvalues of a symmetric matrix, ascending, with small or negative
/// leakage (below kRelativeEigenFloor times the largest) set to zero.
Vector clamped_eigenvalues(const Matrix& symmetric);

/// Column means of the rows.
Vector column_mean(const Matrix& points);

/// Covariance of the rows with n-1 normalization.
Matrix sample_covariance(const Matrix& points);

/// exp of the Renyi entropy of order alpha of a spectrum normalized to sum 1;
/// alpha = 1 is the Shannon limit with 0 log 0 = 0.
double exp_renyi_entropy(const Vector& normalized_spectrum, double alpha);

}  // namespace seqeval
