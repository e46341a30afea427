#pragma once

#include "seqeval/neighbors.hpp"
#include "seqeval/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace seqeval {

/// Mean fraction of each point's k nearest neighbors (self excluded, ties to
/// the smaller index) that share its label.
double knn_feature_alignment(const Matrix& embeddings, const std::vector<std::string>& labels,
                             std::size_t k, NeighborSearch search = NeighborSearch::automatic);

/// Average ranks (1-based, ties share the mean rank).
Vector average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. Throws InvalidInput when either
/// input has zero rank variance or lengths differ or are below 3.
double spearman_rho(std::span<const double> u, std::span<const double> v);

struct SpearmanAlignmentParams {
  /// When set and n exceeds `subsample_above`, this many seeded random pairs
  /// are used instead of all n(n-1)/2.
  std::optional<std::size_t> sample_pairs;
  std::size_t subsample_above = 2000;
  std::uint64_t seed = 0;
};

/// Spearman correlation between pairwise embedding distances and pairwise
/// property distances (Euclidean over property columns).
double spearman_alignment(const Matrix& embeddings, const Matrix& properties,
                          const SpearmanAlignmentParams& params = {});

struct PcaProjection {
  Matrix coordinates;           // n x out_dim
  Vector explained_variance;    // fraction of total variance per component
  Matrix components;            // out_dim x d, unit rows
  std::vector<std::string> warnings;
};

/// Mean-centred projection onto the top principal components, ordered by
/// decreasing variance; each component's largest-magnitude loading is positive.
PcaProjection pca_project(const Matrix& embeddings, std::size_t out_dim);

}  // namespace seqeval
