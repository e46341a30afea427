#include "seqeval/diagnostics.hpp"

#include "seqeval/errors.hpp"
#include "seqeval/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace seqeval {

double knn_feature_alignment(const Matrix& embeddings, const std::vector<std::string>& labels,
                             std::size_t k, NeighborSearch search) {
  if (static_cast<std::size_t>(embeddings.rows()) != labels.size()) {
    throw InvalidInput("feature alignment: " + std::to_string(labels.size()) + " labels for " +
                       std::to_string(embeddings.rows()) + " embeddings");
  }
  if (k < 1) throw InvalidInput("feature alignment: k must be >= 1");
  if (k >= labels.size()) {
    throw InvalidInput("feature alignment: k = " + std::to_string(k) + " needs more than k points, got " +
                       std::to_string(labels.size()));
  }
  const auto nn = knn_self(embeddings, k, search);
  double total = 0.0;
  for (std::size_t i = 0; i < nn.size(); ++i) {
    std::size_t same = 0;
    for (const auto& nb : nn[i]) same += labels[static_cast<std::size_t>(nb.index)] == labels[i];
    total += static_cast<double>(same) / static_cast<double>(k);
  }
  return total / static_cast<double>(nn.size());
}

Vector average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Vector ranks(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks(static_cast<Eigen::Index>(order[t])) = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw InvalidInput("spearman: inputs have different lengths");
  if (u.size() < 3) throw InvalidInput("spearman: needs at least 3 values");
  const Vector ru = average_ranks(u);
  const Vector rv = average_ranks(v);
  const Vector cu = ru.array() - ru.mean();
  const Vector cv = rv.array() - rv.mean();
  const double su = cu.squaredNorm();
  const double sv = cv.squaredNorm();
  if (su == 0.0 || sv == 0.0) {
    throw InvalidInput("spearman: zero rank variance (all values tied)");
  }
  return std::clamp(cu.dot(cv) / std::sqrt(su * sv), -1.0, 1.0);
}

double spearman_alignment(const Matrix& embeddings, const Matrix& properties,
                          const SpearmanAlignmentParams& params) {
  const Eigen::Index n = embeddings.rows();
  if (properties.rows() != n) {
    throw InvalidInput("spearman alignment: " + std::to_string(properties.rows()) +
                       " property rows for " + std::to_string(n) + " embeddings");
  }
  if (n < 3) throw InvalidInput("spearman alignment: needs at least 3 points");
  std::vector<double> de, dp;
  auto add_pair = [&](Eigen::Index i, Eigen::Index j) {
    de.push_back(std::sqrt(squared_distance(embeddings, i, embeddings, j)));
    dp.push_back(std::sqrt(squared_distance(properties, i, properties, j)));
  };
  if (params.sample_pairs && static_cast<std::size_t>(n) > params.subsample_above) {
    std::mt19937_64 rng(params.seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    for (std::size_t s = 0; s < *params.sample_pairs; ++s) {
      Eigen::Index i = pick(rng), j = pick(rng);
      while (j == i) j = pick(rng);
      add_pair(i, j);
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) add_pair(i, j);
    }
  }
  if (std::all_of(dp.begin(), dp.end(), [&](double x) { return x == dp.front(); })) {
    throw InvalidInput("spearman alignment: property distances are all equal (constant property)");
  }
  return spearman_rho(de, dp);
}

PcaProjection pca_project(const Matrix& embeddings, std::size_t out_dim) {
  const Eigen::Index n = embeddings.rows();
  const Eigen::Index d = embeddings.cols();
  if (out_dim < 1) throw InvalidInput("pca: output dimension must be >= 1");
  if (static_cast<Eigen::Index>(out_dim) > n) {
    throw InvalidInput("pca: " + std::to_string(n) + " points cannot give " + std::to_string(out_dim) +
                       " components");
  }
  PcaProjection out;
  const auto q = static_cast<Eigen::Index>(out_dim);
  const Matrix centered = embeddings.rowwise() - embeddings.colwise().mean();
  const Matrix scatter = centered.transpose() * centered;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (scatter + scatter.transpose()));
  if (solver.info() != Eigen::Success) throw InvalidInput("pca: eigensolver failed");
  const Vector ev = solver.eigenvalues().cwiseMax(0.0);  // ascending
  const double total = ev.sum();
  const double floor = 1e-12 * std::max(ev.maxCoeff(), 0.0);

  out.components = Matrix::Zero(q, d);
  out.explained_variance = Vector::Zero(q);
  Eigen::Index rank_used = 0;
  for (Eigen::Index c = 0; c < q && c < d; ++c) {
    const Eigen::Index src = d - 1 - c;
    if (!(ev(src) > floor) || total <= 0.0) continue;
    Vector axis = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0) axis = -axis;
    out.components.row(c) = axis.transpose();
    out.explained_variance(c) = ev(src) / total;
    ++rank_used;
  }
  if (rank_used < q) {
    out.warnings.push_back("pca: data has rank " + std::to_string(rank_used) + " < " +
                           std::to_string(q) + "; trailing components are zero");
  }
  out.coordinates = centered * out.components.transpose();
  return out;
}

}  // namespace seqeval
