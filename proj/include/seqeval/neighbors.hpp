#pragma once

#include "seqeval/types.hpp"

#include <cstddef>
#include <vector>

namespace seqeval {

/// A neighbor ordered by (squared distance, index): equal distances favour the
/// smaller index.
struct Neighbor {
  double sq_dist = 0.0;
  Eigen::Index index = -1;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.index < b.index);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

enum class NeighborSearch { automatic, brute_force, kd_tree };

/// Exact k-d tree over the rows of a matrix. The matrix must outlive the tree.
/// Queries return the same neighbors, in the same order, as a brute-force scan.
class KdTree {
 public:
  explicit KdTree(const Matrix& points, std::size_t leaf_size = 16);

  /// k nearest rows to `query` (a pointer to dim() values), skipping `exclude`.
  std::vector<Neighbor> knn(const double* query, std::size_t k, Eigen::Index exclude = -1) const;

  Eigen::Index dim() const { return points_->cols(); }

 private:
  struct Node {
    std::size_t begin = 0, end = 0;
    int left = -1, right = -1;
    Vector lo, hi;
  };

  int build(std::size_t begin, std::size_t end);
  void search(int node, const double* q, std::size_t k, Eigen::Index exclude,
              std::vector<Neighbor>& heap) const;

  const Matrix* points_;
  std::size_t leaf_size_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
};

/// For every row, its k nearest other rows (self excluded by index), sorted.
std::vector<std::vector<Neighbor>> knn_self(const Matrix& points, std::size_t k,
                                            NeighborSearch search = NeighborSearch::automatic);

/// Squared distance from every row to its k-th nearest other row.
std::vector<double> kth_neighbor_sq_distance(const Matrix& points, std::size_t k,
                                             NeighborSearch search = NeighborSearch::automatic);

/// Nearest reference row for every query row.
std::vector<Neighbor> nearest_neighbor(const Matrix& queries, const Matrix& reference,
                                       NeighborSearch search = NeighborSearch::automatic);

}  // namespace seqeval
