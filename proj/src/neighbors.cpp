#include "seqeval/neighbors.hpp"

#include "seqeval/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace seqeval {

namespace {

double point_sq_distance(const double* a, const double* b, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    s += diff * diff;
  }
  return s;
}

void push_bounded(std::vector<Neighbor>& heap, std::size_t k, Neighbor n) {
  if (heap.size() < k) {
    heap.push_back(n);
    std::push_heap(heap.begin(), heap.end());
  } else if (n < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = n;
    std::push_heap(heap.begin(), heap.end());
  }
}

bool use_tree(const Matrix& points, NeighborSearch search) {
  if (search == NeighborSearch::automatic) return points.cols() <= 12 && points.rows() >= 128;
  return search == NeighborSearch::kd_tree;
}

std::vector<Neighbor> brute_knn(const Matrix& points, const double* q, std::size_t k,
                                Eigen::Index exclude) {
  std::vector<Neighbor> heap;
  heap.reserve(k + 1);
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    if (j == exclude) continue;
    push_bounded(heap, k, {point_sq_distance(q, points.data() + j * points.cols(), points.cols()), j});
  }
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

}  // namespace

KdTree::KdTree(const Matrix& points, std::size_t leaf_size)
    : points_(&points), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  order_.resize(static_cast<std::size_t>(points.rows()));
  std::iota(order_.begin(), order_.end(), Eigen::Index{0});
  if (!order_.empty()) build(0, order_.size());
}

int KdTree::build(std::size_t begin, std::size_t end) {
  const Eigen::Index d = points_->cols();
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
  node.hi = Vector::Constant(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = begin; i < end; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) {
      const double v = (*points_)(order_[i], c);
      node.lo(c) = std::min(node.lo(c), v);
      node.hi(c) = std::max(node.hi(c), v);
    }
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= leaf_size_ || d == 0) return id;

  Eigen::Index axis = 0;
  (node.hi - node.lo).maxCoeff(&axis);
  if (node.hi(axis) == node.lo(axis)) return id;
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return (*points_)(a, axis) < (*points_)(b, axis);
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

void KdTree::search(int node_id, const double* q, std::size_t k, Eigen::Index exclude,
                    std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  const Eigen::Index d = points_->cols();
  if (heap.size() == k) {
    // Lower bound on the distance to anything in the box; floating-point
    // subtraction is monotone, so it never exceeds a computed point distance.
    double bound = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) {
      double gap = 0.0;
      if (q[c] < node.lo(c)) gap = node.lo(c) - q[c];
      else if (q[c] > node.hi(c)) gap = q[c] - node.hi(c);
      bound += gap * gap;
    }
    if (bound > heap.front().sq_dist) return;
  }
  if (node.left < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const Eigen::Index j = order_[i];
      if (j == exclude) continue;
      push_bounded(heap, k, {point_sq_distance(q, points_->data() + j * d, d), j});
    }
    return;
  }
  const Node& l = nodes_[static_cast<std::size_t>(node.left)];
  const Node& r = nodes_[static_cast<std::size_t>(node.right)];
  auto centre_gap = [&](const Node& n) {
    double g = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) {
      const double m = 0.5 * (n.lo(c) + n.hi(c));
      g += (q[c] - m) * (q[c] - m);
    }
    return g;
  };
  if (centre_gap(l) <= centre_gap(r)) {
    search(node.left, q, k, exclude, heap);
    search(node.right, q, k, exclude, heap);
  } else {
    search(node.right, q, k, exclude, heap);
    search(node.left, q, k, exclude, heap);
  }
}

std::vector<Neighbor> KdTree::knn(const double* query, std::size_t k, Eigen::Index exclude) const {
  std::vector<Neighbor> heap;
  if (k == 0 || nodes_.empty()) return heap;
  heap.reserve(k + 1);
  search(0, query, k, exclude, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

std::vector<std::vector<Neighbor>> knn_self(const Matrix& points, std::size_t k,
                                            NeighborSearch search) {
  if (k >= static_cast<std::size_t>(points.rows())) {
    throw InvalidInput("k = " + std::to_string(k) + " needs more than " + std::to_string(k) +
                       " points, got " + std::to_string(points.rows()));
  }
  std::vector<std::vector<Neighbor>> out(static_cast<std::size_t>(points.rows()));
  if (use_tree(points, search)) {
    const KdTree tree(points);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      out[static_cast<std::size_t>(i)] = tree.knn(points.data() + i * points.cols(), k, i);
    }
  } else {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      out[static_cast<std::size_t>(i)] = brute_knn(points, points.data() + i * points.cols(), k, i);
    }
  }
  return out;
}

std::vector<double> kth_neighbor_sq_distance(const Matrix& points, std::size_t k,
                                             NeighborSearch search) {
  const auto nn = knn_self(points, k, search);
  std::vector<double> out(nn.size());
  for (std::size_t i = 0; i < nn.size(); ++i) out[i] = nn[i].back().sq_dist;
  return out;
}

std::vector<Neighbor> nearest_neighbor(const Matrix& queries, const Matrix& reference,
                                       NeighborSearch search) {
  if (queries.cols() != reference.cols()) throw InvalidInput("nearest_neighbor: dimension mismatch");
  if (reference.rows() == 0) throw InvalidInput("nearest_neighbor: empty reference");
  std::vector<Neighbor> out(static_cast<std::size_t>(queries.rows()));
  if (use_tree(reference, search)) {
    const KdTree tree(reference);
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      out[static_cast<std::size_t>(i)] = tree.knn(queries.data() + i * queries.cols(), 1).front();
    }
  } else {
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      out[static_cast<std::size_t>(i)] =
          brute_knn(reference, queries.data() + i * queries.cols(), 1, -1).front();
    }
  }
  return out;
}

}  // namespace seqeval
