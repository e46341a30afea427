#include "seqeval/hypervolume.hpp"

#include "seqeval/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace seqeval {

namespace {

using Point = std::vector<double>;

bool dominates(const Point& a, const Point& b) {
  bool strict = false;
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c] < b[c]) return false;
    if (a[c] > b[c]) strict = true;
  }
  return strict;
}

std::vector<Point> nondominated(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      dominated = j != i && dominates(pts[j], pts[i]);
    }
    if (!dominated) out.push_back(pts[i]);
  }
  return out;
}

double sweep_2d(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a[0] > b[0]; });
  double area = 0.0;
  double height = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    height = std::max(height, pts[i][1]);
    const double next_x = i + 1 < pts.size() ? pts[i + 1][0] : 0.0;
    area += (pts[i][0] - next_x) * height;
  }
  return area;
}

// Volume dominated by pts (relative to the origin) in the first `dims` coordinates.
double slice(std::vector<Point> pts, std::size_t dims) {
  if (pts.empty()) return 0.0;
  if (dims == 1) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, p[0]);
    return m;
  }
  if (dims == 2) return sweep_2d(std::move(pts));
  const std::size_t last = dims - 1;
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) { return a[last] > b[last]; });
  double volume = 0.0;
  std::vector<Point> active;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    active.push_back(Point(pts[i].begin(), pts[i].begin() + static_cast<std::ptrdiff_t>(last)));
    const double next = i + 1 < pts.size() ? pts[i + 1][last] : 0.0;
    const double height = pts[i][last] - next;
    if (height > 0.0) volume += height * slice(nondominated(active), last);
  }
  return volume;
}

}  // namespace

double hypervolume_indicator(const Matrix& points, const HypervolumeParams& params) {
  const Eigen::Index k = points.cols();
  if (k < 2) throw InvalidInput("hypervolume: needs at least 2 objectives, got " + std::to_string(k));
  const Vector ref = params.reference_point.value_or(Vector::Zero(k));
  if (ref.size() != k) throw InvalidInput("hypervolume: reference point has the wrong dimension");
  std::vector<Point> shifted;
  shifted.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    Point p(static_cast<std::size_t>(k));
    for (Eigen::Index c = 0; c < k; ++c) {
      p[static_cast<std::size_t>(c)] = points(i, c) - ref(c);
      if (!(points(i, c) > ref(c))) {
        throw InvalidInput("hypervolume: point " + std::to_string(i) +
                           " does not dominate the reference point in objective " + std::to_string(c));
      }
    }
    shifted.push_back(std::move(p));
  }
  return slice(nondominated(std::move(shifted)), static_cast<std::size_t>(k));
}

namespace {

int affine_rank(const Matrix& points) {
  if (points.rows() < 2) return 0;
  const Matrix centered = points.rowwise() - points.colwise().mean();
  Eigen::JacobiSVD<Matrix> svd(centered);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > 1e-10 * s(0)) ++rank;
  }
  return rank;
}

double hull_area_2d(const Matrix& m) {
  std::vector<std::array<double, 2>> p(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) p[static_cast<std::size_t>(i)] = {m(i, 0), m(i, 1)};
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> hull(2 * p.size());
  std::size_t h = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], p[i]) <= 0) --h;
    hull[h++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = h + 1; i-- > 0;) {
    while (h >= lower && cross(hull[h - 2], hull[h - 1], p[i]) <= 0) --h;
    hull[h++] = p[i];
  }
  hull.resize(h - 1);
  double twice = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return std::abs(twice) / 2.0;
}

using Vec3 = Eigen::Vector3d;

double orient(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
  return (b - a).cross(c - a).dot(p - a);
}

// Incremental hull: each face (a, b, c) is wound so its normal points outward.
double hull_volume_3d(const Matrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<Vec3> p(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = m.row(i).transpose();

  const double extent = (m.colwise().maxCoeff() - m.colwise().minCoeff()).norm();
  const double eps = 1e-12 * extent * extent * extent;

  // Seed tetrahedron from well-separated points.
  std::size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].x() < p[i0].x()) i0 = i;
  }
  double best = -1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = (p[i] - p[i0]).squaredNorm();
    if (d > best) best = d, i1 = i;
  }
  best = -1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = (p[i1] - p[i0]).cross(p[i] - p[i0]).squaredNorm();
    if (d > best) best = d, i2 = i;
  }
  best = -1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::abs(orient(p[i0], p[i1], p[i2], p[i]));
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps) return 0.0;

  std::vector<std::array<std::size_t, 3>> faces;
  std::vector<char> alive;
  std::unordered_map<std::uint64_t, std::size_t> edge_face;
  const auto key = [&](std::size_t a, std::size_t b) {
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) + b;
  };
  const auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    faces.push_back({a, b, c});
    alive.push_back(1);
    const std::size_t id = faces.size() - 1;
    edge_face[key(a, b)] = id;
    edge_face[key(b, c)] = id;
    edge_face[key(c, a)] = id;
  };
  const Vec3 inside = (p[i0] + p[i1] + p[i2] + p[i3]) / 4.0;
  const auto add_oriented = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (orient(p[a], p[b], p[c], inside) > 0) std::swap(b, c);
    add_face(a, b, c);
  };
  add_oriented(i0, i1, i2);
  add_oriented(i0, i1, i3);
  add_oriented(i0, i2, i3);
  add_oriented(i1, i2, i3);

  std::vector<char> visible;
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (q == i0 || q == i1 || q == i2 || q == i3) continue;
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!alive[f]) continue;
      const auto& v = faces[f];
      if (orient(p[v[0]], p[v[1]], p[v[2]], p[q]) > eps) visible[f] = 1, any = true;
    }
    if (!any) continue;
    std::vector<std::array<std::size_t, 2>> horizon;
    for (std::size_t f = 0; f < visible.size(); ++f) {
      if (!visible[f]) continue;
      const auto& v = faces[f];
      for (int e = 0; e < 3; ++e) {
        const std::size_t a = v[static_cast<std::size_t>(e)];
        const std::size_t b = v[static_cast<std::size_t>((e + 1) % 3)];
        const auto twin = edge_face.find(key(b, a));
        if (twin == edge_face.end() || !visible[twin->second]) horizon.push_back({a, b});
      }
    }
    for (std::size_t f = 0; f < visible.size(); ++f) {
      if (!visible[f]) continue;
      alive[f] = 0;
      const auto& v = faces[f];
      for (int e = 0; e < 3; ++e) {
        const auto it = edge_face.find(key(v[static_cast<std::size_t>(e)], v[static_cast<std::size_t>((e + 1) % 3)]));
        if (it != edge_face.end() && it->second == f) edge_face.erase(it);
      }
    }
    for (const auto& [a, b] : horizon) add_face(a, b, q);
  }

  double volume = 0.0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& v = faces[f];
    if (alive[f]) volume -= orient(p[v[0]], p[v[1]], p[v[2]], inside) / 6.0;
  }
  return volume;
}

}  // namespace

HullVolume convex_hull_volume(const Matrix& points) {
  const Eigen::Index k = points.cols();
  if (k != 2 && k != 3) {
    throw InvalidInput("convex hull volume is supported for 2 or 3 dimensions, got " + std::to_string(k));
  }
  if (points.rows() < k + 1 || affine_rank(points) < k) return {0.0, true};
  const double v = k == 2 ? hull_area_2d(points) : hull_volume_3d(points);
  return {v, v == 0.0};
}

}  // namespace seqeval
