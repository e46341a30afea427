#pragma once

// Helpers shared by the test binaries: seeded random data and small
// brute-force reference implementations used as oracles.

#include "seqeval/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

using seqeval::Matrix;
using seqeval::Vector;

inline Matrix random_normal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double mean = 0.0,
                            double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mean, sd);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Matrix random_uniform(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double lo = 0.0,
                             double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline std::vector<std::string> random_strings(std::size_t n, std::size_t min_len, std::size_t max_len,
                                               std::string_view letters, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s(len(rng), ' ');
    for (auto& c : s) c = letters[pick(rng)];
    out.push_back(std::move(s));
  }
  return out;
}

/// Random orthogonal matrix from the QR factorisation of a Gaussian matrix.
inline Eigen::MatrixXd random_rotation(Eigen::Index d, std::uint64_t seed) {
  const Eigen::MatrixXd g = random_normal(d, d, seed);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

/// Full dynamic-programming table, kept deliberately naive.
inline std::size_t levenshtein_table(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) t[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) t[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = std::min({t[i - 1][j] + 1, t[i][j - 1] + 1, t[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    }
  }
  return t[a.size()][b.size()];
}

/// Self-exclusive all-pairs mean normalized edit distance.
inline double diversity_all_pairs(const std::vector<std::string>& g) {
  const std::size_t n = g.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double len = static_cast<double>(std::max(g[i].size(), g[j].size()));
      row += len == 0 ? 0.0 : static_cast<double>(levenshtein_table(g[i], g[j])) / len;
    }
    total += row / static_cast<double>(n - 1);
  }
  return total / static_cast<double>(n);
}

inline double rbf(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j, double sigma) {
  return std::exp(-(a.row(i) - b.row(j)).squaredNorm() / (2.0 * sigma * sigma));
}

/// Unbiased MMD^2 written as four explicit loops.
inline double mmd_four_loops(const Matrix& x, const Matrix& y, double sigma) {
  const auto n = x.rows(), m = y.rows();
  double kxx = 0, kyy = 0, kxy = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) kxx += rbf(x, i, x, j, sigma);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (i != j) kyy += rbf(y, i, y, j, sigma);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) kxy += rbf(x, i, y, j, sigma);
  return kxx / double(n * (n - 1)) + kyy / double(m * (m - 1)) - 2.0 * kxy / double(n * m);
}

/// Median of pairwise distances over the pooled rows.
inline double pooled_median(const Matrix& x, const Matrix& y) {
  Matrix pool(x.rows() + y.rows(), x.cols());
  pool << x, y;
  std::vector<double> d;
  for (Eigen::Index i = 0; i < pool.rows(); ++i)
    for (Eigen::Index j = i + 1; j < pool.rows(); ++j) d.push_back((pool.row(i) - pool.row(j)).norm());
  std::sort(d.begin(), d.end());
  const std::size_t h = d.size() / 2;
  return d.size() % 2 ? d[h] : 0.5 * (d[h - 1] + d[h]);
}

/// Support coverage by direct double loop: fraction of `query` rows inside
/// some `support` row's k-th-neighbour ball.
inline double coverage_brute(const Matrix& query, const Matrix& support, std::size_t k) {
  const auto m = support.rows();
  std::vector<double> radius(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    std::vector<double> d;
    for (Eigen::Index j = 0; j < m; ++j)
      if (j != i) d.push_back((support.row(i) - support.row(j)).squaredNorm());
    std::sort(d.begin(), d.end());
    radius[static_cast<std::size_t>(i)] = d[k - 1];
  }
  std::size_t inside = 0;
  for (Eigen::Index q = 0; q < query.rows(); ++q) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if ((query.row(q) - support.row(i)).squaredNorm() <= radius[static_cast<std::size_t>(i)]) {
        ++inside;
        break;
      }
    }
  }
  return static_cast<double>(inside) / static_cast<double>(query.rows());
}

/// Exact exp-entropy of a symmetric PSD matrix's normalised spectrum.
inline double exp_entropy_dense(const Eigen::MatrixXd& k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  ev /= ev.sum();
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0) h -= ev(i) * std::log(ev(i));
  return std::exp(h);
}

/// Hypervolume / hull area by uniform sampling over a bounding box; returns
/// estimate and standard error.
template <class Inside>
std::pair<double, double> monte_carlo_volume(const Vector& lo, const Vector& hi, std::size_t samples,
                                             std::uint64_t seed, Inside inside) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double box = 1.0;
  for (Eigen::Index c = 0; c < lo.size(); ++c) box *= hi(c) - lo(c);
  Vector x(lo.size());
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (Eigen::Index c = 0; c < lo.size(); ++c) x(c) = lo(c) + (hi(c) - lo(c)) * u(rng);
    hits += inside(x);
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * p, box * std::sqrt(p * (1 - p) / static_cast<double>(samples))};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("seqeval_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

inline std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace testing
