// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "hill_climber.hpp"
#include "process.hpp"
#include "seqeval/cache.hpp"
#include "seqeval/catalog.hpp"
#include "seqeval/chart.hpp"
#include "seqeval/config.hpp"
#include "seqeval/diagnostics.hpp"
#include "seqeval/engine.hpp"
#include "seqeval/errors.hpp"
#include "seqeval/io.hpp"
#include "seqeval/kernels.hpp"
#include "seqeval/linalg.hpp"
#include "seqeval/report.hpp"
#include "seqeval/representations.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

using namespace seqeval;
namespace fs = std::filesystem;
using testing::quote;

namespace {

const fs::path usage_box = fs::path(SEQEVAL_FIXTURES) / "usage_box";
const char* kAminoAcids = "ACDEFGHIKLMNPQRSTVWY";

const std::string golden_table =
    "| group | Diversity ↑ | FBD ↓ |\n"
    "|---|---|---|\n"
    "| UniProt | 0.8778 | 0.0000 |\n"
    "| DBAASP | 0.9444 | 0.5169 |\n";

testing::Run cli(const std::string& args) { return testing::run_tool(SEQEVAL_BIN, args); }

/// Collects failed checks of one criterion.
class Checks {
 public:
  void that(bool ok, const std::string& what) {
    ++count_;
    if (!ok) failures_.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream msg;
    msg.precision(12);
    msg << what << ": got " << got << ", want " << want << " +- " << tol;
    that(std::isfinite(got) && std::abs(got - want) <= tol, msg.str());
  }
  void exact(double got, double want, const std::string& what) { near(got, want, 0.0, what); }
  /// The callable must throw.
  template <class F>
  void throws(F f, const std::string& what) {
    bool threw = false;
    try {
      f();
    } catch (const std::exception&) {
      threw = true;
    }
    that(threw, what + ": expected an error");
  }
  void note(std::string s) { notes_.push_back(std::move(s)); }

  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }
  std::size_t count() const { return count_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t count_ = 0;
};

bool all_passed = true;

void criterion(const std::string& name, double time_limit_s, const std::function<void(Checks&)>& body) {
  Checks c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.that(false, std::string("unexpected exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.2f s (limit %.0f s)", secs, time_limit_s);
    c.that(secs < time_limit_s, buf);
  }
  const bool ok = c.failures().empty();
  all_passed = all_passed && ok;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu checks, %.2f s", c.count(), secs);
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  (" << buf;
  for (const auto& n : c.notes()) std::cout << "; " << n;
  std::cout << ")\n";
  for (const auto& f : c.failures()) std::cout << "      - " << f << "\n";
}

Matrix col(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

Vector vec(std::initializer_list<double> v) { return col(v).col(0); }

SequenceSet set_of(std::vector<std::string> s, std::string name = "g") { return SequenceSet(std::move(name), std::move(s)); }

MetricSpec constant_metric(std::string name, double c) {
  MetricSpec m;
  m.name = std::move(name);
  m.compute = [c](const MetricContext&) { return MetricValue{c}; };
  return m;
}

struct CountingEmbedder {
  std::shared_ptr<std::atomic<std::size_t>> calls = std::make_shared<std::atomic<std::size_t>>(0);
  std::shared_ptr<std::vector<std::string>> seen = std::make_shared<std::vector<std::string>>();
  std::shared_ptr<std::mutex> mu = std::make_shared<std::mutex>();

  BatchModel model() const {
    return [*this](std::span<const std::string> seqs) {
      std::lock_guard lock(*mu);
      Matrix out(static_cast<Eigen::Index>(seqs.size()), 3);
      for (std::size_t i = 0; i < seqs.size(); ++i) {
        ++*calls;
        seen->push_back(seqs[i]);
        const auto r = static_cast<Eigen::Index>(i);
        out(r, 0) = static_cast<double>(seqs[i].size());
        out(r, 1) = static_cast<double>(seqs[i].front());
        out(r, 2) = static_cast<double>(seqs[i].back());
      }
      return out;
    };
  }
};

/// Exact tr((A B)^1/2) from the eigenvalues of the raw product.
double trace_sqrt_raw(const Matrix& a, const Matrix& b) {
  const Eigen::MatrixXd p = a * b;
  Eigen::EigenSolver<Eigen::MatrixXd> es(p, false);
  double t = 0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) t += std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  return t;
}

Matrix random_spd(Eigen::Index d, std::uint64_t seed) {
  const Matrix m = testing::random_normal(d, d, seed);
  return m * m.transpose() + 0.1 * Matrix::Identity(d, d);
}

bool dominated_by_any(const Matrix& pts, const Vector& x) {
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    if ((x.transpose().array() <= pts.row(i).array()).all()) return true;
  }
  return false;
}

/// Hull vertices in counter-clockwise order (monotone chain).
std::vector<std::array<double, 2>> hull_2d(const Matrix& pts) {
  std::vector<std::array<double, 2>> p;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) p.push_back({pts(i, 0), pts(i, 1)});
  std::sort(p.begin(), p.end());
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

bool inside_polygon(const std::vector<std::array<double, 2>>& h, const Vector& x) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    if ((b[0] - a[0]) * (x(1) - a[1]) - (b[1] - a[1]) * (x(0) - a[0]) < 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Golden examples, grouped per module

void golden_core(Checks& c) {
  RepresentationRegistry reg;
  auto t = evaluate({set_of({"A", "A"})}, {uniqueness_metric()}, reg);
  c.that(t.at(0, 0).ok() && t.at(0, 0).value == 0.5, "evaluate: uniqueness [A,A] = 0.5");

  MetricSpec flaky = constant_metric("flaky", 1.0);
  flaky.compute = [](const MetricContext& ctx) -> MetricValue {
    if (ctx.sequences().name() == "g2") throw InvalidInput("boom");
    return MetricValue{1.0};
  };
  t = evaluate({set_of({"A"}, "g1"), set_of({"B"}, "g2")}, {flaky}, reg);
  c.that(t.at(0, 0).ok() && !t.at(1, 0).ok(), "evaluate: failing group isolated");

  {
    auto config = load_config(usage_box / "config.json");
    RepresentationRegistry r;
    register_representations(r, config);
    const auto run = prepare_run(config);
    t = evaluate(run.groups, run.metrics, r);
    c.that(t.groups.size() == 2 && t.metrics.size() == 2, "usage box: 2 x 2 table");
    c.near(t.at("UniProt", "FBD").value, 0.0, 1e-8, "usage box: FBD of the reference against itself");
  }

  const auto parts = fold_partition(10, 3, 7);
  c.that(parts.size() == 3 && parts[0].size() == 3 && parts[1].size() == 3 && parts[2].size() == 3,
         "fold_partition(10, 3): three folds of 3");

  t = evaluate({set_of(testing::random_strings(10, 2, 4, "AC", 1))}, {fold_wrap(constant_metric("c", 0.7), 4, 1)}, reg);
  c.that(t.at(0, 0).ok() && t.at(0, 0).value == 0.7 && *t.at(0, 0).deviation == 0.0, "fold: constant metric");

  const std::vector<std::string> aabb{"A", "A", "B", "B"};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto p = fold_partition(4, 2, seed);
    double mean = 0;
    for (const auto& f : p) mean += (aabb[f[0]] == aabb[f[1]] ? 0.5 : 1.0) / 2.0;
    t = evaluate({set_of(aabb)}, {fold_wrap(uniqueness_metric(), 2, seed)}, reg);
    bool in_set = true;
    for (double v : *t.at(0, 0).per_fold) in_set = in_set && (v == 0.5 || v == 1.0);
    c.that(in_set && t.at(0, 0).value == mean, "fold: uniqueness [A,A,B,B] K=2 seed " + std::to_string(seed));
  }

  {
    Cache cache;
    CountingEmbedder e;
    const std::vector<std::string> five{"s1", "s2", "s3", "s4", "s5"};
    cache.get_or_compute("m", e.model(), five);
    cache.get_or_compute("m", e.model(), five);
    c.that(cache.misses() == 5 && cache.hits() == 5 && *e.calls == 5, "cache: same 5 sequences twice");
  }
  {
    Cache cache;
    CountingEmbedder e;
    const std::vector<std::string> a{"s1", "s2"}, b{"s2", "s3"};
    cache.get_or_compute("m", e.model(), a);
    cache.get_or_compute("m", e.model(), b);
    c.that(*e.seen == std::vector<std::string>{"s1", "s2", "s3"}, "cache: overlapping batches");
  }
  {
    CountingEmbedder e;
    RepresentationRegistry r;
    r.add_embedder("e", e.model());
    const auto g = set_of(testing::random_strings(20, 3, 6, kAminoAcids, 5));
    const std::vector<MetricSpec> metrics{vendi_metric("e"), diversity_metric()};
    IterationSeries one;
    one.add(0, {g});
    const auto traj = evaluate_iterations(one, metrics, r);
    const auto direct = evaluate({g}, metrics, r);
    c.that(traj.reports.size() == 1 && traj.reports[0].cells[0][0].value == direct.cells[0][0].value &&
               traj.reports[0].cells[0][1].value == direct.cells[0][1].value,
           "iterations: one iteration equals evaluate");

    CountingEmbedder e3;
    RepresentationRegistry r3;
    r3.add_embedder("e", e3.model());
    IterationSeries three;
    for (int i = 0; i < 3; ++i) three.add(i, {g});
    std::vector<std::size_t> after;
    evaluate_iterations(three, {vendi_metric("e")},
                        [&](const Iteration&) -> const RepresentationResolver& {
                          after.push_back(*e3.calls);
                          return r3;
                        });
    c.that(*e3.calls == g.size() && after == std::vector<std::size_t>{0, g.size(), g.size()},
           "iterations: fixed group embedded only in the first round");
  }
  {
    const auto dir = testing::temp_dir("accept_hill");
    const auto campaign = testing::write_hill_climb(dir, 40, 6, 21);
    const auto r = cli("iterate --config " + quote(campaign.config) + " --out " + quote(dir / "out"));
    bool monotone = r.code == 0;
    if (monotone) {
      const auto doc = nlohmann::ordered_json::parse(testing::slurp(dir / "out" / "trajectory.json"));
      for (std::size_t i = 1; i < doc.size(); ++i) {
        monotone = monotone && doc[i]["report"]["cells"][0][0]["value"].get<double>() >=
                                   doc[i - 1]["report"]["cells"][0][0]["value"].get<double>();
      }
    }
    c.that(monotone, "hill climber: nondecreasing Hit-rate");
  }
}

void golden_seq(Checks& c) {
  c.that(levenshtein("kitten", "sitting") == 3, "levenshtein(kitten, sitting) = 3");
  c.that(levenshtein("GFGD", "GFGD") == 0, "levenshtein(s, s) = 0");
  c.that(levenshtein("", "abc") == 3, "levenshtein('', abc) = 3");
  c.exact(novelty(set_of({"A", "B"}), set_of({"B"})), 0.5, "novelty [A,B] vs [B]");
  c.exact(novelty(set_of({"A", "B"}), set_of({"B", "A", "C"})), 0.0, "novelty G in R");
  c.exact(novelty(set_of({"A", "A"}), set_of({"A"})), 0.0, "novelty duplicates");
  c.near(uniqueness(set_of({"A", "A", "B"})), 2.0 / 3.0, 1e-15, "uniqueness [A,A,B]");
  c.exact(uniqueness(set_of({"A", "B", "C"})), 1.0, "uniqueness all distinct");
  c.near(uniqueness(set_of({"A", "A", "A", "A"})), 0.25, 1e-15, "uniqueness n copies");
  c.exact(diversity(set_of({"GFGD", "GFGD", "GFGD"})), 0.0, "diversity all identical");
  c.exact(diversity(set_of({"AB", "CD"})), 1.0, "diversity [AB, CD]");
  c.near(ngram_jaccard(set_of({"ABCD"}), set_of({"ABX"}), {2}), 0.25, 1e-15, "ngram jaccard N=2");
  c.exact(ngram_jaccard(set_of({"ABCD"}), set_of({"ABCD"}), {2}), 1.0, "ngram jaccard identical");
  c.exact(ngram_jaccard(set_of({"AA"}), set_of({"A"}), {1}), 1.0, "ngram jaccard unigrams");
}

void golden_embed(Checks& c) {
  const Matrix eye = Matrix::Identity(3, 3);
  c.near((matrix_sqrt_psd(eye) - eye).norm(), 0.0, 1e-12, "sqrt(I) = I");
  Matrix d49 = Matrix::Zero(2, 2);
  d49(0, 0) = 4;
  d49(1, 1) = 9;
  Matrix d23 = Matrix::Zero(2, 2);
  d23(0, 0) = 2;
  d23(1, 1) = 3;
  c.near((matrix_sqrt_psd(d49) - d23).norm(), 0.0, 1e-12, "sqrt(diag(4,9)) = diag(2,3)");

  const Matrix x = testing::random_normal(30, 4, 1);
  c.near(fbd(x, x), 0.0, 1e-8, "fbd(X, X)");
  c.near(fbd(col({-1, 1}), col({0, 2})), 1.0, 1e-8, "fbd 1-D {-1,1} vs {0,2}");
  Vector delta(4);
  delta << 0.5, -1, 2, 0.25;
  const Matrix shifted = x.rowwise() + delta.transpose();
  c.near(fbd(x, shifted), delta.squaredNorm(), 1e-6, "fbd mean shift");

  c.exact(mmd(col({0, 0}), col({0, 0}), KernelSpec::rbf(1.0)), 0.0, "mmd {0,0} vs {0,0}");
  for (double s : {0.5, 1.0, 2.0}) {
    c.near(mmd(col({0, 0}), col({1, 1}), KernelSpec::rbf(s)), 2 - 2 * std::exp(-1 / (2 * s * s)), 1e-8,
           "mmd {0,0} vs {1,1}, sigma " + std::to_string(s));
  }

  c.exact(improved_precision(x, x, {3}), 1.0, "precision Xg = Xr");
  c.exact(improved_precision(col({20}), col({0, 1, 10}), {1}), 0.0, "precision G={20}");
  c.exact(improved_precision(col({0.5}), col({0, 1, 10}), {1}), 1.0, "precision G={0.5}");
  c.exact(improved_recall(x, x, {3}), 1.0, "recall Xg = Xr");
  const Matrix tight = testing::random_normal(10, 2, 3, 100.0, 0.01);
  const Matrix spread = testing::random_normal(40, 2, 4, 0.0, 5.0);
  c.exact(improved_recall(tight, spread, {3}), 0.0, "recall tight far cluster");

  c.exact(authenticity(col({0.5}), col({0, 0.1, 1})), 1.0, "authenticity G={0.5}");
  const Matrix generic = testing::random_normal(10, 2, 8);
  Matrix with_copy(3, 2);
  with_copy << generic.row(4), 50.0, 50.0, -50.0, 50.0;
  c.near(authenticity(with_copy, generic), 2.0 / 3.0, 1e-15, "authenticity exact copy is non-authentic");
  c.exact(authenticity(col({0.4}), col({0, 1})), 0.0, "authenticity G={0.4}, R={0,1}");

  const Matrix same = Matrix::Constant(7, 3, 1.5);
  c.near(vendi_exact(same, KernelSpec::rbf(1.0)), 1.0, 1e-12, "vendi identical points");
  const Matrix far = 100.0 * Matrix::Identity(6, 6);
  c.near(vendi_exact(far, KernelSpec::rbf(1.0)), 6.0, 1e-6, "vendi distant points");
  Matrix clusters(20, 2);
  clusters.topRows(10) = testing::random_normal(10, 2, 2, 0.0, 0.001);
  clusters.bottomRows(10) = testing::random_normal(10, 2, 3, 50.0, 0.001);
  c.near(vendi_exact(clusters, KernelSpec::rbf(1.0)), 2.0, 1e-3, "vendi two clusters");

  FkeaParams fp;
  fp.num_features = 16;
  fp.sigma = 1.0;
  c.near(vendi_fkea(same, fp), 1.0, 1e-9, "fkea identical points");
  const Matrix pts = testing::random_normal(100, 5, 11);
  const double sigma = median_pairwise_distance(pts);
  const double exact = vendi_exact(pts, KernelSpec::rbf(sigma));
  FkeaParams big;
  big.num_features = 200;
  big.sigma = sigma;
  double avg = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    big.seed = seed;
    avg += vendi_fkea(pts, big) / 5.0;
  }
  c.near(avg / exact, 1.0, 0.05, "fkea 2m = 4n within 5% (mean of 5 seeds)");
  FkeaParams lo = big, mid = big, hi = big;
  lo.renyi_alpha = 1 - 1e-3;
  hi.renyi_alpha = 1 + 1e-3;
  const double vl = vendi_fkea(pts, lo), vm = vendi_fkea(pts, mid), vh = vendi_fkea(pts, hi);
  c.that(vl >= vm && vm >= vh && vl - vh < 1e-2 * vm, "fkea alpha = 1 +- 1e-3 brackets alpha = 1");
}

void golden_prop(Checks& c) {
  auto is = identity_stat(vec({1, 2, 3}));
  c.near(is.mean, 2.0, 1e-15, "identity {1,2,3} mean");
  c.near(is.variance, 2.0 / 3.0, 1e-15, "identity {1,2,3} variance");
  is = identity_stat(vec({4, 4, 4}));
  c.that(is.mean == 4 && is.variance == 0, "identity constant");
  is = identity_stat(vec({7}));
  c.that(is.mean == 7 && is.variance == 0, "identity single value");

  c.exact(threshold_fraction(vec({0.2, 0.8}), 0.5, ThresholdSide::above), 0.5, "threshold {0.2,0.8}");
  c.exact(threshold_fraction(vec({2, 2, 2}), 2, ThresholdSide::above), 0.0, "threshold strict");
  c.exact(threshold_fraction(vec({1, 2, 3, 4}), 2, ThresholdSide::below), 0.25, "threshold below");
  c.exact(hit_rate(vec({1, 0, 1, 1})), 0.75, "hit rate {1,0,1,1}");
  c.exact(hit_rate(vec({0, 0})), 0.0, "hit rate zeros");
  c.exact(hit_rate(vec({1, 1, 1})), 1.0, "hit rate ones");

  Matrix p(1, 2);
  p << 1, 1;
  c.exact(hypervolume_indicator(p), 1.0, "hypervolume {(1,1)}");
  Matrix two(2, 2);
  two << 2, 1, 1, 2;
  c.exact(hypervolume_indicator(two), 3.0, "hypervolume {(2,1),(1,2)}");
  Matrix three(3, 2);
  three << 2, 1, 1, 2, 0.5, 0.5;
  c.exact(hypervolume_indicator(three), 3.0, "hypervolume with dominated point");

  Matrix tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  c.near(convex_hull_volume(tri).volume, 0.5, 1e-12, "hull triangle");
  Matrix sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  c.near(convex_hull_volume(sq).volume, 1.0, 1e-12, "hull unit square");
  Matrix disc(100, 2);
  {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (Eigen::Index i = 0; i < 100;) {
      const double a = u(rng), b = u(rng);
      if (a * a + b * b <= 1) {
        disc(i, 0) = a;
        disc(i, 1) = b;
        ++i;
      }
    }
  }
  const auto [est, se] = testing::monte_carlo_volume(Vector::Constant(2, -1), Vector::Constant(2, 1), 400000, 3,
                                                     [hull = hull_2d(disc)](const Vector& v) { return inside_polygon(hull, v); });
  (void)se;
  c.near(convex_hull_volume(disc).volume / est, 1.0, 0.02, "hull of 100 disc points vs Monte-Carlo");

  c.exact(pairwise_conformity(vec({5, 6, 7}), vec({1, 2, 3})), 1.0, "conformity a > max b");
  for (Eigen::Index n : {3, 10, 25}) {
    const Matrix v = testing::random_normal(n, 1, static_cast<std::uint64_t>(n));
    c.exact(conformity_score(v, v), double(n + 1) / double(2 * n), "conformity G = R, n = " + std::to_string(n));
  }

  const Matrix s = testing::random_normal(400, 1, 2);
  KdeParams kp;
  kp.mc_samples = 10000;
  kp.seed = 3;
  c.near(kl_divergence(s, s, kp), 0.0, 0.01, "KL identical samples");
  c.exact(kl_divergence_categorical({"A", "B"}, {"B", "A"}), 0.0, "KL categorical equal frequencies");
  const Matrix g = testing::random_normal(5000, 1, 10, 0.0, 1.0);
  const Matrix r = testing::random_normal(5000, 1, 11, 1.0, 1.0);
  c.near(kl_divergence(g, r, kp), 0.5, 0.1, "KL N(0,1) || N(1,1)");
}

void golden_diag(Checks& c) {
  const Matrix x = testing::random_normal(30, 3, 1);
  c.exact(knn_feature_alignment(x, std::vector<std::string>(30, "a"), 5), 1.0, "FAS single label");
  Matrix two(40, 2);
  two.topRows(20) = testing::random_normal(20, 2, 2, 0.0, 0.1);
  two.bottomRows(20) = testing::random_normal(20, 2, 3, 100.0, 0.1);
  std::vector<std::string> lab(40, "a");
  std::fill(lab.begin() + 20, lab.end(), "b");
  c.exact(knn_feature_alignment(two, lab, 5), 1.0, "FAS separated clusters");

  const Matrix p = testing::random_normal(50, 1, 4);
  c.near(spearman_alignment(p, p), 1.0, 1e-12, "spearman alignment embeddings = property");
  c.near(spearman_alignment(-p, p), 1.0, 1e-12, "spearman alignment negated");
  double mean_abs = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    mean_abs += std::abs(spearman_alignment(testing::random_normal(200, 4, 100 + seed),
                                            testing::random_normal(200, 1, 200 + seed))) / 20.0;
  }
  c.that(mean_abs < 0.1, "spearman alignment independent data: mean |rho| = " + std::to_string(mean_abs));

  const std::vector<double> u{1, 2, 3, 4}, rev{4, 3, 2, 1}, w{1, 3, 2, 4};
  c.near(spearman_rho(u, u), 1.0, 1e-15, "rho(u, u)");
  c.near(spearman_rho(u, rev), -1.0, 1e-15, "rho reversed");
  c.near(spearman_rho(u, w), 0.8, 1e-12, "rho {1,2,3,4} vs {1,3,2,4}");

  const Matrix basis = testing::random_normal(2, 10, 5);
  const Matrix plane = (testing::random_normal(60, 2, 6) * basis).rowwise() + testing::random_normal(1, 10, 7).row(0);
  c.near(pca_project(plane, 2).explained_variance.sum(), 1.0, 1e-8, "PCA 2-D subspace");
  const Eigen::Index d = 6;
  const auto iso = pca_project(testing::random_normal(20000, d, 8), 2).explained_variance;
  c.that(std::abs(iso(0) - 1.0 / d) < 0.02 && std::abs(iso(1) - 1.0 / d) < 0.02,
         "PCA isotropic: fractions near 1/d each");
}

void golden_repr(Checks& c) {
  KmerSpec ac{1, {"A", "C"}, KmerMode::frequency};
  const auto e = kmer_embed(set_of({"AAC"}), ac).data;
  c.near(e(0, 0), 2.0 / 3.0, 1e-15, "kmer AAC: A");
  c.near(e(0, 1), 1.0 / 3.0, 1e-15, "kmer AAC: C");
  KmerSpec aa{2, {"AA"}, KmerMode::frequency};
  c.exact(kmer_embed(set_of({"AAAA"}), aa).data(0, 0), 1.0, "kmer AAAA, vocab AA");
  KmerSpec gg{2, {"GG", "TT"}, KmerMode::frequency};
  c.exact(kmer_embed(set_of({"ACAC"}), gg).data.norm(), 0.0, "kmer vocab excluding every k-mer");
  c.exact(length_property(set_of({"GFGD"})).scalar("length")(0), 4, "length GFGD");
  c.exact(length_property(SequenceSet("g", {""}, Alphabet::free, true)).scalar("length")(0), 0, "length empty");
  const auto len = length_property(set_of({"AB", "ABC"})).scalar("length");
  c.that(len(0) == 2 && len(1) == 3, "length [AB, ABC]");
}

void golden_io(Checks& c) {
  using namespace io;
  c.that(parse_sequences(">s1\nGFGD\n>s2\nDPWDWV\n", "g").sequences() == std::vector<std::string>{"GFGD", "DPWDWV"},
         "FASTA usage-box sequences");
  c.that(parse_sequences("AB\nAB\n", "g").sequences() == std::vector<std::string>{"AB", "AB"}, "plain duplicates kept");
  c.that(parse_sequences(">x\nAB\nCD\n", "g").sequences() == std::vector<std::string>{"ABCD"}, "wrapped FASTA body");

  const auto dir = testing::temp_dir("accept_io");
  const Matrix m32 = testing::random_normal(3, 2, 1);
  save_embeddings(dir / "m.csv", m32, EmbeddingFormat::csv);
  c.that(load_embeddings(dir / "m.csv").data == m32, "3x2 CSV round trip");
  std::string bytes = encode_embeddings_binary(m32);
  bytes[1] = 'X';
  std::string msg;
  try {
    decode_embeddings_binary(bytes);
  } catch (const FormatError& e) {
    msg = e.what();
  }
  c.that(msg.find("bad magic") != std::string::npos, "binary wrong magic");
  msg.clear();
  try {
    decode_embeddings_csv("dim=2\n1,2\n3,nan\n");
  } catch (const FormatError& e) {
    msg = e.what();
  }
  c.that(msg.find("row 1") != std::string::npos && msg.find("column 1") != std::string::npos, "CSV NaN names row and column");

  c.that(encode_embeddings_binary(Matrix::Zero(1, 1)).size() == 26, "1x1 binary is 26 bytes");
  const Matrix big = testing::random_normal(9, 4, 2).cast<float>().cast<double>();
  c.that(decode_embeddings_binary(encode_embeddings_binary(big)) == big, "binary round trip");
  bytes = encode_embeddings_binary(big);
  bytes[4] = 2;
  msg.clear();
  try {
    decode_embeddings_binary(bytes);
  } catch (const FormatError& e) {
    msg = e.what();
  }
  c.that(msg.find("unsupported version") != std::string::npos, "binary version 2");

  c.throws([] { decode_properties_csv("b:binary\n2\n"); }, "property binary value 2");
  c.throws([] { decode_properties_csv("v[0]:vec<3>,v[1]:vec<3>,v[2]:vec<3>\n1,2\n"); }, "property vector width");
  const Matrix vals = testing::random_normal(15, 1, 3);
  PropertyTable tbl(15, {PropertyColumn{"x", ColumnType::real, vals, {}}}, "t");
  c.that((decode_properties_csv(encode_properties_csv(tbl)).scalar("x") - vals.col(0)).cwiseAbs().maxCoeff() <= 1e-15,
         "property scalar round trip");
}

void golden_report(Checks& c) {
  ReportTable one;
  one.groups = {"g"};
  one.metrics = {{"m", Direction::maximize, Arity::scalar, {}}};
  one.cells = {{MetricResult::from({0.5})}};
  c.that(render_table(one, TableFormat::markdown).find("| 0.5000 |") != std::string::npos, "markdown 0.5000");
  ReportTable folded = one;
  folded.metrics[0].arity = Arity::mean_and_deviation;
  folded.cells = {{MetricResult::from({1.0, 0.0, std::vector<double>{1.0, 1.0}})}};
  c.that(render_table(folded, TableFormat::markdown).find("1.0000 ± 0.0000") != std::string::npos, "fold cell m ± s");
  const std::string json = render_table(folded, TableFormat::json);
  c.that(report_to_json(report_from_json(nlohmann::ordered_json::parse(json))) == nlohmann::ordered_json::parse(json),
         "JSON value graph round trip");

  one.cells = {{MetricResult::from({1.0})}};
  const std::string bar = render_chart(one, ChartSpec{});
  c.that(testing::count_occurrences(bar, "<rect") == 1, "single bar: one rect");

  ReportTable par;
  par.groups = {"a", "b"};
  for (const char* n : {"m1", "m2", "m3"}) par.metrics.push_back({n, Direction::maximize, Arity::scalar, {}});
  par.cells = {{MetricResult::from({1}), MetricResult::from({2}), MetricResult::from({3})},
               {MetricResult::from({3}), MetricResult::from({1}), MetricResult::from({2})}};
  ChartSpec ps;
  ps.kind = ChartKind::parallel;
  const std::string psvg = render_chart(par, ps);
  c.that(testing::count_occurrences(psvg, "<polyline") == 2 && testing::count_occurrences(psvg, "class=\"axis\"") == 3,
         "parallel: 2 polylines, 3 axes");

  TrajectoryTable traj;
  for (int i = 0; i < 3; ++i) {
    traj.iterations.push_back(i);
    traj.reports.push_back(par);
  }
  ChartSpec ts;
  ts.kind = ChartKind::trajectory;
  const std::string tsvg = render_chart(traj, ts);
  bool three = testing::count_occurrences(tsvg, "<polyline") == 6;
  for (auto pos = tsvg.find("points=\""); pos != std::string::npos; pos = tsvg.find("points=\"", pos + 1)) {
    const auto end = tsvg.find('"', pos + 8);
    const std::string pts = tsvg.substr(pos + 8, end - pos - 8);
    three = three && std::count(pts.begin(), pts.end(), ',') == 3;
  }
  c.that(three, "trajectory: 3 vertices per (group, metric)");
}

void golden_cli(Checks& c) {
  const auto dir = testing::temp_dir("accept_cli");
  for (const char* f : {"uniprot.fasta", "dbaasp.fasta", "config.json"}) fs::copy_file(usage_box / f, dir / f);

  auto r = cli("evaluate --config " + quote(dir / "config.json") + " --out-dir " + quote(dir / "a"));
  c.that(r.code == 0 && r.out == golden_table, "evaluate: usage box table");
  const auto r2 = cli("evaluate --config " + quote(dir / "config.json") + " --out-dir " + quote(dir / "b"));
  bool same = r2.code == 0;
  for (const char* f : {"report.md", "report.json", "report.svg"}) {
    same = same && testing::slurp(dir / "a" / f) == testing::slurp(dir / "b" / f);
  }
  c.that(same, "evaluate: identical outputs across runs");

  fs::copy_file(dir / "config.json", dir / "missing.json");
  auto cfg = nlohmann::ordered_json::parse(testing::slurp(dir / "config.json"));
  cfg["groups"]["DBAASP"] = "nowhere.fasta";
  testing::spit(dir / "missing.json", cfg.dump());
  r = cli("evaluate --config " + quote(dir / "missing.json"));
  c.that(r.code == 2 && r.err.find((dir / "nowhere.fasta").string()) != std::string::npos,
         "evaluate: missing sequence file");

  const Matrix x = testing::random_normal(10, 2, 3);
  io::save_embeddings(dir / "e.csv", x, io::EmbeddingFormat::csv);
  std::string props = "family:categorical,score:real\n";
  for (Eigen::Index i = 0; i < 10; ++i) props += "f," + io::format_double(x(i, 0)) + "\n";
  testing::spit(dir / "p.csv", props);
  r = cli("diagnose --embeddings " + quote(dir / "e.csv") + " --properties " + quote(dir / "p.csv") +
          " --labels family --k 3");
  c.that(r.code == 0 && r.out.find(": 1.0000") != std::string::npos, "diagnose: single label prints 1.0");
  io::save_embeddings(dir / "e1.csv", x.col(0), io::EmbeddingFormat::csv);
  r = cli("diagnose --embeddings " + quote(dir / "e1.csv") + " --properties " + quote(dir / "p.csv") +
          " --property score --spearman");
  c.that(r.code == 0 && r.out.find("spearman_alignment: 1.0000") != std::string::npos, "diagnose: spearman 1.0");
  r = cli("diagnose --embeddings " + quote(dir / "e.csv") + " --pca " + quote(dir / "pca.svg"));
  c.that(r.code == 0 && testing::count_occurrences(testing::slurp(dir / "pca.svg"), "<circle") == 10,
         "diagnose: PCA SVG with n circles");

  testing::spit(dir / "aac.txt", "AAC\n");
  r = cli("embed --sequences " + quote(dir / "aac.txt") + " --kmer 1 --alphabet AC --out " + quote(dir / "aac.sqme"));
  bool decoded = r.code == 0;
  if (decoded) {
    const auto m = io::load_embeddings(dir / "aac.sqme").data;
    decoded = std::abs(m(0, 0) - 2.0 / 3.0) < 1e-7 && std::abs(m(0, 1) - 1.0 / 3.0) < 1e-7;
  }
  c.that(decoded, "embed: AAC decodes to (2/3, 1/3)");
  testing::spit(dir / "short.txt", "ACGT\nAC\n");
  r = cli("embed --sequences " + quote(dir / "short.txt") + " --kmer 3 --alphabet ACGT --out " + quote(dir / "s.sqme"));
  c.that(r.code == 2 && r.err.find("short.txt:2") != std::string::npos, "embed: short sequence names the line");
  for (const char* s : {"uniprot", "dbaasp"}) {
    cli("embed --sequences " + quote(dir / (std::string(s) + ".fasta")) + " --kmer 1 --alphabet amino_acid --out " +
        quote(dir / (std::string(s) + ".sqme")));
  }
  cfg = nlohmann::ordered_json::parse(testing::slurp(dir / "config.json"));
  cfg["representations"] = {{"kmer1", {{"kind", "file"}, {"files", {{"UniProt", "uniprot.sqme"}, {"DBAASP", "dbaasp.sqme"}}}}}};
  cfg["outputs"] = nlohmann::ordered_json::array();
  testing::spit(dir / "files.json", cfg.dump());
  r = cli("evaluate --config " + quote(dir / "files.json"));
  c.that(r.code == 0 && r.out == golden_table, "embed output round-trips through evaluate");

  cfg = nlohmann::ordered_json::parse(testing::slurp(dir / "config.json"));
  const auto groups = cfg["groups"];
  cfg.erase("groups");
  cfg["outputs"] = nlohmann::ordered_json::array();
  cfg["iterations"] = {{{"index", 0}, {"groups", groups}}};
  testing::spit(dir / "iter.json", cfg.dump());
  r = cli("iterate --config " + quote(dir / "iter.json"));
  c.that(r.code == 0 && r.out.find("| 0 | UniProt | 0.8778 | 0.0000 |") != std::string::npos &&
             r.out.find("| 0 | DBAASP | 0.9444 | 0.5169 |") != std::string::npos,
         "iterate: one iteration equals evaluate");
  cfg["iterations"] = {{{"index", 2}, {"groups", groups}}, {{"index", 1}, {"groups", groups}}};
  testing::spit(dir / "shuffled.json", cfg.dump());
  c.that(cli("iterate --config " + quote(dir / "shuffled.json")).code == 2, "iterate: shuffled indices exit 2");
}

}  // namespace

int main() {
  criterion("Metric golden suite", 10.0, [](Checks& c) {
    golden_core(c);
    golden_seq(c);
    golden_embed(c);
    golden_prop(c);
    golden_diag(c);
    golden_repr(c);
    golden_io(c);
    golden_report(c);
    golden_cli(c);
  });

  criterion("Diversity identity: k = n-1 equals all-pairs self-exclusive average", 0, [](Checks& c) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto g = testing::random_strings(8, 0, 12, "ACGT", 1000 + s);
      const SequenceSet set("g", g, Alphabet::free, true);
      DiversityParams p;
      p.k = 7;
      p.seed = s;
      c.near(diversity(set, p), testing::diversity_all_pairs(g), 1e-12, "set " + std::to_string(s));
    }
  });

  criterion("FBD properties", 0, [](Checks& c) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Matrix x = testing::random_normal(25, 4, s);
      c.near(fbd(x, x), 0.0, 1e-8, "fbd(X, X)");
      Vector delta = testing::random_normal(4, 1, 50 + s).col(0);
      c.near(fbd(x, x.rowwise() + delta.transpose()), delta.squaredNorm(), 1e-6, "mean shift");
    }
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Eigen::Index d = 1 + static_cast<Eigen::Index>(s % 8);
      const Matrix a = random_spd(d, 2 * s), b = random_spd(d, 2 * s + 1);
      c.near(trace_sqrt_product(a, b), trace_sqrt_raw(a, b), 1e-8, "trace, pair " + std::to_string(s));
    }
  });

  criterion("MMD unbiased estimator", 0, [](Checks& c) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto n = static_cast<Eigen::Index>(2 + (s * 7) % 29), m = static_cast<Eigen::Index>(2 + (s * 11) % 29);
      const Matrix x = testing::random_normal(n, 3, s), y = testing::random_normal(m, 3, 100 + s, 0.3);
      const double sigma = testing::pooled_median(x, y);
      c.near(mmd(x, y, KernelSpec::rbf()), testing::mmd_four_loops(x, y, sigma), 1e-10, "median heuristic " + std::to_string(s));
      c.near(mmd(x, y, KernelSpec::rbf(0.7)), testing::mmd_four_loops(x, y, 0.7), 1e-10, "sigma 0.7 " + std::to_string(s));
    }
    std::vector<double> est;
    for (std::uint64_t s = 0; s < 50; ++s) {
      est.push_back(mmd(testing::random_normal(150, 3, 500 + s), testing::random_normal(150, 3, 900 + s),
                        KernelSpec::rbf(1.5)));
    }
    const auto [mean, sd] = mean_and_sample_std(est);
    const double se = sd / std::sqrt(50.0);
    char buf[80];
    std::snprintf(buf, sizeof buf, "resampling mean %.2e, SE %.2e", mean, se);
    c.note(buf);
    c.that(std::abs(mean) <= 3 * se, std::string(buf) + ": not within 3 SE of 0");
  });

  criterion("Precision/recall duality", 0, [](Checks& c) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      std::mt19937_64 rng(s);
      const auto n = static_cast<Eigen::Index>(5 + rng() % 40), m = static_cast<Eigen::Index>(5 + rng() % 40);
      const auto d = static_cast<Eigen::Index>(1 + rng() % 5);
      const std::size_t k = 1 + rng() % 4;
      const Matrix g = testing::random_normal(n, d, 3 * s), r = testing::random_normal(m, d, 3 * s + 1, 0.5);
      const std::string id = "instance " + std::to_string(s);
      c.that(improved_recall(g, r, {k}) == improved_precision(r, g, {k}), id + ": recall(G,R) != precision(R,G)");
      c.that(improved_precision(g, r, {k}) == testing::coverage_brute(g, r, k), id + ": precision vs brute force");
      c.exact(improved_precision(g, g, {k}), 1.0, id + ": identical sets");
    }
  });

  criterion("Vendi / FKEA", 0, [](Checks& c) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Matrix x = testing::random_normal(30, 3, s);
      const double v = vendi_exact(x);
      c.that(v >= 1.0 - 1e-12 && v <= 30.0 + 1e-12, "vendi in [1, n]");
    }
    c.near(vendi_exact(Matrix::Constant(12, 4, -2.0), KernelSpec::rbf(1.0)), 1.0, 1e-12, "identical points");
    const Matrix far = testing::random_uniform(15, 3, 7, 0.0, 1e4);
    c.near(vendi_exact(far, KernelSpec::rbf(1.0)), 15.0, 1e-6, "near-orthogonal Gram");
    const Matrix pts = testing::random_normal(100, 5, 21);
    const double sigma = median_pairwise_distance(pts);
    const double exact = vendi_exact(pts, KernelSpec::rbf(sigma));
    double avg = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      FkeaParams p;
      p.num_features = 200;
      p.sigma = sigma;
      p.seed = seed;
      avg += vendi_fkea(pts, p) / 5.0;
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "FKEA/exact = %.4f", avg / exact);
    c.note(buf);
    c.near(avg / exact, 1.0, 0.05, "FKEA 2m = 4n relative to exact");
    FkeaParams lo, mid, hi;
    for (auto* p : {&lo, &mid, &hi}) {
      p->num_features = 64;
      p->sigma = sigma;
      p->seed = 4;
    }
    lo.renyi_alpha = 1 - 1e-3;
    hi.renyi_alpha = 1 + 1e-3;
    const double vl = vendi_fkea(pts, lo), vm = vendi_fkea(pts, mid), vh = vendi_fkea(pts, hi);
    c.that(vl >= vm && vm >= vh && (vl - vh) < 1e-2 * vm, "alpha continuity bracket");
  });

  criterion("Hypervolume vs Monte-Carlo", 0, [](Checks& c) {
    double worst = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Eigen::Index k = s % 2 ? 3 : 2;
      const Matrix pts = testing::random_uniform(6 + static_cast<Eigen::Index>(s % 5), k, 40 + s, 0.05, 1.0);
      const double exact = hypervolume_indicator(pts);
      const Vector hi = pts.colwise().maxCoeff().transpose();
      const auto [est, se] = testing::monte_carlo_volume(Vector::Zero(k), hi, 1000000, 70 + s,
                                                         [&](const Vector& x) { return dominated_by_any(pts, x); });
      worst = std::max(worst, std::abs(exact - est) / se);
      c.that(std::abs(exact - est) <= 3 * se, "instance " + std::to_string(s) + " (k=" + std::to_string(k) +
                                                  "): exact " + std::to_string(exact) + ", MC " + std::to_string(est));
      Matrix more(pts.rows() * 2, k);
      more.topRows(pts.rows()) = pts;
      more.bottomRows(pts.rows()) = pts.array() * testing::random_uniform(pts.rows(), k, 90 + s, 0.1, 0.99).array();
      c.that(hypervolume_indicator(more) == exact, "instance " + std::to_string(s) + ": dominated points changed the value");
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "max |exact - MC| = %.2f SE", worst);
    c.note(buf);
  });

  criterion("KL oracle: N(0,1) || N(1,1)", 0, [](Checks& c) {
    const Matrix g = testing::random_normal(5000, 1, 10, 0.0, 1.0);
    const Matrix r = testing::random_normal(5000, 1, 11, 1.0, 1.0);
    KdeParams p;
    p.mc_samples = 10000;
    p.seed = 3;
    const double kl = kl_divergence(g, r, p);
    c.note("estimate " + std::to_string(kl));
    c.near(kl, 0.5, 0.1, "KL");
  });

  criterion("Conformity", 0, [](Checks& c) {
    // n >= 3: a two-point KDE scores both points equally, so values would tie.
    for (Eigen::Index n : {3, 5, 17, 40}) {
      const Matrix v = testing::random_normal(n, 1, static_cast<std::uint64_t>(n) + 3);
      c.exact(conformity_score(v, v), double(n + 1) / double(2 * n), "(n+1)/(2n), n = " + std::to_string(n));
    }
    const auto measure = kde_log_likelihood();
    const Matrix fit = testing::random_normal(30, 2, 1), query = testing::random_normal(25, 2, 2);
    std::vector<Eigen::Index> perm(25);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(9));
    Matrix shuffled(25, 2);
    for (Eigen::Index i = 0; i < 25; ++i) shuffled.row(i) = query.row(perm[static_cast<std::size_t>(i)]);
    const Vector a = measure(fit, query), b = measure(fit, shuffled);
    bool equivariant = true;
    for (Eigen::Index i = 0; i < 25; ++i) equivariant = equivariant && b(i) == a(perm[static_cast<std::size_t>(i)]);
    c.that(equivariant, "scores follow the shuffled elements");
    Matrix fit_shuffled = fit.colwise().reverse();
    c.that(measure(fit_shuffled, query) == a, "scores invariant to fit order");
    c.that(conformity_score(shuffled, fit) == conformity_score(query, fit), "conformity invariant to input order");
  });

  criterion("Diagnostics", 0, [](Checks& c) {
    Matrix two(60, 3);
    two.topRows(30) = testing::random_normal(30, 3, 1, 0.0, 0.2);
    two.bottomRows(30) = testing::random_normal(30, 3, 2, 20.0, 0.2);
    std::vector<std::string> lab(60, "a");
    std::fill(lab.begin() + 30, lab.end(), "b");
    c.exact(knn_feature_alignment(two, lab, 10), 1.0, "separated clusters");
    std::string values;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Matrix x = testing::random_normal(2000, 4, 300 + s);
      std::mt19937_64 rng(700 + s);
      std::vector<std::string> labels(2000);
      for (auto& l : labels) l = rng() % 2 ? "a" : "b";
      const double fas = knn_feature_alignment(x, labels, 10);
      c.near(fas, 0.5, 0.05, "random labels, seed " + std::to_string(s));
      values += (s ? " " : "") + std::to_string(fas).substr(0, 6);
    }
    c.note("random-label FAS " + values);
    const Matrix p = testing::random_uniform(80, 1, 5, -3, 3);
    c.near(spearman_alignment((3.0 * p).array() + 5.0, p), 1.0, 1e-12, "monotone 1-D construction");
  });

  criterion("Caching: one embedder behind three metrics", 0, [](Checks& c) {
    const auto seqs = testing::random_strings(50, 5, 9, kAminoAcids, 17);
    const std::set<std::string> distinct(seqs.begin(), seqs.end());
    c.that(distinct.size() == seqs.size(), "sequences distinct");
    auto calls = [&](bool enabled) {
      CountingEmbedder e;
      RepresentationRegistry reg(std::make_shared<Cache>(enabled));
      reg.add_embedder("e", e.model());
      MetricSpec rq = vendi_metric("e", KernelSpec::rational_quadratic());
      rq.name = "Vendi (RQ)";
      const auto t = evaluate({SequenceSet("g", seqs)}, {vendi_metric("e"), rq, fkea_vendi_metric("e")}, reg);
      c.that(!t.has_errors(), "metrics evaluated");
      return e.calls->load();
    };
    const std::size_t on = calls(true), off = calls(false);
    c.note("n = 50: " + std::to_string(on) + " with cache, " + std::to_string(off) + " without");
    c.that(on == seqs.size(), "with caching: invocations == n");
    c.that(off == 3 * seqs.size(), "without caching: invocations == 3n");
  });

  criterion("Fold contract", 0, [](Checks& c) {
    for (std::size_t n : {2, 7, 10, 33, 100}) {
      for (std::size_t k : {2, 3, 5}) {
        if (n < k) continue;
        const auto parts = fold_partition(n, k, n * 31 + k);
        std::set<std::size_t> seen;
        bool sizes = parts.size() == k;
        for (const auto& p : parts) {
          sizes = sizes && p.size() == n / k;
          for (auto i : p) sizes = sizes && i < n && seen.insert(i).second;
        }
        c.that(sizes && seen.size() == k * (n / k), "partition n=" + std::to_string(n) + " K=" + std::to_string(k));
      }
    }
    RepresentationRegistry reg;
    const auto g = testing::random_strings(37, 2, 10, "ACGT", 9);
    auto t = evaluate({SequenceSet("g", g)}, {fold_wrap(constant_metric("c", 3.25), 4, 2)}, reg);
    c.that(t.at(0, 0).value == 3.25 && *t.at(0, 0).deviation == 0.0, "constant metric: deviation 0");
    t = evaluate({SequenceSet("g", g)}, {fold_wrap(diversity_metric(), 5, 3), fold_wrap(uniqueness_metric(), 3, 4)}, reg);
    for (std::size_t m = 0; m < 2; ++m) {
      const auto& cell = t.at(0, m);
      const auto& f = *cell.per_fold;
      const double mean = std::accumulate(f.begin(), f.end(), 0.0) / double(f.size());
      double ss = 0;
      for (double v : f) ss += (v - mean) * (v - mean);
      c.near(cell.value, mean, 1e-12, "mean from per_fold");
      c.near(*cell.deviation, std::sqrt(ss / double(f.size() - 1)), 1e-12, "std from per_fold");
    }
    t = evaluate({SequenceSet("g", {"A", "C"})}, {fold_wrap(uniqueness_metric(), 3, 0)}, reg);
    c.that(!t.at(0, 0).ok(), "n < K gives an error cell");
  });

  criterion("Determinism: byte-identical table, JSON and SVG", 0, [](Checks& c) {
    const auto dir = testing::temp_dir("accept_determinism");
    for (const char* f : {"uniprot.fasta", "dbaasp.fasta", "config.json"}) fs::copy_file(usage_box / f, dir / f);
    auto cfg = nlohmann::ordered_json::parse(testing::slurp(dir / "config.json"));
    cfg["representations"]["kmer2"] = {{"kind", "kmer"}, {"k", 2}, {"alphabet", "amino_acid"}};
    cfg["metrics"].push_back({{"metric", "diversity"}, {"name", "Diversity (k=1)"}, {"k", 1}});
    cfg["metrics"].push_back({{"metric", "mmd"}, {"embedding", "kmer1"}});
    cfg["metrics"].push_back({{"metric", "fkea_vendi"}, {"embedding", "kmer2"}, {"num_features", 32}});
    cfg["metrics"].push_back({{"metric", "uniqueness"}, {"fold", {{"K", 2}}}});
    cfg["outputs"].push_back({{"format", "csv"}, {"path", "report.csv"}});
    testing::spit(dir / "config.json", cfg.dump(2));
    std::vector<std::string> runs;
    for (int i = 0; i < 2; ++i) {
      const auto out = dir / ("run" + std::to_string(i));
      const auto r = cli("evaluate --config " + quote(dir / "config.json") + " --seed 42 --jobs 4 --out-dir " + quote(out));
      c.that(r.code == 0, "run " + std::to_string(i) + " exit " + std::to_string(r.code) + ": " + r.err);
      for (const char* f : {"report.md", "report.json", "report.svg", "report.csv"}) runs.push_back(testing::slurp(out / f));
    }
    for (std::size_t i = 0; i < 4; ++i) c.that(!runs[i].empty() && runs[i] == runs[i + 4], "output " + std::to_string(i));
  });

  criterion("CLI end-to-end: usage box golden table", 5.0, [](Checks& c) {
    const auto dir = testing::temp_dir("accept_e2e");
    const auto r = cli("evaluate --config " + quote(usage_box / "config.json") + " --out-dir " + quote(dir));
    c.that(r.code == 0, "exit code " + std::to_string(r.code));
    c.that(r.out == golden_table, "table:\n" + r.out);
    c.that(r.out.find("| UniProt | 0.8778 | 0.0000 |") != std::string::npos, "self-referenced FBD cell 0.0000");
  });

  std::cout << (all_passed ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
  return all_passed ? 0 : 1;
}
