#include "seqeval/engine.hpp"

#include "seqeval/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <thread>

namespace seqeval {

const MetricResult& ReportTable::at(std::string_view group, std::string_view metric) const {
  const auto g = std::find(groups.begin(), groups.end(), group);
  const auto m = std::find_if(metrics.begin(), metrics.end(),
                              [&](const MetricColumn& c) { return c.name == metric; });
  if (g == groups.end() || m == metrics.end()) {
    throw InvalidInput("no cell (" + std::string(group) + ", " + std::string(metric) + ")");
  }
  return at(static_cast<std::size_t>(g - groups.begin()),
            static_cast<std::size_t>(m - metrics.begin()));
}

bool ReportTable::has_errors() const {
  for (const auto& row : cells) {
    for (const auto& c : row) {
      if (!c.ok()) return true;
    }
  }
  return false;
}

bool TrajectoryTable::has_errors() const {
  return std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.has_errors(); });
}

namespace {

MetricResult run_cell(const SequenceSet& group, const MetricSpec& metric,
                      const RepresentationResolver& representations) {
  MetricContext ctx(group, representations);
  try {
    if (!metric.compute) throw InvalidInput("metric '" + metric.name + "' has no computation");
    auto value = metric.compute(ctx);
    if (!std::isfinite(value.value)) {
      return MetricResult::failure("metric produced a non-finite value", ctx.warnings());
    }
    auto warnings = ctx.warnings();
    std::vector<std::string> unique;
    for (auto& w : warnings) {
      if (std::find(unique.begin(), unique.end(), w) == unique.end()) unique.push_back(std::move(w));
    }
    return MetricResult::from(std::move(value), std::move(unique));
  } catch (const std::exception& e) {
    return MetricResult::failure(e.what(), ctx.warnings());
  }
}

}  // namespace

ReportTable evaluate(const std::vector<SequenceSet>& groups, const std::vector<MetricSpec>& metrics,
                     const RepresentationResolver& representations, EvaluateOptions options) {
  if (groups.empty()) throw ConfigError("evaluate: no sequence groups given");
  std::set<std::string> names;
  for (const auto& m : metrics) {
    if (!names.insert(m.name).second) throw ConfigError("duplicate metric name '" + m.name + "'");
  }
  std::set<std::string> group_names;
  for (const auto& g : groups) {
    if (!group_names.insert(g.name()).second) {
      throw ConfigError("duplicate group name '" + g.name() + "'");
    }
  }

  ReportTable table;
  for (const auto& g : groups) table.groups.push_back(g.name());
  for (const auto& m : metrics) table.metrics.push_back({m.name, m.direction, m.arity, m.parameters});
  table.cells.assign(groups.size(), std::vector<MetricResult>(metrics.size()));

  const std::size_t total = groups.size() * metrics.size();
  unsigned jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(total, 1)));

  auto work = [&](std::size_t cell) {
    const std::size_t g = cell / metrics.size();
    const std::size_t m = cell % metrics.size();
    table.cells[g][m] = run_cell(groups[g], metrics[m], representations);
  };

  if (jobs <= 1) {
    for (std::size_t c = 0; c < total; ++c) work(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back([&]() {
        for (std::size_t c = next++; c < total; c = next++) work(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  return table;
}

std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, std::size_t folds,
                                                     std::uint64_t seed) {
  if (folds < 1) throw InvalidInput("fold count must be >= 1");
  if (n < folds) {
    throw InvalidInput("cannot split " + std::to_string(n) + " sequences into " +
                       std::to_string(folds) + " folds");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t size = n / folds;
  std::vector<std::vector<std::size_t>> out(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(f * size),
                  order.begin() + static_cast<std::ptrdiff_t>((f + 1) * size));
  }
  return out;
}

std::pair<double, double> mean_and_sample_std(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("mean of an empty list");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

MetricSpec fold_wrap(MetricSpec metric, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("fold count for '" + metric.name + "' must be >= 2");
  MetricSpec out = metric;
  out.arity = Arity::mean_and_deviation;
  out.parameters["fold"] = {{"K", folds}, {"seed", seed}};
  out.compute = [inner = std::move(metric.compute), folds, seed](const MetricContext& ctx) {
    const auto parts = fold_partition(ctx.size(), folds, seed);
    std::vector<double> values;
    values.reserve(parts.size());
    for (const auto& part : parts) values.push_back(inner(ctx.subset(part)).value);
    const auto [mean, sd] = mean_and_sample_std(values);
    return MetricValue{mean, sd, std::move(values)};
  };
  return out;
}

void IterationSeries::add(std::int64_t index, std::vector<SequenceSet> groups) {
  if (!iterations_.empty() && index <= iterations_.back().index) {
    throw ConfigError("iteration index " + std::to_string(index) + " does not follow " +
                      std::to_string(iterations_.back().index) + " (indices must be strictly increasing)");
  }
  iterations_.push_back({index, std::move(groups)});
}

TrajectoryTable evaluate_iterations(
    const IterationSeries& series, const std::vector<MetricSpec>& metrics,
    const std::function<const RepresentationResolver&(const Iteration&)>& representations,
    EvaluateOptions options) {
  TrajectoryTable out;
  for (const auto& it : series.iterations()) {
    out.iterations.push_back(it.index);
    out.reports.push_back(evaluate(it.groups, metrics, representations(it), options));
  }
  return out;
}

TrajectoryTable evaluate_iterations(const IterationSeries& series,
                                    const std::vector<MetricSpec>& metrics,
                                    const RepresentationResolver& representations,
                                    EvaluateOptions options) {
  return evaluate_iterations(
      series, metrics,
      [&](const Iteration&) -> const RepresentationResolver& { return representations; }, options);
}

}  // namespace seqeval
