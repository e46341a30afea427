#pragma once

#include "seqeval/engine.hpp"

#include <string>
#include <vector>

namespace seqeval {

enum class ChartKind { bar, parallel, trajectory };
enum class ErrorBars { deviation, none };

ChartKind parse_chart_kind(std::string_view s);

struct ChartSpec {
  ChartKind kind = ChartKind::bar;
  /// Metric names to draw; empty selects every metric.
  std::vector<std::string> metrics;
  ErrorBars error_bars = ErrorBars::deviation;
  int width = 720;
  int height = 420;
};

/// Bar or parallel-coordinates chart of a report. Data marks carry
/// class="bar" (one rect per ok cell) or class="series" (one polyline per
/// group); parallel axes carry class="axis".
std::string render_chart(const ReportTable& report, const ChartSpec& spec);

/// One panel per metric, x = iteration index, one polyline (class="series")
/// per group with a vertex per iteration whose cell is ok.
std::string render_chart(const TrajectoryTable& table, const ChartSpec& spec);

/// Scatter of the first two columns of `coords`, one circle per row, colored
/// by label.
std::string render_scatter(const Matrix& coords, const std::vector<std::string>& labels,
                           const std::string& title, int width = 560, int height = 480);

}  // namespace seqeval
