#include "seqeval/chart.hpp"

#include "seqeval/errors.hpp"
#include "seqeval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace seqeval {

namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string open_svg(int width, int height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
}

std::string text(double x, double y, std::string_view s, std::string_view anchor = "middle") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + std::string(anchor) + "\">" +
         escape(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, std::string_view cls,
                 std::string_view stroke = "#333") {
  return "<line class=\"" + std::string(cls) + "\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
         num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, std::string_view color,
                     std::string_view title) {
  std::string s = "<polyline class=\"series\" fill=\"none\" stroke=\"" + std::string(color) +
                  "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(pts[i].first) + "," + num(pts[i].second);
  }
  return s + "\"><title>" + escape(title) + "</title></polyline>\n";
}

std::string legend_entry(double x, double y, std::string_view color, std::string_view label) {
  return "<rect class=\"legend\" x=\"" + num(x) + "\" y=\"" + num(y - 9) +
         "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) + "\"/>\n" +
         text(x + 14, y, label, "start");
}

std::vector<std::size_t> select_metrics(const std::vector<MetricColumn>& metrics,
                                        const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  if (names.empty()) {
    for (std::size_t i = 0; i < metrics.size(); ++i) out.push_back(i);
  } else {
    for (const auto& n : names) {
      auto it = std::find_if(metrics.begin(), metrics.end(), [&](const MetricColumn& m) { return m.name == n; });
      if (it == metrics.end()) throw InvalidInput("chart: metric '" + n + "' is not in the report");
      out.push_back(static_cast<std::size_t>(it - metrics.begin()));
    }
  }
  if (out.empty()) throw InvalidInput("chart: empty metric selection");
  return out;
}

struct Range {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  void add(double v) {
    if (!any) {
      lo = hi = v;
      any = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  double scale(double v) const { return hi > lo ? (v - lo) / (hi - lo) : 0.5; }
};

std::string bar_chart(const ReportTable& report, const ChartSpec& spec) {
  const auto sel = select_metrics(report.metrics, spec.metrics);
  const double w = spec.width, h = spec.height;
  const double top = 30, bottom = 60, left = 20, right = 20;
  const double panel_w = (w - left - right) / static_cast<double>(sel.size());
  const double plot_h = h - top - bottom;
  const bool with_err = spec.error_bars == ErrorBars::deviation;

  std::string svg = open_svg(spec.width, spec.height);
  const std::size_t ng = report.groups.size();
  for (std::size_t p = 0; p < sel.size(); ++p) {
    const std::size_t m = sel[p];
    Range r;
    r.add(0.0);
    for (std::size_t g = 0; g < ng; ++g) {
      const auto& c = report.at(g, m);
      if (!c.ok()) continue;
      const double dev = with_err && c.deviation ? *c.deviation : 0.0;
      r.add(c.value + dev);
      r.add(c.value - dev);
    }
    if (!(r.hi > r.lo)) r.hi = r.lo + 1.0;
    auto ypos = [&](double v) { return top + plot_h * (1.0 - (v - r.lo) / (r.hi - r.lo)); };
    const double x0 = left + panel_w * static_cast<double>(p);
    const double slot = (panel_w - 20) / static_cast<double>(ng);
    svg += text(x0 + panel_w / 2, top - 10, metric_header(report.metrics[m]));
    svg += line(x0 + 10, ypos(0.0), x0 + panel_w - 10, ypos(0.0), "baseline");
    for (std::size_t g = 0; g < ng; ++g) {
      const auto& c = report.at(g, m);
      const double bx = x0 + 10 + slot * static_cast<double>(g) + slot * 0.15;
      const double bw = slot * 0.7;
      const char* color = kPalette[g % kPaletteSize];
      if (!c.ok()) {
        svg += text(bx + bw / 2, ypos(0.0) - 4, "ERR");
        continue;
      }
      const double y_val = ypos(c.value), y_zero = ypos(0.0);
      svg += "<rect class=\"bar\" x=\"" + num(bx) + "\" y=\"" + num(std::min(y_val, y_zero)) + "\" width=\"" +
             num(bw) + "\" height=\"" + num(std::abs(y_zero - y_val)) + "\" fill=\"" + color + "\"><title>" +
             escape(report.groups[g] + ": " + format_cell(c, 4)) + "</title></rect>\n";
      if (with_err && c.deviation) {
        const double cx = bx + bw / 2;
        const double ya = ypos(c.value - *c.deviation), yb = ypos(c.value + *c.deviation);
        svg += line(cx, ya, cx, yb, "errbar");
        svg += line(cx - 4, ya, cx + 4, ya, "errbar");
        svg += line(cx - 4, yb, cx + 4, yb, "errbar");
      }
      svg += text(bx + bw / 2, h - bottom + 14, report.groups[g]);
    }
  }
  return svg + "</svg>\n";
}

std::string parallel_chart(const ReportTable& report, const ChartSpec& spec) {
  const auto sel = select_metrics(report.metrics, spec.metrics);
  const double w = spec.width, h = spec.height;
  const double top = 40, bottom = 40, left = 60, right = 140;
  const double plot_h = h - top - bottom;
  const double step = sel.size() > 1 ? (w - left - right) / static_cast<double>(sel.size() - 1) : 0.0;
  auto axis_x = [&](std::size_t p) {
    return sel.size() > 1 ? left + step * static_cast<double>(p) : (left + w - right) / 2;
  };

  std::vector<Range> ranges(sel.size());
  for (std::size_t p = 0; p < sel.size(); ++p) {
    for (std::size_t g = 0; g < report.groups.size(); ++g) {
      const auto& c = report.at(g, sel[p]);
      if (c.ok()) ranges[p].add(c.value);
    }
  }

  std::string svg = open_svg(spec.width, spec.height);
  for (std::size_t p = 0; p < sel.size(); ++p) {
    const double x = axis_x(p);
    svg += line(x, top, x, top + plot_h, "axis");
    svg += text(x, top - 16, metric_header(report.metrics[sel[p]]));
    if (ranges[p].any) {
      svg += text(x, top - 4, format_value(ranges[p].hi, 4));
      svg += text(x, top + plot_h + 14, format_value(ranges[p].lo, 4));
    }
  }
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t p = 0; p < sel.size(); ++p) {
      const auto& c = report.at(g, sel[p]);
      if (!c.ok()) continue;
      pts.emplace_back(axis_x(p), top + plot_h * (1.0 - ranges[p].scale(c.value)));
    }
    const char* color = kPalette[g % kPaletteSize];
    svg += polyline(pts, color, report.groups[g]);
    svg += legend_entry(w - right + 20, top + 16 * static_cast<double>(g), color, report.groups[g]);
  }
  return svg + "</svg>\n";
}

}  // namespace

ChartKind parse_chart_kind(std::string_view s) {
  if (s == "bar") return ChartKind::bar;
  if (s == "parallel" || s == "parallel-coordinates") return ChartKind::parallel;
  if (s == "trajectory") return ChartKind::trajectory;
  throw ConfigError("unknown chart kind '" + std::string(s) + "' (expected bar, parallel or trajectory)");
}

std::string render_chart(const ReportTable& report, const ChartSpec& spec) {
  if (report.groups.empty()) throw InvalidInput("chart: report has no groups");
  switch (spec.kind) {
    case ChartKind::bar: return bar_chart(report, spec);
    case ChartKind::parallel: return parallel_chart(report, spec);
    case ChartKind::trajectory: break;
  }
  throw InvalidInput("chart: a trajectory chart needs a trajectory table");
}

std::string render_chart(const TrajectoryTable& table, const ChartSpec& spec) {
  if (table.reports.empty()) throw InvalidInput("chart: trajectory table is empty");
  const auto& first = table.reports.front();
  const auto sel = select_metrics(first.metrics, spec.metrics);
  const double w = spec.width;
  const double panel_h = 200, top = 30, left = 60, right = 140, gap = 50;
  const double h = top + (panel_h + gap) * static_cast<double>(sel.size());
  const double plot_w = w - left - right;
  const bool with_err = spec.error_bars == ErrorBars::deviation;

  // Group order: first appearance across iterations.
  std::vector<std::string> groups;
  for (const auto& rep : table.reports) {
    for (const auto& g : rep.groups) {
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
  }
  const double it_lo = static_cast<double>(table.iterations.front());
  const double it_hi = static_cast<double>(table.iterations.back());
  auto xpos = [&](std::int64_t it) {
    return it_hi > it_lo ? left + plot_w * (static_cast<double>(it) - it_lo) / (it_hi - it_lo) : left + plot_w / 2;
  };

  std::string svg = open_svg(spec.width, static_cast<int>(std::ceil(h)));
  for (std::size_t p = 0; p < sel.size(); ++p) {
    const std::string& metric = first.metrics[sel[p]].name;
    const double y0 = top + (panel_h + gap) * static_cast<double>(p);
    Range r;
    for (const auto& rep : table.reports) {
      const auto mit = std::find_if(rep.metrics.begin(), rep.metrics.end(),
                                    [&](const MetricColumn& m) { return m.name == metric; });
      if (mit == rep.metrics.end()) continue;
      const auto m = static_cast<std::size_t>(mit - rep.metrics.begin());
      for (std::size_t g = 0; g < rep.groups.size(); ++g) {
        const auto& c = rep.at(g, m);
        if (!c.ok()) continue;
        const double dev = with_err && c.deviation ? *c.deviation : 0.0;
        r.add(c.value - dev);
        r.add(c.value + dev);
      }
    }
    auto ypos = [&](double v) { return y0 + panel_h * (1.0 - r.scale(v)); };
    svg += text(left + plot_w / 2, y0 - 10, metric_header(first.metrics[sel[p]]));
    svg += line(left, y0 + panel_h, left + plot_w, y0 + panel_h, "xaxis");
    svg += line(left, y0, left, y0 + panel_h, "yaxis");
    if (r.any) {
      svg += text(left - 4, y0 + 4, format_value(r.hi, 4), "end");
      svg += text(left - 4, y0 + panel_h, format_value(r.lo, 4), "end");
    }
    for (auto it : table.iterations) svg += text(xpos(it), y0 + panel_h + 14, std::to_string(it));

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      std::vector<std::pair<double, double>> pts;
      const char* color = kPalette[gi % kPaletteSize];
      std::string bars;
      for (std::size_t i = 0; i < table.reports.size(); ++i) {
        const auto& rep = table.reports[i];
        const auto git = std::find(rep.groups.begin(), rep.groups.end(), groups[gi]);
        const auto mit = std::find_if(rep.metrics.begin(), rep.metrics.end(),
                                      [&](const MetricColumn& m) { return m.name == metric; });
        if (git == rep.groups.end() || mit == rep.metrics.end()) continue;
        const auto& c = rep.at(static_cast<std::size_t>(git - rep.groups.begin()),
                               static_cast<std::size_t>(mit - rep.metrics.begin()));
        if (!c.ok()) continue;
        const double x = xpos(table.iterations[i]);
        pts.emplace_back(x, ypos(c.value));
        if (with_err && c.deviation) {
          bars += line(x, ypos(c.value - *c.deviation), x, ypos(c.value + *c.deviation), "errbar", color);
        }
      }
      svg += polyline(pts, color, groups[gi] + " / " + metric);
      svg += bars;
      if (p == 0) svg += legend_entry(w - right + 20, top + 16 * static_cast<double>(gi), color, groups[gi]);
    }
  }
  return svg + "</svg>\n";
}

std::string render_scatter(const Matrix& coords, const std::vector<std::string>& labels,
                           const std::string& title, int width, int height) {
  if (coords.cols() < 2) throw InvalidInput("scatter: needs two coordinate columns");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != coords.rows()) {
    throw InvalidInput("scatter: label count does not match point count");
  }
  const double top = 30, bottom = 30, left = 30, right = 140;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  Range rx, ry;
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    rx.add(coords(i, 0));
    ry.add(coords(i, 1));
  }
  std::map<std::string, std::size_t> color_of;
  std::vector<std::string> order;
  for (const auto& l : labels) {
    if (color_of.emplace(l, order.size()).second) order.push_back(l);
  }

  std::string svg = open_svg(width, height);
  svg += text(left + plot_w / 2, top - 12, title);
  svg += "<rect class=\"frame\" x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(plot_w) +
         "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    const double x = left + 6 + (plot_w - 12) * rx.scale(coords(i, 0));
    const double y = top + 6 + (plot_h - 12) * (1.0 - ry.scale(coords(i, 1)));
    const char* color = labels.empty() ? kPalette[0]
                                       : kPalette[color_of.at(labels[static_cast<std::size_t>(i)]) % kPaletteSize];
    svg += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    svg += legend_entry(width - right + 16, top + 16 * static_cast<double>(k), kPalette[k % kPaletteSize], order[k]);
  }
  return svg + "</svg>\n";
}

}  // namespace seqeval
