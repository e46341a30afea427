#include "seqeval/report.hpp"

#include "seqeval/errors.hpp"

#include <cstdio>
#include <sstream>

namespace seqeval {

using nlohmann::ordered_json;

TableFormat parse_table_format(std::string_view s) {
  if (s == "markdown" || s == "md") return TableFormat::markdown;
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  throw ConfigError("unknown table format '" + std::string(s) + "' (expected markdown, csv or json)");
}

std::string_view extension(TableFormat f) {
  switch (f) {
    case TableFormat::markdown: return ".md";
    case TableFormat::csv: return ".csv";
    case TableFormat::json: return ".json";
  }
  return "";
}

std::string format_value(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_cell(const MetricResult& cell, int precision) {
  if (!cell.ok()) return "ERR";
  std::string s = format_value(cell.value, precision);
  if (cell.deviation) s += " ± " + format_value(*cell.deviation, precision);
  return s;
}

std::string metric_header(const MetricColumn& column) {
  return column.name + " " + std::string(arrow(column.direction));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string join_md(const std::vector<std::string>& cells) {
  std::string line = "|";
  for (const auto& c : cells) line += " " + md_field(c) + " |";
  return line + "\n";
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_field(cells[i]);
  }
  return line + "\n";
}

std::string render_rows(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows, TableFormat format) {
  std::string out;
  if (format == TableFormat::markdown) {
    out += join_md(header);
    out += "|";
    for (std::size_t i = 0; i < header.size(); ++i) out += "---|";
    out += "\n";
    for (const auto& r : rows) out += join_md(r);
  } else {
    out += join_csv(header);
    for (const auto& r : rows) out += join_csv(r);
  }
  return out;
}

ordered_json cell_to_json(const MetricResult& cell) {
  ordered_json j;
  j["status"] = cell.ok() ? "ok" : "error";
  if (cell.ok()) {
    j["value"] = cell.value;
    if (cell.deviation) j["deviation"] = *cell.deviation;
    if (cell.per_fold) j["per_fold"] = *cell.per_fold;
  } else {
    j["message"] = cell.message;
  }
  if (!cell.warnings.empty()) j["warnings"] = cell.warnings;
  return j;
}

template <class T>
T get_field(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where + ": bad '" + key + "': " + e.what());
  }
}

MetricResult cell_from_json(const ordered_json& j, const std::string& where) {
  MetricResult cell;
  const auto status = get_field<std::string>(j, "status", where);
  if (status == "ok") {
    cell.value = get_field<double>(j, "value", where);
    if (j.contains("deviation")) cell.deviation = get_field<double>(j, "deviation", where);
    if (j.contains("per_fold")) cell.per_fold = get_field<std::vector<double>>(j, "per_fold", where);
  } else if (status == "error") {
    cell.status = Status::error;
    cell.message = get_field<std::string>(j, "message", where);
  } else {
    throw FormatError(where + ": unknown status '" + status + "'");
  }
  if (j.contains("warnings")) cell.warnings = get_field<std::vector<std::string>>(j, "warnings", where);
  return cell;
}

}  // namespace

ordered_json report_to_json(const ReportTable& report) {
  ordered_json doc;
  doc["groups"] = report.groups;
  ordered_json metrics = ordered_json::array();
  for (const auto& m : report.metrics) {
    metrics.push_back({{"name", m.name},
                       {"direction", std::string(to_string(m.direction))},
                       {"arity", std::string(to_string(m.arity))},
                       {"parameters", m.parameters}});
  }
  doc["metrics"] = std::move(metrics);
  ordered_json cells = ordered_json::array();
  for (const auto& row : report.cells) {
    ordered_json r = ordered_json::array();
    for (const auto& c : row) r.push_back(cell_to_json(c));
    cells.push_back(std::move(r));
  }
  doc["cells"] = std::move(cells);
  return doc;
}

ReportTable report_from_json(const ordered_json& doc) {
  ReportTable t;
  t.groups = get_field<std::vector<std::string>>(doc, "groups", "report");
  const auto& metrics = doc.at("metrics");
  if (!metrics.is_array()) throw FormatError("report: 'metrics' must be an array");
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const std::string where = "report.metrics[" + std::to_string(i) + "]";
    MetricColumn c;
    c.name = get_field<std::string>(metrics[i], "name", where);
    try {
      c.direction = parse_direction(get_field<std::string>(metrics[i], "direction", where));
    } catch (const Error& e) {
      throw FormatError(where + ": " + e.what());
    }
    const auto arity = get_field<std::string>(metrics[i], "arity", where);
    if (arity == to_string(Arity::scalar)) {
      c.arity = Arity::scalar;
    } else if (arity == to_string(Arity::mean_and_deviation)) {
      c.arity = Arity::mean_and_deviation;
    } else {
      throw FormatError(where + ": unknown arity '" + arity + "'");
    }
    if (metrics[i].contains("parameters")) c.parameters = metrics[i].at("parameters");
    t.metrics.push_back(std::move(c));
  }
  const auto& cells = doc.at("cells");
  if (!cells.is_array() || cells.size() != t.groups.size()) {
    throw FormatError("report: 'cells' must have one row per group");
  }
  for (std::size_t g = 0; g < cells.size(); ++g) {
    if (!cells[g].is_array() || cells[g].size() != t.metrics.size()) {
      throw FormatError("report.cells[" + std::to_string(g) + "]: expected one cell per metric");
    }
    std::vector<MetricResult> row;
    for (std::size_t m = 0; m < cells[g].size(); ++m) {
      row.push_back(cell_from_json(cells[g][m],
                                   "report.cells[" + std::to_string(g) + "][" + std::to_string(m) + "]"));
    }
    t.cells.push_back(std::move(row));
  }
  return t;
}

std::string render_table(const ReportTable& report, TableFormat format, const RenderOptions& options) {
  if (format == TableFormat::json) return report_to_json(report).dump(2) + "\n";
  std::vector<std::string> header{"group"};
  for (const auto& m : report.metrics) header.push_back(metric_header(m));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    std::vector<std::string> r{report.groups[g]};
    for (std::size_t m = 0; m < report.metrics.size(); ++m) {
      r.push_back(format_cell(report.at(g, m), options.precision));
    }
    rows.push_back(std::move(r));
  }
  return render_rows(header, rows, format);
}

ordered_json trajectory_to_json(const TrajectoryTable& table) {
  ordered_json doc = ordered_json::array();
  for (std::size_t i = 0; i < table.reports.size(); ++i) {
    doc.push_back({{"iteration", table.iterations[i]}, {"report", report_to_json(table.reports[i])}});
  }
  return doc;
}

std::string render_trajectory(const TrajectoryTable& table, TableFormat format,
                              const RenderOptions& options) {
  if (format == TableFormat::json) return trajectory_to_json(table).dump(2) + "\n";
  std::vector<std::string> header{"iteration", "group"};
  if (!table.reports.empty()) {
    for (const auto& m : table.reports.front().metrics) header.push_back(metric_header(m));
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < table.reports.size(); ++i) {
    const auto& rep = table.reports[i];
    for (std::size_t g = 0; g < rep.groups.size(); ++g) {
      std::vector<std::string> r{std::to_string(table.iterations[i]), rep.groups[g]};
      for (std::size_t m = 0; m < rep.metrics.size(); ++m) r.push_back(format_cell(rep.at(g, m), options.precision));
      rows.push_back(std::move(r));
    }
  }
  return render_rows(header, rows, format);
}

}  // namespace seqeval
