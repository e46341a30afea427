#pragma once

#include "seqeval/engine.hpp"

#include <json.hpp>

#include <string>

namespace seqeval {

enum class TableFormat { markdown, csv, json };

TableFormat parse_table_format(std::string_view s);
std::string_view extension(TableFormat f);

struct RenderOptions {
  /// Digits after the decimal point.
  int precision = 4;
};

/// Fixed-point text for a value; never prints a negative zero.
std::string format_value(double v, int precision);

/// "m", "m ± s" for cells with a deviation, "ERR" for error cells.
std::string format_cell(const MetricResult& cell, int precision);

/// Metric header with its direction arrow, e.g. "FBD ↓".
std::string metric_header(const MetricColumn& column);

std::string render_table(const ReportTable& report, TableFormat format, const RenderOptions& options = {});

/// Full-precision value graph of the report.
nlohmann::ordered_json report_to_json(const ReportTable& report);
/// Inverse of report_to_json; throws FormatError on malformed documents.
ReportTable report_from_json(const nlohmann::ordered_json& doc);

/// One row per (iteration, group), one column per metric.
std::string render_trajectory(const TrajectoryTable& table, TableFormat format,
                              const RenderOptions& options = {});
nlohmann::ordered_json trajectory_to_json(const TrajectoryTable& table);

}  // namespace seqeval
