#include "seqeval/types.hpp"

#include "seqeval/errors.hpp"

#include <cmath>
#include <string>

namespace seqeval {

std::string_view to_string(Direction d) {
  return d == Direction::maximize ? "maximize" : "minimize";
}

Direction parse_direction(std::string_view s) {
  if (s == "maximize" || s == "max" || s == "up") return Direction::maximize;
  if (s == "minimize" || s == "min" || s == "down") return Direction::minimize;
  throw InvalidInput("unknown direction '" + std::string(s) + "'");
}

std::string_view arrow(Direction d) {
  return d == Direction::maximize ? "↑" : "↓";
}

std::string_view alphabet_letters(Alphabet a) {
  switch (a) {
    case Alphabet::amino_acid:
      return "ACDEFGHIKLMNPQRSTVWY";
    case Alphabet::nucleotide:
      return "ACGT";
    default:
      return "";
  }
}

SequenceSet::SequenceSet(std::string name, std::vector<std::string> sequences, Alphabet alphabet,
                         bool allow_empty)
    : name_(std::move(name)), sequences_(std::move(sequences)), alphabet_(alphabet) {
  if (!allow_empty) {
    for (std::size_t i = 0; i < sequences_.size(); ++i) {
      if (sequences_[i].empty()) {
        throw InvalidInput("sequence set '" + name_ + "': element " + std::to_string(i) +
                           " is empty");
      }
    }
  }
}

std::size_t SequenceSet::source_line(std::size_t i) const {
  return i < source_lines_.size() ? source_lines_[i] : i + 1;
}

void SequenceSet::set_source_lines(std::vector<std::size_t> lines) {
  source_lines_ = std::move(lines);
}

SequenceSet SequenceSet::select(std::span<const std::size_t> rows) const {
  SequenceSet out;
  out.name_ = name_;
  out.alphabet_ = alphabet_;
  out.sequences_.reserve(rows.size());
  for (auto r : rows) out.sequences_.push_back(sequences_.at(r));
  if (!source_lines_.empty()) {
    for (auto r : rows) out.source_lines_.push_back(source_lines_.at(r));
  }
  return out;
}

EmbeddingMatrix::EmbeddingMatrix(Matrix m, std::string source)
    : data(std::move(m)), source_id(std::move(source)) {}

void EmbeddingMatrix::validate() const {
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (!std::isfinite(data(i, j))) {
        throw InvalidInput("embedding '" + source_id + "': non-finite value at row " +
                           std::to_string(i) + ", column " + std::to_string(j));
      }
    }
  }
}

EmbeddingMatrix EmbeddingMatrix::select(std::span<const std::size_t> rows) const {
  Matrix m(static_cast<Eigen::Index>(rows.size()), data.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = data.row(static_cast<Eigen::Index>(rows[i]));
  }
  return {std::move(m), source_id};
}

std::string_view to_string(ColumnType t) {
  switch (t) {
    case ColumnType::real:
      return "real";
    case ColumnType::binary:
      return "binary";
    case ColumnType::categorical:
      return "categorical";
    case ColumnType::vector:
      return "vec";
  }
  return "?";
}

PropertyTable::PropertyTable(std::size_t rows, std::vector<PropertyColumn> columns,
                             std::string source_id)
    : rows_(rows), columns_(std::move(columns)), source_id_(std::move(source_id)) {
  validate();
}

bool PropertyTable::has(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return true;
  }
  return false;
}

const PropertyColumn& PropertyTable::column(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return c;
  }
  throw InvalidInput("property table '" + source_id_ + "' has no column '" + std::string(name) +
                     "'");
}

Vector PropertyTable::scalar(std::string_view name) const {
  const auto& c = column(name);
  if (c.type != ColumnType::real && c.type != ColumnType::binary) {
    throw InvalidInput("property column '" + c.name + "' is " + std::string(to_string(c.type)) +
                       ", expected a real or binary column");
  }
  return c.values.col(0);
}

Matrix PropertyTable::stacked(std::span<const std::string> names) const {
  Eigen::Index width = 0;
  for (const auto& n : names) {
    const auto& c = column(n);
    if (c.type == ColumnType::categorical) {
      throw InvalidInput("property column '" + c.name + "' is categorical, expected numeric");
    }
    width += c.width();
  }
  Matrix out(static_cast<Eigen::Index>(rows_), width);
  Eigen::Index at = 0;
  for (const auto& n : names) {
    const auto& c = column(n);
    out.middleCols(at, c.width()) = c.values;
    at += c.width();
  }
  return out;
}

std::vector<std::string> PropertyTable::labels(std::string_view name) const {
  const auto& c = column(name);
  std::vector<std::string> out;
  out.reserve(rows_);
  if (c.type == ColumnType::categorical) {
    for (std::size_t i = 0; i < rows_; ++i) {
      out.push_back(c.categories.at(static_cast<std::size_t>(c.values(static_cast<Eigen::Index>(i), 0))));
    }
  } else if (c.type == ColumnType::binary) {
    for (std::size_t i = 0; i < rows_; ++i) {
      out.push_back(c.values(static_cast<Eigen::Index>(i), 0) != 0.0 ? "1" : "0");
    }
  } else {
    throw InvalidInput("property column '" + c.name + "' is not categorical or binary");
  }
  return out;
}

PropertyTable PropertyTable::select(std::span<const std::size_t> rows) const {
  std::vector<PropertyColumn> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) {
    PropertyColumn s{c.name, c.type, Matrix(static_cast<Eigen::Index>(rows.size()), c.width()),
                     c.categories};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s.values.row(static_cast<Eigen::Index>(i)) = c.values.row(static_cast<Eigen::Index>(rows[i]));
    }
    cols.push_back(std::move(s));
  }
  return PropertyTable(rows.size(), std::move(cols), source_id_);
}

void PropertyTable::validate() const {
  for (const auto& c : columns_) {
    const std::string where = "property table '" + source_id_ + "', column '" + c.name + "'";
    if (static_cast<std::size_t>(c.values.rows()) != rows_) {
      throw InvalidInput(where + ": has " + std::to_string(c.values.rows()) + " rows, expected " +
                         std::to_string(rows_));
    }
    if (c.type != ColumnType::vector && c.width() != 1) {
      throw InvalidInput(where + ": scalar column has width " + std::to_string(c.width()));
    }
    for (Eigen::Index i = 0; i < c.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.values.cols(); ++j) {
        const double v = c.values(i, j);
        const std::string cell = " at row " + std::to_string(i);
        if (!std::isfinite(v)) throw InvalidInput(where + ": non-finite value" + cell);
        if (c.type == ColumnType::binary && v != 0.0 && v != 1.0) {
          throw InvalidInput(where + ": binary value " + std::to_string(v) + cell);
        }
        if (c.type == ColumnType::categorical &&
            (v < 0 || v != std::floor(v) || v >= static_cast<double>(c.categories.size()))) {
          throw InvalidInput(where + ": category code out of range" + cell);
        }
      }
    }
  }
}

}  // namespace seqeval
