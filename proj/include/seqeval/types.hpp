#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqeval {

/// Row-major dense matrix; one row per point.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Direction { maximize, minimize };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);
/// "↑" for maximize, "↓" for minimize.
std::string_view arrow(Direction d);

enum class Alphabet { free, amino_acid, nucleotide, smiles };

/// Canonical letters of a declared alphabet; empty for free/smiles.
std::string_view alphabet_letters(Alphabet a);

/// Named ordered multiset of sequences. Duplicates are distinct elements and
/// index i refers to the same element in every representation.
class SequenceSet {
 public:
  SequenceSet() = default;
  SequenceSet(std::string name, std::vector<std::string> sequences,
              Alphabet alphabet = Alphabet::free, bool allow_empty = false);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& sequences() const { return sequences_; }
  Alphabet alphabet() const { return alphabet_; }
  std::size_t size() const { return sequences_.size(); }
  bool empty() const { return sequences_.empty(); }
  const std::string& operator[](std::size_t i) const { return sequences_[i]; }

  /// Source line of element i when loaded from a file, else i + 1.
  std::size_t source_line(std::size_t i) const;
  void set_source_lines(std::vector<std::size_t> lines);

  /// Elements at the given indices, in that order, under the same name.
  SequenceSet select(std::span<const std::size_t> rows) const;

 private:
  std::string name_;
  std::vector<std::string> sequences_;
  Alphabet alphabet_ = Alphabet::free;
  std::vector<std::size_t> source_lines_;
};

/// n x d finite embedding rows aligned with a SequenceSet.
struct EmbeddingMatrix {
  Matrix data;
  std::string source_id;

  EmbeddingMatrix() = default;
  EmbeddingMatrix(Matrix m, std::string source);

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index dim() const { return data.cols(); }

  /// Throws InvalidInput naming the first non-finite cell.
  void validate() const;
  EmbeddingMatrix select(std::span<const std::size_t> rows) const;
};

enum class ColumnType { real, binary, categorical, vector };

struct PropertyColumn {
  std::string name;
  ColumnType type = ColumnType::real;
  /// n x width; categorical cells hold an index into `categories`.
  Matrix values;
  std::vector<std::string> categories;

  Eigen::Index width() const { return values.cols(); }
};

/// Per-sequence named property values, row-aligned with a SequenceSet.
class PropertyTable {
 public:
  PropertyTable() = default;
  PropertyTable(std::size_t rows, std::vector<PropertyColumn> columns, std::string source_id);

  std::size_t rows() const { return rows_; }
  const std::vector<PropertyColumn>& columns() const { return columns_; }
  const std::string& source_id() const { return source_id_; }

  bool has(std::string_view name) const;
  /// Throws InvalidInput when the column is missing.
  const PropertyColumn& column(std::string_view name) const;

  /// Real-valued view of a real or binary column.
  Vector scalar(std::string_view name) const;
  /// Columns concatenated side by side (real, binary or vector columns).
  Matrix stacked(std::span<const std::string> names) const;
  /// Category label of every row of a categorical or binary column.
  std::vector<std::string> labels(std::string_view name) const;

  PropertyTable select(std::span<const std::size_t> rows) const;

  /// Checks row counts, binary {0,1} cells, finiteness and category codes.
  void validate() const;

 private:
  std::size_t rows_ = 0;
  std::vector<PropertyColumn> columns_;
  std::string source_id_;
};

std::string_view to_string(ColumnType t);

}  // namespace seqeval
