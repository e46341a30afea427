#include "seqeval/io.hpp"

#include "seqeval/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace seqeval::io {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string_view strip(std::string_view s) {
  s = rstrip(s);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(',', start);
    if (end == std::string_view::npos) {
      cells.push_back(strip(line.substr(start)));
      break;
    }
    cells.push_back(strip(line.substr(start, end - start)));
    start = end + 1;
  }
  return cells;
}

std::optional<double> parse_double(std::string_view cell) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && cell.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return v;
}

std::string at_line(std::string_view origin, std::size_t line) {
  return std::string(origin) + ":" + std::to_string(line) + ": ";
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint64_t get_u64(std::string_view bytes, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

SequenceSet parse_sequences(std::string_view text, std::string name, std::string_view origin) {
  const auto lines = split_lines(text);
  std::vector<std::string> seqs;
  std::vector<std::size_t> source_lines;

  std::size_t first = 0;
  while (first < lines.size() && strip(lines[first]).empty()) ++first;
  if (first == lines.size()) throw FormatError(std::string(origin) + ": empty file");

  if (strip(lines[first]).front() == '>') {
    std::string header;
    std::size_t header_line = 0;
    bool open = false;
    auto close = [&]() {
      if (open && seqs.back().empty()) {
        throw FormatError(at_line(origin, header_line) + "FASTA record '" + header +
                          "' has an empty body");
      }
    };
    for (std::size_t i = first; i < lines.size(); ++i) {
      const auto line = strip(lines[i]);
      if (line.empty()) continue;
      if (line.front() == '>') {
        close();
        header = std::string(strip(line.substr(1)));
        header_line = i + 1;
        seqs.emplace_back();
        source_lines.push_back(i + 1);
        open = true;
      } else {
        seqs.back().append(line);
      }
    }
    close();
  } else {
    for (std::size_t i = first; i < lines.size(); ++i) {
      const auto line = strip(lines[i]);
      if (line.empty()) continue;
      if (line.front() == '>') {
        throw FormatError(at_line(origin, i + 1) + "FASTA header in a plain sequence file");
      }
      seqs.emplace_back(line);
      source_lines.push_back(i + 1);
    }
  }

  SequenceSet set(std::move(name), std::move(seqs));
  set.set_source_lines(std::move(source_lines));
  return set;
}

SequenceSet load_sequences(const std::filesystem::path& path, std::optional<std::string> name) {
  if (!std::filesystem::exists(path)) {
    throw FormatError("sequence file '" + path.string() + "' does not exist");
  }
  return parse_sequences(read_file(path), name ? *name : path.stem().string(), path.string());
}

std::string encode_embeddings_binary(const Matrix& m) {
  std::string out;
  out.reserve(kEmbeddingHeaderBytes + static_cast<std::size_t>(m.size()) * 4);
  out.append("SQME");
  out.push_back(static_cast<char>(kEmbeddingVersion));
  out.push_back(static_cast<char>(kElementF32));
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const float f = static_cast<float>(m(i, j));
      std::uint32_t bits = 0;
      std::memcpy(&bits, &f, sizeof bits);
      for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
    }
  }
  return out;
}

Matrix decode_embeddings_binary(std::string_view bytes, std::string_view origin) {
  const std::string where(origin);
  if (bytes.size() < 4 || bytes.substr(0, 4) != "SQME") {
    throw FormatError(where + ": bad magic at byte 0 (expected \"SQME\")");
  }
  if (bytes.size() < kEmbeddingHeaderBytes) {
    throw FormatError(where + ": truncated header (" + std::to_string(bytes.size()) + " of " +
                      std::to_string(kEmbeddingHeaderBytes) + " bytes)");
  }
  const auto version = static_cast<unsigned char>(bytes[4]);
  if (version != kEmbeddingVersion) {
    throw FormatError(where + ": unsupported version " + std::to_string(version) + " at byte 4");
  }
  const auto etype = static_cast<unsigned char>(bytes[5]);
  if (etype != kElementF32) {
    throw FormatError(where + ": unsupported element type " + std::to_string(etype) + " at byte 5");
  }
  const std::uint64_t rows = get_u64(bytes, 6);
  const std::uint64_t cols = get_u64(bytes, 14);
  const std::size_t payload = bytes.size() - kEmbeddingHeaderBytes;
  if (cols != 0 && rows > payload / 4 / cols) {
    throw FormatError(where + ": truncated payload at byte " + std::to_string(bytes.size()) +
                      " (header declares " + std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }
  if (rows * cols * 4 != payload) {
    throw FormatError(where + ": payload is " + std::to_string(payload) + " bytes, expected " +
                      std::to_string(rows * cols * 4));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t at = kEmbeddingHeaderBytes;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + b])) << (8 * b);
      }
      float f = 0.0f;
      std::memcpy(&f, &bits, sizeof f);
      if (!std::isfinite(f)) {
        throw FormatError(where + ": non-finite value at byte " + std::to_string(at) + " (row " +
                          std::to_string(i) + ", column " + std::to_string(j) + ")");
      }
      m(i, j) = f;
      at += 4;
    }
  }
  return m;
}

std::string encode_embeddings_csv(const Matrix& m) {
  std::string out = "dim=" + std::to_string(m.cols()) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out.append(format_double(m(i, j)));
    }
    out.push_back('\n');
  }
  return out;
}

Matrix decode_embeddings_csv(std::string_view text, std::string_view origin) {
  const auto lines = split_lines(text);
  if (lines.empty() || rstrip(lines[0]).substr(0, 4) != "dim=") {
    throw FormatError(at_line(origin, 1) + "malformed header (expected \"dim=<d>\")");
  }
  const auto dim_text = rstrip(lines[0]).substr(4);
  std::size_t dim = 0;
  auto [ptr, ec] = std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim);
  if (ec != std::errc() || ptr != dim_text.data() + dim_text.size() || dim == 0) {
    throw FormatError(at_line(origin, 1) + "malformed header (expected \"dim=<d>\")");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto line = strip(lines[l]);
    if (line.empty()) continue;
    const auto cells = split_cells(line);
    if (cells.size() != dim) {
      throw FormatError(at_line(origin, l + 1) + "row has " + std::to_string(cells.size()) +
                        " values, expected " + std::to_string(dim));
    }
    std::vector<double> row(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      const auto v = parse_double(cells[c]);
      if (!v) {
        throw FormatError(at_line(origin, l + 1) + "row " + std::to_string(rows.size()) +
                          ", column " + std::to_string(c) + ": cannot parse '" +
                          std::string(cells[c]) + "'");
      }
      if (!std::isfinite(*v)) {
        throw FormatError(at_line(origin, l + 1) + "row " + std::to_string(rows.size()) +
                          ", column " + std::to_string(c) + ": non-finite value '" +
                          std::string(cells[c]) + "'");
      }
      row[c] = *v;
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

EmbeddingFormat sniff_embedding_format(std::string_view bytes) {
  return bytes.substr(0, 4) == "dim=" ? EmbeddingFormat::csv : EmbeddingFormat::binary;
}

void save_embeddings(const std::filesystem::path& path, const Matrix& m, EmbeddingFormat format) {
  write_file(path, format == EmbeddingFormat::binary ? encode_embeddings_binary(m)
                                                     : encode_embeddings_csv(m));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                std::optional<std::size_t> expected_rows) {
  const auto bytes = read_file(path);
  Matrix m = sniff_embedding_format(bytes) == EmbeddingFormat::csv
                 ? decode_embeddings_csv(bytes, path.string())
                 : decode_embeddings_binary(bytes, path.string());
  if (expected_rows && static_cast<std::size_t>(m.rows()) != *expected_rows) {
    throw FormatError(path.string() + ": has " + std::to_string(m.rows()) + " rows, expected " +
                      std::to_string(*expected_rows));
  }
  return {std::move(m), path.string()};
}

namespace {

struct HeaderColumn {
  std::string name;
  ColumnType type;
  std::size_t width;
  std::size_t first_cell;
};

std::vector<HeaderColumn> parse_property_header(std::string_view line, std::string_view origin) {
  std::vector<HeaderColumn> columns;
  const auto cells = split_cells(line);
  for (std::size_t c = 0; c < cells.size();) {
    const auto cell = cells[c];
    const auto colon = cell.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw FormatError(at_line(origin, 1) + "header cell " + std::to_string(c) + " '" +
                        std::string(cell) + "' is not \"name:type\"");
    }
    const auto name = cell.substr(0, colon);
    const auto type = cell.substr(colon + 1);
    if (type == "real" || type == "binary" || type == "categorical") {
      const auto t = type == "real"     ? ColumnType::real
                     : type == "binary" ? ColumnType::binary
                                        : ColumnType::categorical;
      columns.push_back({std::string(name), t, 1, c});
      ++c;
      continue;
    }
    if (type.size() > 5 && type.substr(0, 4) == "vec<" && type.back() == '>') {
      const auto w = type.substr(4, type.size() - 5);
      std::size_t width = 0;
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), width);
      if (ec != std::errc() || ptr != w.data() + w.size() || width == 0) {
        throw FormatError(at_line(origin, 1) + "bad vector width in '" + std::string(cell) + "'");
      }
      const auto bracket = name.find('[');
      const auto base = name.substr(0, bracket);
      for (std::size_t i = 0; i < width; ++i) {
        const std::string expected = std::string(base) + "[" + std::to_string(i) + "]:" +
                                     std::string(type);
        if (c + i >= cells.size() || cells[c + i] != expected) {
          throw FormatError(at_line(origin, 1) + "vector column '" + std::string(base) +
                            "' declares width " + std::to_string(width) + " but header cell " +
                            std::to_string(c + i) + " is not '" + expected + "' (width mismatch)");
        }
      }
      columns.push_back({std::string(base), ColumnType::vector, width, c});
      c += width;
      continue;
    }
    throw FormatError(at_line(origin, 1) + "unknown type token '" + std::string(type) +
                      "' in header cell '" + std::string(cell) + "'");
  }
  return columns;
}

}  // namespace

std::string encode_properties_csv(const PropertyTable& table) {
  std::string out;
  bool first = true;
  auto sep = [&]() {
    if (!first) out.push_back(',');
    first = false;
  };
  for (const auto& c : table.columns()) {
    if (c.type == ColumnType::vector) {
      const std::string type = "vec<" + std::to_string(c.width()) + ">";
      for (Eigen::Index i = 0; i < c.width(); ++i) {
        sep();
        out += c.name + "[" + std::to_string(i) + "]:" + type;
      }
    } else {
      sep();
      out += c.name + ":" + std::string(to_string(c.type));
    }
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < table.rows(); ++r) {
    first = true;
    for (const auto& c : table.columns()) {
      for (Eigen::Index j = 0; j < c.width(); ++j) {
        sep();
        const double v = c.values(static_cast<Eigen::Index>(r), j);
        if (c.type == ColumnType::categorical) {
          const auto& label = c.categories.at(static_cast<std::size_t>(v));
          if (label.find_first_of(",\n\r") != std::string::npos) {
            throw FormatError("category label '" + label + "' cannot be written to CSV");
          }
          out += label;
        } else if (c.type == ColumnType::binary) {
          out += v != 0.0 ? "1" : "0";
        } else {
          out += format_double(v);
        }
      }
    }
    out.push_back('\n');
  }
  return out;
}

PropertyTable decode_properties_csv(std::string_view text, std::string_view origin) {
  const auto lines = split_lines(text);
  if (lines.empty() || strip(lines[0]).empty()) {
    throw FormatError(at_line(origin, 1) + "missing header");
  }
  const auto header = parse_property_header(rstrip(lines[0]), origin);
  const std::size_t n_cells = header.back().first_cell + header.back().width;

  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> row_lines;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto line = strip(lines[l]);
    if (line.empty()) continue;
    auto cells = split_cells(line);
    if (cells.size() != n_cells) {
      std::string detail;
      for (const auto& h : header) {
        if (h.type == ColumnType::vector && cells.size() < h.first_cell + h.width &&
            cells.size() > h.first_cell) {
          detail = " (vector column '" + h.name + "' has width " + std::to_string(h.width) + ")";
          break;
        }
      }
      throw FormatError(at_line(origin, l + 1) + "row has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(n_cells) + detail);
    }
    rows.push_back(std::move(cells));
    row_lines.push_back(l + 1);
  }

  std::vector<PropertyColumn> columns;
  for (const auto& h : header) {
    PropertyColumn col{h.name, h.type,
                       Matrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(h.width)),
                       {}};
    std::map<std::string, std::size_t, std::less<>> codes;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t j = 0; j < h.width; ++j) {
        const auto cell = rows[r][h.first_cell + j];
        const std::string where = at_line(origin, row_lines[r]) + "column '" + h.name + "': ";
        double v = 0.0;
        if (h.type == ColumnType::categorical) {
          auto it = codes.find(cell);
          if (it == codes.end()) {
            it = codes.emplace(std::string(cell), col.categories.size()).first;
            col.categories.emplace_back(cell);
          }
          v = static_cast<double>(it->second);
        } else if (h.type == ColumnType::binary) {
          if (cell != "0" && cell != "1") {
            throw FormatError(where + "binary value '" + std::string(cell) + "' is not 0 or 1");
          }
          v = cell == "1" ? 1.0 : 0.0;
        } else {
          const auto parsed = parse_double(cell);
          if (!parsed) throw FormatError(where + "cannot parse '" + std::string(cell) + "'");
          if (!std::isfinite(*parsed)) {
            throw FormatError(where + "non-finite value '" + std::string(cell) + "'");
          }
          v = *parsed;
        }
        col.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
      }
    }
    columns.push_back(std::move(col));
  }
  return PropertyTable(rows.size(), std::move(columns), std::string(origin));
}

void save_properties(const std::filesystem::path& path, const PropertyTable& table) {
  write_file(path, encode_properties_csv(table));
}

PropertyTable load_properties(const std::filesystem::path& path,
                              std::optional<std::size_t> expected_rows) {
  auto table = decode_properties_csv(read_file(path), path.string());
  if (expected_rows && table.rows() != *expected_rows) {
    throw FormatError(path.string() + ": has " + std::to_string(table.rows()) + " rows, expected " +
                      std::to_string(*expected_rows));
  }
  return table;
}

}  // namespace seqeval::io
