#pragma once

#include "seqeval/types.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace seqeval::io {

/// FASTA when the first non-blank byte is '>', else one sequence per line.
/// Order and duplicates are preserved, CRLF and trailing whitespace dropped.
SequenceSet parse_sequences(std::string_view text, std::string name, std::string_view origin = "<memory>");
SequenceSet load_sequences(const std::filesystem::path& path, std::optional<std::string> name = std::nullopt);

// Binary embedding layout (little endian):
//   "SQME" | u8 version = 1 | u8 element type = 1 (f32) | u64 rows | u64 cols | f32 row-major payload
inline constexpr std::size_t kEmbeddingHeaderBytes = 22;
inline constexpr std::uint8_t kEmbeddingVersion = 1;
inline constexpr std::uint8_t kElementF32 = 1;

std::string encode_embeddings_binary(const Matrix& m);
Matrix decode_embeddings_binary(std::string_view bytes, std::string_view origin = "<memory>");

/// "dim=<d>" then one row of d comma-separated values per line.
std::string encode_embeddings_csv(const Matrix& m);
Matrix decode_embeddings_csv(std::string_view text, std::string_view origin = "<memory>");

enum class EmbeddingFormat { binary, csv };
EmbeddingFormat sniff_embedding_format(std::string_view bytes);

void save_embeddings(const std::filesystem::path& path, const Matrix& m, EmbeddingFormat format);
/// Reads either format; throws FormatError on row mismatch or malformed input.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                std::optional<std::size_t> expected_rows = std::nullopt);

/// Header cells "name:type" with type real | binary | categorical | vec<k>;
/// a vec<k> column spans k cells "name[0]:vec<k>" .. "name[k-1]:vec<k>".
std::string encode_properties_csv(const PropertyTable& table);
PropertyTable decode_properties_csv(std::string_view text, std::string_view origin = "<memory>");
void save_properties(const std::filesystem::path& path, const PropertyTable& table);
PropertyTable load_properties(const std::filesystem::path& path,
                              std::optional<std::size_t> expected_rows = std::nullopt);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace seqeval::io
