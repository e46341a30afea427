#include "seqeval/representations.hpp"

#include "seqeval/io.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

namespace seqeval {

RepresentationRegistry::RepresentationRegistry(std::shared_ptr<Cache> cache)
    : cache_(std::move(cache)) {}

RepresentationRegistry::RepresentationRegistry(const RepresentationRegistry& other)
    : cache_(other.cache_),
      embedders_(other.embedders_),
      property_models_(other.property_models_),
      embedding_files_(other.embedding_files_),
      property_files_(other.property_files_) {}

void RepresentationRegistry::add_embedder(std::string id, BatchModel model) {
  embedders_[std::move(id)] = std::move(model);
}

void RepresentationRegistry::add_property_model(std::string id, PropertyModel model) {
  property_models_[std::move(id)] = std::move(model);
}

void RepresentationRegistry::add_embedding_file(std::string id, std::string set_name,
                                                std::filesystem::path path) {
  embedding_files_[{std::move(id), std::move(set_name)}].push_back(std::move(path));
}

void RepresentationRegistry::add_property_file(std::string id, std::string set_name,
                                               std::filesystem::path path) {
  property_files_[{std::move(id), std::move(set_name)}].push_back(std::move(path));
}

bool RepresentationRegistry::has(std::string_view id) const {
  if (embedders_.count(id) || property_models_.count(id)) return true;
  for (const auto& [key, _] : embedding_files_) {
    if (key.first == id) return true;
  }
  for (const auto& [key, _] : property_files_) {
    if (key.first == id) return true;
  }
  return false;
}

std::vector<std::filesystem::path> RepresentationRegistry::files_for(
    const std::map<std::pair<std::string, std::string>, std::vector<std::filesystem::path>>& m,
    std::string_view id, const SequenceSet& set) const {
  auto it = m.find({std::string(id), set.name()});
  return it == m.end() ? std::vector<std::filesystem::path>{} : it->second;
}

namespace {

void check_alignment(Eigen::Index rows, const SequenceSet& set, std::string_view id) {
  if (static_cast<std::size_t>(rows) != set.size()) {
    throw InvalidInput("representation '" + std::string(id) + "' has " + std::to_string(rows) +
                       " rows but set '" + set.name() + "' has " + std::to_string(set.size()) +
                       " sequences");
  }
}

}  // namespace

EmbeddingMatrix RepresentationRegistry::embeddings(const SequenceSet& set,
                                                   std::string_view id) const {
  if (auto it = embedders_.find(id); it != embedders_.end()) {
    EmbeddingMatrix out(cache_->get_or_compute(std::string(id), it->second, set.sequences()),
                        std::string(id));
    check_alignment(out.rows(), set, id);
    out.validate();
    return out;
  }
  auto files = files_for(embedding_files_, id, set);
  if (files.empty()) {
    if (property_models_.count(id) || has(id)) {
      throw InvalidInput("representation '" + std::string(id) + "' has no embeddings for set '" +
                         set.name() + "'");
    }
    throw InvalidInput("unknown representation '" + std::string(id) + "'");
  }
  // Binary files take precedence over CSV files.
  std::stable_sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    const bool a_csv = a.extension() == ".csv";
    const bool b_csv = b.extension() == ".csv";
    return !a_csv && b_csv;
  });
  const auto key = files.front().string();
  EmbeddingMatrix out;
  {
    std::lock_guard lock(file_mutex_);
    auto it = loaded_embeddings_.find(key);
    if (it == loaded_embeddings_.end()) {
      it = loaded_embeddings_.emplace(key, io::load_embeddings(files.front())).first;
    }
    out = it->second;
  }
  check_alignment(out.rows(), set, id);
  return out;
}

PropertyTable RepresentationRegistry::properties(const SequenceSet& set, std::string_view id) const {
  if (auto it = property_models_.find(id); it != property_models_.end()) {
    const auto& pm = it->second;
    const Matrix rows = cache_->get_or_compute(std::string(id), pm.model, set.sequences());
    check_alignment(rows.rows(), set, id);
    Eigen::Index total = 0;
    for (const auto& c : pm.schema) total += c.width;
    if (rows.cols() != total && rows.rows() > 0) {
      throw InvalidInput("property model '" + std::string(id) + "' produced " +
                         std::to_string(rows.cols()) + " values per row, schema needs " +
                         std::to_string(total));
    }
    std::vector<PropertyColumn> cols;
    Eigen::Index at = 0;
    for (const auto& c : pm.schema) {
      PropertyColumn col{c.name, c.type, Matrix(rows.rows(), c.width), c.categories};
      if (rows.rows() > 0) col.values = rows.middleCols(at, c.width);
      at += c.width;
      cols.push_back(std::move(col));
    }
    return PropertyTable(set.size(), std::move(cols), std::string(id));
  }
  const auto files = files_for(property_files_, id, set);
  if (files.empty()) {
    if (has(id)) {
      throw InvalidInput("representation '" + std::string(id) + "' has no properties for set '" +
                         set.name() + "'");
    }
    throw InvalidInput("unknown representation '" + std::string(id) + "'");
  }
  const auto key = files.front().string();
  PropertyTable out;
  {
    std::lock_guard lock(file_mutex_);
    auto it = loaded_properties_.find(key);
    if (it == loaded_properties_.end()) {
      it = loaded_properties_.emplace(key, io::load_properties(files.front())).first;
    }
    out = it->second;
  }
  check_alignment(static_cast<Eigen::Index>(out.rows()), set, id);
  return out;
}

ShortSequenceError::ShortSequenceError(std::size_t index, std::size_t length, int k)
    : InvalidInput("sequence " + std::to_string(index) + " has length " + std::to_string(length) +
                   ", shorter than k = " + std::to_string(k)),
      index_(index) {}

KmerSpec KmerSpec::from_vocabulary(std::string_view text, int k) {
  KmerSpec spec;
  spec.k = k;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view w = text.substr(pos, end - pos);
    while (!w.empty() && std::isspace(static_cast<unsigned char>(w.back()))) w.remove_suffix(1);
    if (!w.empty()) spec.vocabulary.emplace_back(w);
    pos = end + 1;
  }
  return spec;
}

KmerSpec KmerSpec::all_over(std::string_view letters, int k) {
  if (k < 1) throw InvalidInput("k-mer length must be >= 1");
  if (letters.empty()) throw InvalidInput("k-mer alphabet is empty");
  std::set<char> seen;
  for (char c : letters) {
    if (!seen.insert(c).second) {
      throw InvalidInput("k-mer alphabet has duplicate letter '" + std::string(1, c) + "'");
    }
  }
  KmerSpec spec;
  spec.k = k;
  std::vector<std::size_t> digits(static_cast<std::size_t>(k), 0);
  while (true) {
    std::string s;
    for (auto d : digits) s.push_back(letters[d]);
    spec.vocabulary.push_back(std::move(s));
    int pos = k - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == letters.size()) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return spec;
}

void KmerSpec::validate() const {
  if (k < 1) throw InvalidInput("k-mer length must be >= 1");
  std::set<std::string_view> seen;
  for (const auto& v : vocabulary) {
    if (static_cast<int>(v.size()) != k) {
      throw InvalidInput("vocabulary entry '" + v + "' does not have length " + std::to_string(k));
    }
    if (!seen.insert(v).second) throw InvalidInput("duplicate vocabulary entry '" + v + "'");
  }
}

Matrix kmer_rows(std::span<const std::string> sequences, const KmerSpec& spec) {
  spec.validate();
  std::unordered_map<std::string_view, Eigen::Index> column;
  for (std::size_t j = 0; j < spec.vocabulary.size(); ++j) {
    column.emplace(spec.vocabulary[j], static_cast<Eigen::Index>(j));
  }
  const auto k = static_cast<std::size_t>(spec.k);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(sequences.size()),
                            static_cast<Eigen::Index>(spec.vocabulary.size()));
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    const std::string_view s = sequences[i];
    if (s.size() < k) throw ShortSequenceError(i, s.size(), spec.k);
    const std::size_t windows = s.size() - k + 1;
    for (std::size_t w = 0; w < windows; ++w) {
      if (auto it = column.find(s.substr(w, k)); it != column.end()) {
        out(static_cast<Eigen::Index>(i), it->second) += 1.0;
      }
    }
    if (spec.mode == KmerMode::frequency) {
      out.row(static_cast<Eigen::Index>(i)) /= static_cast<double>(windows);
    }
  }
  return out;
}

EmbeddingMatrix kmer_embed(const SequenceSet& sequences, const KmerSpec& spec) {
  return {kmer_rows(sequences.sequences(), spec), "kmer" + std::to_string(spec.k)};
}

PropertyModel length_model() {
  PropertyModel pm;
  pm.schema.push_back({"length", ColumnType::real, 1, {}});
  pm.model = [](std::span<const std::string> seqs) {
    Matrix m(static_cast<Eigen::Index>(seqs.size()), 1);
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      m(static_cast<Eigen::Index>(i), 0) = static_cast<double>(seqs[i].size());
    }
    return m;
  };
  return pm;
}

PropertyTable length_property(const SequenceSet& sequences) {
  const auto pm = length_model();
  PropertyColumn col{"length", ColumnType::real, pm.model(sequences.sequences()), {}};
  return PropertyTable(sequences.size(), {std::move(col)}, "length");
}

}  // namespace seqeval
