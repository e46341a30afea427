#include "seqeval/config.hpp"

#include "seqeval/errors.hpp"
#include "seqeval/io.hpp"

#include <algorithm>
#include <set>

namespace seqeval {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw ConfigError("config key '" + key + "': " + message);
}

void check_keys(const ordered_json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; })) {
      fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
    }
  }
}

template <class T>
T get(const ordered_json& j, const char* key, const std::string& where) {
  const std::string full = where.empty() ? key : where + "." + key;
  if (!j.contains(key)) fail(full, "required key is missing");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(full, "has the wrong type (" + j.at(key).dump() + ")");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

Alphabet parse_alphabet(const std::string& s, const std::string& key) {
  if (s == "free") return Alphabet::free;
  if (s == "amino_acid" || s == "protein") return Alphabet::amino_acid;
  if (s == "nucleotide" || s == "dna") return Alphabet::nucleotide;
  if (s == "smiles") return Alphabet::smiles;
  fail(key, "unknown alphabet '" + s + "' (expected free, amino_acid, nucleotide or smiles)");
}

GroupDecl parse_group(const std::string& name, const ordered_json& v, const fs::path& base, const std::string& key) {
  GroupDecl g;
  g.name = name;
  g.key = key;
  if (name.empty()) fail(key, "group name must not be empty");
  if (v.is_string()) {
    g.path = resolve(base, v.get<std::string>());
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) fail(key + "[" + std::to_string(i) + "]", "sequence must be a string");
      g.sequences.push_back(v[i].get<std::string>());
    }
    if (g.sequences.empty()) fail(key, "inline group is empty");
  } else {
    fail(key, "expected a file path or a list of sequences");
  }
  return g;
}

std::vector<GroupDecl> parse_groups(const ordered_json& v, const fs::path& base, const std::string& key) {
  std::vector<GroupDecl> out;
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      out.push_back(parse_group(it.key(), it.value(), base, key + "." + it.key()));
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string k = key + "[" + std::to_string(i) + "]";
      if (!v[i].is_object()) fail(k, "expected {\"name\": ..., \"path\"|\"sequences\": ...}");
      check_keys(v[i], k, {"name", "path", "sequences"});
      const auto name = get<std::string>(v[i], "name", k);
      if (v[i].contains("path") == v[i].contains("sequences")) fail(k, "give exactly one of 'path' or 'sequences'");
      out.push_back(parse_group(name, v[i].contains("path") ? v[i]["path"] : v[i]["sequences"], base, k));
    }
  } else {
    fail(key, "expected an object of name -> path or an array of groups");
  }
  if (out.empty()) fail(key, "at least one group is required");
  std::set<std::string> seen;
  for (const auto& g : out) {
    if (!seen.insert(g.name).second) fail(g.key, "duplicate group name '" + g.name + "'");
  }
  return out;
}

FileMap parse_files(const ordered_json& v, const fs::path& base, const std::string& key) {
  if (!v.is_object()) fail(key, "expected an object of set name -> file path");
  FileMap m;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (!it.value().is_string()) fail(key + "." + it.key(), "expected a file path");
    m[it.key()] = resolve(base, it.value().get<std::string>());
  }
  return m;
}

RepresentationDecl parse_representation(const std::string& id, const ordered_json& v, const fs::path& base,
                                        const std::string& key) {
  if (!v.is_object()) fail(key, "expected an object with a 'kind'");
  RepresentationDecl r;
  r.id = id;
  const auto kind = get<std::string>(v, "kind", key);
  if (kind == "file") {
    check_keys(v, key, {"kind", "type", "files"});
    r.kind = RepresentationKind::file;
    const auto type = v.contains("type") ? get<std::string>(v, "type", key) : std::string("embedding");
    if (type == "embedding") {
      r.role = FileRole::embedding;
    } else if (type == "property") {
      r.role = FileRole::property;
    } else {
      fail(key + ".type", "expected embedding or property");
    }
    if (v.contains("files")) r.files = parse_files(v["files"], base, key + ".files");
  } else if (kind == "kmer") {
    check_keys(v, key, {"kind", "k", "alphabet", "vocab", "mode"});
    r.kind = RepresentationKind::kmer;
    const auto k = get<long long>(v, "k", key);
    if (k < 1) fail(key + ".k", "must be >= 1");
    if (v.contains("vocab") == v.contains("alphabet")) fail(key, "give exactly one of 'alphabet' or 'vocab'");
    if (v.contains("alphabet")) {
      const auto a = get<std::string>(v, "alphabet", key);
      std::string letters;
      if (a == "amino_acid" || a == "protein" || a == "nucleotide" || a == "dna") {
        letters = std::string(alphabet_letters(parse_alphabet(a, key + ".alphabet")));
      } else {
        letters = a;  // literal letters
      }
      try {
        r.kmer = KmerSpec::all_over(letters, static_cast<int>(k));
      } catch (const Error& e) {
        fail(key + ".alphabet", e.what());
      }
    } else {
      const fs::path path = resolve(base, get<std::string>(v, "vocab", key));
      std::string text;
      try {
        text = io::read_file(path);
      } catch (const Error& e) {
        fail(key + ".vocab", e.what());
      }
      r.kmer = KmerSpec::from_vocabulary(text, static_cast<int>(k));
    }
    const auto mode = v.contains("mode") ? get<std::string>(v, "mode", key) : std::string("frequency");
    if (mode == "frequency") {
      r.kmer.mode = KmerMode::frequency;
    } else if (mode == "counts") {
      r.kmer.mode = KmerMode::counts;
    } else {
      fail(key + ".mode", "expected frequency or counts");
    }
    try {
      r.kmer.validate();
    } catch (const Error& e) {
      fail(key, e.what());
    }
  } else if (kind == "length") {
    check_keys(v, key, {"kind"});
    r.kind = RepresentationKind::length;
    r.role = FileRole::property;
  } else {
    fail(key + ".kind", "unknown representation kind '" + kind + "' (expected file, kmer or length)");
  }
  return r;
}

OutputDecl parse_output(const ordered_json& v, const fs::path& key_base, const std::string& key) {
  (void)key_base;
  if (!v.is_object()) fail(key, "expected {\"format\": ..., \"path\": ...}");
  check_keys(v, key, {"format", "path", "chart", "metrics", "error_bars", "width", "height"});
  OutputDecl o;
  const auto format = get<std::string>(v, "format", key);
  o.path = get<std::string>(v, "path", key);
  if (format == "svg") {
    o.kind = OutputDecl::Kind::chart;
    try {
      o.chart.kind = parse_chart_kind(v.contains("chart") ? get<std::string>(v, "chart", key) : "bar");
    } catch (const ConfigError& e) {
      fail(key + ".chart", e.what());
    }
    if (v.contains("metrics")) o.chart.metrics = get<std::vector<std::string>>(v, "metrics", key);
    if (v.contains("error_bars")) {
      const auto eb = get<std::string>(v, "error_bars", key);
      if (eb == "deviation") {
        o.chart.error_bars = ErrorBars::deviation;
      } else if (eb == "none") {
        o.chart.error_bars = ErrorBars::none;
      } else {
        fail(key + ".error_bars", "expected deviation or none");
      }
    }
    if (v.contains("width")) o.chart.width = get<int>(v, "width", key);
    if (v.contains("height")) o.chart.height = get<int>(v, "height", key);
    if (o.chart.width < 100 || o.chart.height < 100) fail(key, "chart dimensions must be at least 100 px");
  } else {
    for (const char* k : {"chart", "metrics", "error_bars", "width", "height"}) {
      if (v.contains(k)) fail(key + "." + k, "only valid for svg outputs");
    }
    try {
      o.format = parse_table_format(format);
    } catch (const ConfigError&) {
      fail(key + ".format", "unknown format '" + format + "' (expected markdown, csv, json or svg)");
    }
  }
  return o;
}

}  // namespace

RunConfig parse_config(const ordered_json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(doc, "", {"config_version", "seed", "alphabet", "groups", "reference", "representations", "metrics",
                       "outputs", "iterations"});
  RunConfig c;
  c.base_dir = base_dir;
  const auto version = get<long long>(doc, "config_version", "");
  if (version != kConfigVersion) fail("config_version", "unsupported version " + std::to_string(version) + " (expected 1)");
  if (doc.contains("seed")) c.seed = get<std::uint64_t>(doc, "seed", "");
  if (doc.contains("alphabet")) c.alphabet = parse_alphabet(get<std::string>(doc, "alphabet", ""), "alphabet");

  if (doc.contains("iterations")) {
    const auto& its = doc["iterations"];
    if (!its.is_array() || its.empty()) fail("iterations", "expected a non-empty array");
    for (std::size_t i = 0; i < its.size(); ++i) {
      const std::string k = "iterations[" + std::to_string(i) + "]";
      if (!its[i].is_object()) fail(k, "expected an object");
      check_keys(its[i], k, {"index", "groups", "files"});
      IterationDecl it;
      it.index = get<std::int64_t>(its[i], "index", k);
      if (!c.iterations.empty() && it.index <= c.iterations.back().index) {
        fail(k + ".index", "iteration index " + std::to_string(it.index) + " does not follow " +
                               std::to_string(c.iterations.back().index) + " (indices must be strictly increasing)");
      }
      if (!its[i].contains("groups")) fail(k + ".groups", "required key is missing");
      it.groups = parse_groups(its[i]["groups"], base_dir, k + ".groups");
      if (its[i].contains("files")) {
        const auto& f = its[i]["files"];
        if (!f.is_object()) fail(k + ".files", "expected an object of representation id -> files");
        for (auto fit = f.begin(); fit != f.end(); ++fit) {
          it.files[fit.key()] = parse_files(fit.value(), base_dir, k + ".files." + fit.key());
        }
      }
      c.iterations.push_back(std::move(it));
    }
  }
  if (doc.contains("groups")) {
    c.groups = parse_groups(doc["groups"], base_dir, "groups");
  } else if (c.iterations.empty()) {
    fail("groups", "required key is missing");
  }

  if (doc.contains("reference")) {
    const auto& r = doc["reference"];
    if (r.is_string()) {
      c.reference_group = r.get<std::string>();
    } else if (r.is_object()) {
      check_keys(r, "reference", {"name", "path", "sequences"});
      const std::string name = r.contains("name") ? get<std::string>(r, "name", "reference") : "reference";
      if (r.contains("path") == r.contains("sequences")) fail("reference", "give exactly one of 'path' or 'sequences'");
      c.reference_set = parse_group(name, r.contains("path") ? r["path"] : r["sequences"], base_dir, "reference");
    } else {
      fail("reference", "expected a group name or {\"path\": ...}");
    }
  }

  if (doc.contains("representations")) {
    const auto& reps = doc["representations"];
    if (!reps.is_object()) fail("representations", "expected an object of id -> representation");
    for (auto it = reps.begin(); it != reps.end(); ++it) {
      c.representations.push_back(parse_representation(it.key(), it.value(), base_dir, "representations." + it.key()));
    }
  }
  for (const auto& it : c.iterations) {
    for (const auto& [id, files] : it.files) {
      const auto rep = std::find_if(c.representations.begin(), c.representations.end(),
                                    [&](const RepresentationDecl& r) { return r.id == id; });
      if (rep == c.representations.end() || rep->kind != RepresentationKind::file) {
        fail("iterations.files." + id, "is not a declared file representation");
      }
    }
  }

  if (!doc.contains("metrics")) fail("metrics", "required key is missing");
  c.metrics = doc["metrics"];
  if (!c.metrics.is_array() || c.metrics.empty()) fail("metrics", "expected a non-empty array");

  if (doc.contains("outputs")) {
    const auto& outs = doc["outputs"];
    if (!outs.is_array()) fail("outputs", "expected an array");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      c.outputs.push_back(parse_output(outs[i], base_dir, "outputs[" + std::to_string(i) + "]"));
    }
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file '" + path.string() + "' does not exist");
  ordered_json doc;
  try {
    doc = ordered_json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

SequenceSet load_group(const GroupDecl& decl, Alphabet alphabet) {
  if (decl.path) {
    if (!fs::exists(*decl.path)) {
      fail(decl.key, "sequence file '" + decl.path->string() + "' does not exist");
    }
    const auto loaded = io::load_sequences(*decl.path, decl.name);
    SequenceSet s(decl.name, loaded.sequences(), alphabet);
    std::vector<std::size_t> lines;
    for (std::size_t i = 0; i < loaded.size(); ++i) lines.push_back(loaded.source_line(i));
    s.set_source_lines(std::move(lines));
    return s;
  }
  try {
    return SequenceSet(decl.name, decl.sequences, alphabet);
  } catch (const Error& e) {
    fail(decl.key, e.what());
  }
}

void register_representations(RepresentationRegistry& registry, const RunConfig& config,
                              const std::map<std::string, FileMap>& overrides) {
  for (const auto& r : config.representations) {
    switch (r.kind) {
      case RepresentationKind::kmer: {
        const KmerSpec spec = r.kmer;
        registry.add_embedder(r.id, [spec](std::span<const std::string> seqs) { return kmer_rows(seqs, spec); });
        break;
      }
      case RepresentationKind::length:
        registry.add_property_model(r.id, length_model());
        break;
      case RepresentationKind::file: {
        const auto ov = overrides.find(r.id);
        const FileMap& files = ov != overrides.end() ? ov->second : r.files;
        for (const auto& [set, path] : files) {
          if (r.role == FileRole::embedding) {
            registry.add_embedding_file(r.id, set, path);
          } else {
            registry.add_property_file(r.id, set, path);
          }
        }
        break;
      }
    }
  }
}

PreparedRun prepare_run(const RunConfig& config, const std::vector<GroupDecl>* groups,
                        const std::map<std::string, FileMap>& overrides) {
  PreparedRun run;
  const auto& decls = groups ? *groups : config.groups;
  if (decls.empty()) fail("groups", "at least one group is required");
  for (const auto& g : decls) run.groups.push_back(load_group(g, config.alphabet));

  auto find_group = [&](const std::string& name) -> ReferenceSet {
    for (const auto& g : run.groups) {
      if (g.name() == name) return std::make_shared<const SequenceSet>(g);
    }
    return nullptr;
  };
  if (config.reference_group) {
    run.reference = find_group(*config.reference_group);
    if (!run.reference) fail("reference", "no group named '" + *config.reference_group + "'");
  } else if (config.reference_set) {
    run.reference = std::make_shared<const SequenceSet>(load_group(*config.reference_set, config.alphabet));
  }

  CatalogContext ctx;
  ctx.reference = run.reference;
  ctx.seed = config.seed;
  for (const auto& r : config.representations) ctx.representations.push_back(r.id);
  ctx.find_reference = [&, ref = run.reference](const std::string& name) -> ReferenceSet {
    if (ref && ref->name() == name) return ref;
    return find_group(name);
  };
  std::set<std::string> names;
  for (std::size_t i = 0; i < config.metrics.size(); ++i) {
    const std::string key = "metrics[" + std::to_string(i) + "]";
    auto m = build_metric(config.metrics[i], ctx, key);
    if (!names.insert(m.name).second) {
      fail(key, "duplicate metric name '" + m.name + "' (set \"name\" to disambiguate)");
    }
    run.metrics.push_back(std::move(m));
  }

  // Every file representation a metric needs must cover every set it will see.
  std::set<std::string> needed;
  for (const auto& m : run.metrics) needed.insert(m.required_representations.begin(), m.required_representations.end());
  for (const auto& r : config.representations) {
    if (r.kind != RepresentationKind::file || !needed.count(r.id)) continue;
    const auto ov = overrides.find(r.id);
    const FileMap& files = ov != overrides.end() ? ov->second : r.files;
    std::vector<std::string> sets;
    for (const auto& g : run.groups) sets.push_back(g.name());
    if (run.reference) sets.push_back(run.reference->name());
    for (const auto& s : sets) {
      const auto f = files.find(s);
      if (f == files.end()) fail("representations." + r.id + ".files." + s, "no file given for set '" + s + "'");
      if (!fs::exists(f->second)) {
        fail("representations." + r.id + ".files." + s, "file '" + f->second.string() + "' does not exist");
      }
    }
  }
  return run;
}

}  // namespace seqeval
