#include "seqeval/app.hpp"

#include "seqeval/chart.hpp"
#include "seqeval/config.hpp"
#include "seqeval/diagnostics.hpp"
#include "seqeval/errors.hpp"
#include "seqeval/io.hpp"
#include "seqeval/report.hpp"

#include <cctype>
#include <cstdlib>
#include <ostream>

namespace seqeval::app {

namespace fs = std::filesystem;

namespace {

std::shared_ptr<Cache> make_cache() {
  auto cache = std::make_shared<Cache>();
  if (const char* dir = std::getenv("SEQEVAL_CACHE_DIR"); dir && *dir) cache->set_disk_dir(dir);
  return cache;
}

fs::path output_path(const RunConfig& config, const std::optional<fs::path>& out_dir, const fs::path& p) {
  if (p.is_absolute()) return p;
  return (out_dir ? *out_dir : config.base_dir) / p;
}

/// Reports cell warnings and errors; returns the exit code for the run.
int finish(const std::vector<std::pair<std::string, const ReportTable*>>& reports, bool allow_errors,
           std::ostream& err) {
  bool errors = false;
  for (const auto& [label, rep] : reports) {
    for (std::size_t g = 0; g < rep->groups.size(); ++g) {
      for (std::size_t m = 0; m < rep->metrics.size(); ++m) {
        const auto& c = rep->at(g, m);
        const std::string where = label + rep->groups[g] + " / " + rep->metrics[m].name;
        for (const auto& w : c.warnings) err << "warning: " << where << ": " << w << "\n";
        if (!c.ok()) {
          errors = true;
          err << (allow_errors ? "warning: " : "error: ") << where << ": " << c.message << "\n";
        }
      }
    }
  }
  return errors && !allow_errors ? kExitMetricError : kExitOk;
}

}  // namespace

int run_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  PreparedRun run;
  auto cache = make_cache();
  RepresentationRegistry registry(cache);
  try {
    config = load_config(args.config);
    if (args.seed) config.seed = *args.seed;
    if (!config.iterations.empty() && config.groups.empty()) {
      throw ConfigError("config key 'groups': required for evaluate (this config only has iterations; use iterate)");
    }
    register_representations(registry, config);
    run = prepare_run(config);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const ReportTable report = evaluate(run.groups, run.metrics, registry, {args.jobs});
  try {
    for (const auto& o : config.outputs) {
      const fs::path path = output_path(config, args.out_dir, o.path);
      if (o.kind == OutputDecl::Kind::chart) {
        if (o.chart.kind == ChartKind::trajectory) {
          throw ConfigError("config key 'outputs': trajectory charts need the iterate command");
        }
        io::write_file(path, render_chart(report, o.chart));
      } else {
        io::write_file(path, render_table(report, o.format));
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  out << render_table(report, TableFormat::markdown);
  return finish({{"", &report}}, args.allow_errors, err);
}

int run_iterate(const IterateArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::vector<PreparedRun> runs;
  std::vector<std::unique_ptr<RepresentationRegistry>> registries;
  auto cache = make_cache();
  try {
    config = load_config(args.config);
    if (args.seed) config.seed = *args.seed;
    if (config.iterations.empty()) throw ConfigError("config key 'iterations': required for iterate");
    for (const auto& it : config.iterations) {
      auto reg = std::make_unique<RepresentationRegistry>(cache);
      register_representations(*reg, config, it.files);
      runs.push_back(prepare_run(config, &it.groups, it.files));
      registries.push_back(std::move(reg));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  TrajectoryTable table;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    table.iterations.push_back(config.iterations[i].index);
    table.reports.push_back(evaluate(runs[i].groups, runs[i].metrics, *registries[i], {args.jobs}));
  }

  try {
    if (args.out_dir) {
      fs::create_directories(*args.out_dir);
      io::write_file(*args.out_dir / "trajectory.md", render_trajectory(table, TableFormat::markdown));
      io::write_file(*args.out_dir / "trajectory.csv", render_trajectory(table, TableFormat::csv));
      io::write_file(*args.out_dir / "trajectory.json", render_trajectory(table, TableFormat::json));
      ChartSpec spec;
      spec.kind = ChartKind::trajectory;
      io::write_file(*args.out_dir / "trajectory.svg", render_chart(table, spec));
    }
    for (const auto& o : config.outputs) {
      const fs::path path = output_path(config, args.out_dir, o.path);
      if (o.kind == OutputDecl::Kind::chart) {
        ChartSpec spec = o.chart;
        spec.kind = ChartKind::trajectory;
        io::write_file(path, render_chart(table, spec));
      } else {
        io::write_file(path, render_trajectory(table, o.format));
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  out << render_trajectory(table, TableFormat::markdown);
  std::vector<std::pair<std::string, const ReportTable*>> reps;
  for (std::size_t i = 0; i < table.reports.size(); ++i) {
    reps.emplace_back("iteration " + std::to_string(table.iterations[i]) + ": ", &table.reports[i]);
  }
  return finish(reps, args.allow_errors, err);
}

int run_diagnose(const DiagnoseArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (!args.k && !args.spearman && !args.pca) {
      throw ConfigError("nothing to do: give --k, --spearman or --pca");
    }
    const auto emb = io::load_embeddings(args.embeddings);
    std::optional<PropertyTable> props;
    if (args.properties) props = io::load_properties(*args.properties);
    if ((args.labels || args.property) && !props) throw ConfigError("--labels and --property need --properties");
    if (props && props->rows() != static_cast<std::size_t>(emb.rows())) {
      throw ConfigError("properties have " + std::to_string(props->rows()) + " rows but embeddings have " +
                        std::to_string(emb.rows()));
    }
    std::vector<std::string> labels;
    if (args.labels) labels = props->labels(*args.labels);

    if (args.k) {
      std::vector<std::string> l = labels;
      if (!args.labels) throw ConfigError("--k needs --labels");
      out << "feature_alignment k=" << *args.k << ": "
          << format_value(knn_feature_alignment(emb.data, l, *args.k), 4) << "\n";
    }
    if (args.spearman) {
      if (!args.property) throw ConfigError("--spearman needs --property");
      const auto& col = props->column(*args.property);
      if (col.type == ColumnType::categorical) throw ConfigError("--property must be a real or vector column");
      SpearmanAlignmentParams p;
      p.seed = args.seed;
      const std::vector<std::string> cols{*args.property};
      out << "spearman_alignment: " << format_value(spearman_alignment(emb.data, props->stacked(cols), p), 4)
          << "\n";
    }
    if (args.pca) {
      const auto proj = pca_project(emb.data, std::max<std::size_t>(args.pca_dim, 2));
      for (const auto& w : proj.warnings) err << "warning: " << w << "\n";
      std::string title = "PCA (";
      for (Eigen::Index c = 0; c < proj.explained_variance.size(); ++c) {
        title += (c ? ", " : "") + format_value(100.0 * proj.explained_variance(c), 1) + "%";
      }
      title += " variance)";
      io::write_file(*args.pca, render_scatter(proj.coordinates, labels, title));
      out << "pca: wrote " << args.pca->string() << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}

int run_embed(const EmbedArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.alphabet.has_value() == args.vocab.has_value()) {
      throw ConfigError("give exactly one of --alphabet or --vocab");
    }
    if (!fs::exists(args.sequences)) {
      throw ConfigError("sequence file '" + args.sequences.string() + "' does not exist");
    }
    const auto seqs = io::load_sequences(args.sequences);
    KmerSpec spec;
    if (args.alphabet) {
      const std::string& a = *args.alphabet;
      std::string letters = a;
      if (a == "amino_acid" || a == "protein") letters = std::string(alphabet_letters(Alphabet::amino_acid));
      if (a == "nucleotide" || a == "dna") letters = std::string(alphabet_letters(Alphabet::nucleotide));
      spec = KmerSpec::all_over(letters, args.k);
    } else {
      spec = KmerSpec::from_vocabulary(io::read_file(*args.vocab), args.k);
    }
    spec.validate();
    EmbeddingMatrix emb;
    try {
      emb = kmer_embed(seqs, spec);
    } catch (const ShortSequenceError& e) {
      throw InvalidInput(args.sequences.string() + ":" + std::to_string(seqs.source_line(e.index())) +
                         ": sequence of length " + std::to_string(seqs[e.index()].size()) +
                         " is shorter than k = " + std::to_string(args.k));
    }
    const auto format = args.out.extension() == ".csv" ? io::EmbeddingFormat::csv : io::EmbeddingFormat::binary;
    io::save_embeddings(args.out, emb.data, format);
    out << "wrote " << emb.rows() << " x " << emb.dim() << " embeddings to " << args.out.string() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}

}  // namespace seqeval::app
