#include "seqeval/app.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace seqeval::app;
  CLI::App cli{"Evaluate generated biological sequences against reference sets."};
  cli.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate = cli.add_subcommand("evaluate", "Compute the configured metrics for every group");
  evaluate->add_option("--config", ev.config, "Run configuration (JSON)")->required();
  evaluate->add_option("--out-dir", ev.out_dir, "Directory for relative output paths (default: config directory)");
  evaluate->add_option("--seed", ev.seed, "Override the configuration seed");
  evaluate->add_option("--jobs", ev.jobs, "Parallel metric cells (0: all cores)");
  evaluate->add_flag("--allow-errors", ev.allow_errors, "Report metric errors as warnings and exit 0");

  DiagnoseArgs dg;
  auto* diagnose = cli.add_subcommand("diagnose", "Embedding-model diagnostics");
  diagnose->add_option("--embeddings", dg.embeddings, "Embedding file (binary or CSV)")->required();
  diagnose->add_option("--properties", dg.properties, "Property table (CSV) aligned with the embeddings");
  diagnose->add_option("--labels", dg.labels, "Categorical or binary column used as labels");
  diagnose->add_option("--property", dg.property, "Real or vector column for --spearman");
  diagnose->add_option("--k", dg.k, "k-NN feature alignment with this many neighbors")->check(CLI::PositiveNumber);
  diagnose->add_flag("--spearman", dg.spearman, "Spearman alignment of pairwise distances");
  diagnose->add_option("--pca", dg.pca, "Write a PCA scatter plot (SVG)");
  diagnose->add_option("--seed", dg.seed, "Seed for pair subsampling");

  EmbedArgs em;
  auto* embed = cli.add_subcommand("embed", "k-mer frequency embeddings of a sequence file");
  embed->add_option("--sequences", em.sequences, "FASTA or one-per-line sequence file")->required();
  embed->add_option("--kmer", em.k, "k-mer length")->required()->check(CLI::PositiveNumber);
  auto* alpha = embed->add_option("--alphabet", em.alphabet, "Letters, or amino_acid / nucleotide");
  auto* vocab = embed->add_option("--vocab", em.vocab, "File with one k-mer per line");
  alpha->excludes(vocab);
  embed->add_option("--out", em.out, "Output file (.csv for text, anything else binary)")->required();

  IterateArgs it;
  auto* iterate = cli.add_subcommand("iterate", "Evaluate every round of an iteration manifest");
  iterate->add_option("--config", it.config, "Run configuration with 'iterations'")->required();
  iterate->add_option("--out", it.out_dir, "Directory for trajectory.{md,csv,json,svg}");
  iterate->add_option("--seed", it.seed, "Override the configuration seed");
  iterate->add_option("--jobs", it.jobs, "Parallel metric cells (0: all cores)");
  iterate->add_flag("--allow-errors", it.allow_errors, "Report metric errors as warnings and exit 0");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (*evaluate) return run_evaluate(ev, std::cout, std::cerr);
  if (*diagnose) return run_diagnose(dg, std::cout, std::cerr);
  if (*embed) return run_embed(em, std::cout, std::cerr);
  return run_iterate(it, std::cout, std::cerr);
}
