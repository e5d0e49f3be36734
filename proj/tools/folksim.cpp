// folksim: generate, inspect and evaluate folksonomy tag similarity.
//
//   folksim gen   --seed 42 --bookmarks 10000 -o synth.tsv
//   folksim stats -i synth.tsv
//   folksim sim   -i synth.tsv --psi 0.3 --query t12 -k 10
//   folksim eval  -i synth.tsv --psi 0 --psi 0.3 --repetitions 10 -o report
//
// Exit codes: 0 success, 2 configuration, 3 parse, 4 compute, 5 I/O.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "folksim/commands.hpp"

namespace {

using folksim::OutputFormat;

char parse_delimiter(const std::string& s) {
  if (s == "\\t" || s == "tab") return '\t';
  if (s.size() != 1) throw folksim::ConfigError("delimiter must be a single character or 'tab'");
  if (s == "\n" || s == "#") throw folksim::ConfigError("delimiter cannot be newline or '#'");
  return s[0];
}

struct CommonFlags {
  std::string delimiter = "tab";
  bool case_fold = false;
  bool skip_malformed = false;
  unsigned threads = 1;
  std::string format = "csv";

  folksim::TripleFormat triple_format() const {
    return {parse_delimiter(delimiter), case_fold, skip_malformed};
  }
  OutputFormat output_format() const {
    return format == "json" ? OutputFormat::json : OutputFormat::csv;
  }
  folksim::EngineOptions engine() const {
    auto e = folksim::EngineOptions::from_environment();
    e.threads = threads;
    return e;
  }
};

void add_input_flags(CLI::App* cmd, std::string& input, CommonFlags& f) {
  cmd->add_option("-i,--input", input, "Triple file (user, resource, tag per line)")->required();
  cmd->add_option("--delimiter", f.delimiter, "Field delimiter: one character or 'tab'");
  cmd->add_flag("--case-fold", f.case_fold, "Lowercase tag labels (ASCII)");
  cmd->add_flag("--skip-malformed", f.skip_malformed, "Skip and count malformed lines");
}

void add_compute_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--threads", f.threads, "Worker threads for the similarity kernel")
      ->check(CLI::Range(1u, 1024u));
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Folksonomy tag similarity by mutual reinforcement"};
  app.require_subcommand(1);
  app.set_version_flag("--version", folksim::kToolVersion);

  CommonFlags common;

  folksim::GenOptions gen;
  std::string gen_delimiter = "tab";
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic power-law folksonomy");
  gen_cmd->add_option("--seed", gen.generator.seed, "Random seed");
  gen_cmd->add_option("--users", gen.generator.n_users, "Number of users");
  gen_cmd->add_option("--resources", gen.generator.n_resources, "Number of resources");
  gen_cmd->add_option("--tags", gen.generator.n_tags, "Size of the tag vocabulary");
  gen_cmd->add_option("--bookmarks", gen.generator.n_bookmarks, "Number of bookmarks");
  gen_cmd->add_option("--min-tags", gen.generator.min_tags_per_bookmark, "Fewest tags per bookmark");
  gen_cmd->add_option("--max-tags", gen.generator.max_tags_per_bookmark, "Most tags per bookmark");
  gen_cmd->add_option("--exponent", gen.generator.zipf_exponent, "Zipf exponent of tag usage");
  gen_cmd->add_option("--topics", gen.generator.n_topics, "Latent topics (1 = tags independent of resources)");
  gen_cmd->add_option("--noise", gen.generator.noise, "Share of off-topic tag draws");
  gen_cmd->add_option("--delimiter", gen_delimiter, "Field delimiter: one character or 'tab'");
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");

  folksim::StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset counts and tag usage histogram (JSON)");
  add_input_flags(stats_cmd, stats.input, common);
  stats_cmd->add_option("-o,--output", stats.output, "Output file (default stdout)");

  folksim::SimOptions sim;
  auto* sim_cmd = app.add_subcommand("sim", "Compute tag similarity and rank tags for a query");
  add_input_flags(sim_cmd, sim.input, common);
  add_compute_flags(sim_cmd, common);
  sim_cmd->add_option("--psi", sim.params.psi, "Propagation factor in [0, 1]");
  sim_cmd->add_option("--tolerance", sim.params.tolerance, "Convergence tolerance");
  sim_cmd->add_option("--max-iter", sim.params.max_iterations, "Iteration cap");
  sim_cmd->add_option("-q,--query", sim.query, "Query tag label (repeatable)");
  sim_cmd->add_option("-k", sim.k, "Number of tags to return");
  sim_cmd->add_option("-o,--output", sim.output, "Ranking output file (default stdout)");
  sim_cmd->add_option("--matrix-csv", sim.matrix_csv, "Export the tag-tag matrix as CSV");
  sim_cmd->add_option("--snapshot", sim.snapshot, "Export the tag-tag matrix as a binary snapshot");

  folksim::EvalOptions eval;
  std::vector<double> eval_psis;
  auto* eval_cmd = app.add_subcommand("eval", "Precision/recall of tag retrieval over psi values");
  add_input_flags(eval_cmd, eval.input, common);
  add_compute_flags(eval_cmd, common);
  eval_cmd->add_option("--psi", eval_psis, "Propagation factor (repeatable; default 0 0.15 0.3 0.6)");
  eval_cmd->add_option("--tolerance", eval.tolerance, "Convergence tolerance");
  eval_cmd->add_option("--max-iter", eval.max_iterations, "Iteration cap");
  eval_cmd->add_option("--seed", eval.split.seed, "Split seed");
  eval_cmd->add_option("--repetitions", eval.split.repetitions, "Number of random splits");
  eval_cmd->add_option("--train-fraction", eval.split.train_fraction, "Share of bookmarks in train");
  eval_cmd->add_option("--min-tags", eval.split.min_bookmark_tags, "Fewest tags for a query bookmark");
  eval_cmd->add_option("--name", eval.dataset_name, "Dataset name for the report");
  eval_cmd->add_option("-o,--output", eval.output_prefix,
                       "Write <prefix>.csv and <prefix>.json (default: stdout in --format)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(folksim::ErrorKind::config);
  }

  try {
    if (*gen_cmd) {
      gen.delimiter = parse_delimiter(gen_delimiter);
      folksim::run_gen(gen, std::cout);
    } else if (*stats_cmd) {
      stats.format = common.triple_format();
      folksim::run_stats(stats, std::cout);
    } else if (*sim_cmd) {
      sim.format = common.triple_format();
      sim.engine = common.engine();
      sim.output_format = common.output_format();
      folksim::run_sim(sim, std::cout, std::cerr);
    } else if (*eval_cmd) {
      eval.format = common.triple_format();
      eval.engine = common.engine();
      eval.output_format = common.output_format();
      if (!eval_psis.empty()) eval.psis = eval_psis;
      folksim::run_eval(eval, std::cout);
    }
  } catch (const folksim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cout.flush();
  return 0;
}
