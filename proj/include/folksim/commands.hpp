#pragma once

// Implementations behind the `folksim` subcommands. Each command writes its
// primary output either to the given stream or to `output`, in which case a
// run manifest is written next to it as <output>.manifest.json.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "folksim/dataset.hpp"
#include "folksim/error.hpp"
#include "folksim/eval.hpp"
#include "folksim/ingest.hpp"
#include "folksim/matrix_io.hpp"
#include "folksim/report.hpp"
#include "folksim/similarity.hpp"
#include "folksim/sparse.hpp"

namespace folksim {

inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { csv, json };

/// Wall-clock phase timer for manifests.
class PhaseTimer {
 public:
  void mark(const std::string& phase) {
    const auto now = std::chrono::steady_clock::now();
    phases_[phase] = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }
  nlohmann::ordered_json to_json() const { return phases_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  nlohmann::ordered_json phases_ = nlohmann::ordered_json::object();
};

namespace detail {

inline std::ofstream open_output(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw IoError("cannot open " + path + " for writing");
  return f;
}

inline void write_manifest(const std::string& output, const std::string& command,
                           nlohmann::ordered_json inputs, nlohmann::ordered_json parameters,
                           const PhaseTimer& timer) {
  nlohmann::ordered_json m = {{"command", command},
                              {"tool_version", kToolVersion},
                              {"inputs", std::move(inputs)},
                              {"parameters", std::move(parameters)},
                              {"timings_ms", timer.to_json()}};
  auto f = open_output(output + ".manifest.json");
  f << m.dump(2) << '\n';
}

inline nlohmann::ordered_json format_json(const TripleFormat& f) {
  return {{"delimiter", std::string(1, f.delimiter)},
          {"case_fold", f.case_fold_tags},
          {"skip_malformed", f.skip_malformed}};
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

/// Up to `limit` labels closest to `wanted` by edit distance (ties by label).
inline std::vector<std::string> near_miss_labels(const Interner& table, std::string_view wanted,
                                                 std::size_t limit = 5) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& l : table.labels()) scored.emplace_back(detail::edit_distance(wanted, l), l);
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(scored[i].second);
  return out;
}

struct GenOptions {
  GeneratorConfig generator;
  char delimiter = '\t';
  std::string output;
};

inline void run_gen(const GenOptions& o, std::ostream& out) {
  PhaseTimer timer;
  const auto d = generate(o.generator);
  timer.mark("generate");
  if (o.output.empty()) {
    write_triples(out, d, o.delimiter);
    return;
  }
  {
    auto f = detail::open_output(o.output);
    write_triples(f, d, o.delimiter);
  }
  timer.mark("write");
  const auto& g = o.generator;
  detail::write_manifest(o.output, "gen", nlohmann::ordered_json::array(),
                         {{"users", g.n_users},
                          {"resources", g.n_resources},
                          {"tags", g.n_tags},
                          {"bookmarks", g.n_bookmarks},
                          {"min_tags", g.min_tags_per_bookmark},
                          {"max_tags", g.max_tags_per_bookmark},
                          {"exponent", g.zipf_exponent},
                          {"topics", g.n_topics},
                          {"noise", g.noise},
                          {"seed", g.seed},
                          {"delimiter", std::string(1, o.delimiter)}},
                         timer);
}

struct StatsOptions {
  std::string input;
  TripleFormat format;
  std::string output;
};

inline void run_stats(const StatsOptions& o, std::ostream& out) {
  PhaseTimer timer;
  ParseResult info;
  const auto d = read_dataset(o.input, o.format, &info);
  timer.mark("load");
  auto j = to_json(dataset_stats(d));
  j["skipped_lines"] = info.skipped;
  const auto text = j.dump(2) + "\n";
  if (o.output.empty()) {
    out << text;
    return;
  }
  detail::open_output(o.output) << text;
  timer.mark("write");
  detail::write_manifest(o.output, "stats", nlohmann::ordered_json::array({o.input}), {{"format", detail::format_json(o.format)}},
                         timer);
}

struct SimOptions {
  std::string input;
  TripleFormat format;
  IterationParams params;
  EngineOptions engine;
  std::vector<std::string> query;
  std::size_t k = 10;
  OutputFormat output_format = OutputFormat::csv;
  std::string output;
  /// Full tag-tag matrix export paths (optional).
  std::string matrix_csv;
  std::string snapshot;
};

/// Writes the top-k ranking for the query (if any) and the convergence trace.
/// In csv mode the trace goes to `log`; in json mode it is part of the output.
inline void run_sim(const SimOptions& o, std::ostream& out, std::ostream& log) {
  PhaseTimer timer;
  const auto d = read_dataset(o.input, o.format);
  timer.mark("load");

  std::vector<TagId> query;
  for (const auto& label : o.query) {
    const auto wanted = o.format.case_fold_tags ? detail::ascii_lower(label) : label;
    const auto id = d.tags().find(wanted);
    if (!id) {
      std::string msg = "unknown tag '" + label + "'";
      const auto near = near_miss_labels(d.tags(), wanted);
      if (!near.empty()) {
        msg += "; closest labels:";
        for (const auto& n : near) msg += " " + n;
      }
      throw ConfigError(msg);
    }
    query.push_back(TagId{*id});
  }
  if (query.empty() && o.matrix_csv.empty() && o.snapshot.empty() && o.output.empty() &&
      o.output_format == OutputFormat::csv) {
    log << "note: no --query and no matrix export requested; printing the trace only\n";
  }

  const auto tr = tr_matrix(d);
  const auto sim = iterate_similarity(tr, o.params, o.engine);
  timer.mark("iterate");

  std::vector<ScoredTag> ranked;
  if (!query.empty()) ranked = top_k_similar(sim.st, query, o.k, query);

  const auto& trace = sim.trace;
  std::ostringstream primary;
  if (o.output_format == OutputFormat::json) {
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const auto& s : ranked)
      results.push_back({{"tag", d.tags().label(s.tag.value)}, {"score", s.score}});
    nlohmann::ordered_json dead = nlohmann::ordered_json::array();
    for (auto id : sim.st.dead_ids()) dead.push_back(d.tags().label(id));
    nlohmann::ordered_json j = {{"psi", o.params.psi},
                                {"query", o.query},
                                {"k", o.k},
                                {"results", std::move(results)},
                                {"trace",
                                 {{"iterations_run", trace.iterations_run},
                                  {"converged", trace.converged},
                                  {"st_deltas", trace.st_deltas},
                                  {"sr_deltas", trace.sr_deltas}}},
                                {"tags_without_evidence", std::move(dead)}};
    primary << j.dump(2) << '\n';
  } else {
    if (!query.empty()) {
      primary << "rank,tag,score\n";
      for (std::size_t i = 0; i < ranked.size(); ++i)
        primary << (i + 1) << ',' << csv_field(d.tags().label(ranked[i].tag.value)) << ','
                << format_double(ranked[i].score) << '\n';
    }
    for (std::size_t i = 0; i < trace.st_deltas.size(); ++i)
      log << "iteration " << (i + 1) << ": st delta " << format_double(trace.st_deltas[i])
          << ", sr delta " << format_double(trace.sr_deltas[i]) << '\n';
    log << "converged=" << (trace.converged ? "true" : "false")
        << " iterations_run=" << trace.iterations_run << '\n';
  }

  if (o.output.empty()) {
    out << primary.str();
  } else {
    detail::open_output(o.output) << primary.str();
  }
  if (!o.matrix_csv.empty()) {
    auto f = detail::open_output(o.matrix_csv);
    write_matrix_csv(f, sim.st, d.tags().labels());
  }
  if (!o.snapshot.empty()) {
    auto f = detail::open_output(o.snapshot, true);
    write_snapshot(f, sim.st);
  }
  timer.mark("write");

  const nlohmann::ordered_json params = {{"psi", o.params.psi},
                                         {"tolerance", o.params.tolerance},
                                         {"max_iterations", o.params.max_iterations},
                                         {"query", o.query},
                                         {"k", o.k},
                                         {"threads", o.engine.threads},
                                         {"format", detail::format_json(o.format)}};
  for (const auto* path : {&o.output, &o.matrix_csv, &o.snapshot})
    if (!path->empty()) detail::write_manifest(*path, "sim", nlohmann::ordered_json::array({o.input}), params, timer);
}

struct EvalOptions {
  std::string input;
  TripleFormat format;
  SplitConfig split;
  std::vector<double> psis{0.0, 0.15, 0.3, 0.6};
  double tolerance = 1e-4;
  int max_iterations = 50;
  EngineOptions engine;
  std::string dataset_name;
  OutputFormat output_format = OutputFormat::csv;
  /// When set, writes <prefix>.csv, <prefix>.json and a manifest for each.
  std::string output_prefix;
};

inline EvalReport run_eval(const EvalOptions& o, std::ostream& out) {
  PhaseTimer timer;
  const auto d = read_dataset(o.input, o.format);
  timer.mark("load");
  std::vector<IterationParams> params;
  for (double psi : o.psis) params.push_back({psi, o.tolerance, o.max_iterations});
  auto name = o.dataset_name;
  if (name.empty()) {
    name = o.input;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
      name = name.substr(slash + 1);
  }
  auto report = evaluate(d, o.split, params, o.engine, {}, name);
  timer.mark("evaluate");

  std::ostringstream csv;
  write_report_csv(csv, report);
  const auto json = to_json(report).dump(2) + "\n";
  if (o.output_prefix.empty()) {
    out << (o.output_format == OutputFormat::json ? json : csv.str());
    return report;
  }
  detail::open_output(o.output_prefix + ".csv") << csv.str();
  detail::open_output(o.output_prefix + ".json") << json;
  timer.mark("write");
  const nlohmann::ordered_json parameters = {{"psi", o.psis},
                                             {"tolerance", o.tolerance},
                                             {"max_iterations", o.max_iterations},
                                             {"train_fraction", o.split.train_fraction},
                                             {"repetitions", o.split.repetitions},
                                             {"seed", o.split.seed},
                                             {"min_bookmark_tags", o.split.min_bookmark_tags},
                                             {"dataset_name", name},
                                             {"threads", o.engine.threads},
                                             {"format", detail::format_json(o.format)}};
  detail::write_manifest(o.output_prefix + ".csv", "eval", nlohmann::ordered_json::array({o.input}), parameters, timer);
  detail::write_manifest(o.output_prefix + ".json", "eval", nlohmann::ordered_json::array({o.input}), parameters, timer);
  return report;
}

}  // namespace folksim
