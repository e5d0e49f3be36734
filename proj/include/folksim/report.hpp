#pragma once

// Serialized views: dataset statistics and evaluation reports.

#include <cstdio>
#include <map>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "folksim/dataset.hpp"
#include "folksim/eval.hpp"
#include "folksim/matrix_io.hpp"
#include "folksim/sparse.hpp"

namespace folksim {

struct DatasetStats {
  std::size_t users = 0;
  std::size_t resources = 0;
  std::size_t tags = 0;
  std::size_t bookmarks = 0;
  std::size_t assignments = 0;
  /// Share of used tags with fewer than 5 assignments.
  double rare_tag_fraction = 0.0;
  /// Share of bookmarks carrying at most 3 tags.
  double small_bookmark_fraction = 0.0;
  std::map<std::size_t, std::size_t> tag_histogram;
};

inline DatasetStats dataset_stats(const FolksonomyDataset& d) {
  DatasetStats s;
  s.users = d.user_count();
  s.resources = d.resource_count();
  s.tags = d.tag_count();
  s.bookmarks = d.bookmark_count();
  s.assignments = d.assignment_count();
  s.tag_histogram = tag_frequency_histogram(d);
  std::size_t used = 0, rare = 0;
  for (const auto& [uses, n] : s.tag_histogram) {
    used += n;
    if (uses < 5) rare += n;
  }
  if (used) s.rare_tag_fraction = static_cast<double>(rare) / static_cast<double>(used);
  std::size_t small = 0;
  for (const auto& b : d.bookmarks())
    if (b.tags.size() <= 3) ++small;
  if (s.bookmarks) s.small_bookmark_fraction = static_cast<double>(small) / static_cast<double>(s.bookmarks);
  return s;
}

inline nlohmann::ordered_json to_json(const DatasetStats& s) {
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [uses, n] : s.tag_histogram) hist[std::to_string(uses)] = n;
  return {{"users", s.users},
          {"resources", s.resources},
          {"tags", s.tags},
          {"bookmarks", s.bookmarks},
          {"assignments", s.assignments},
          {"rare_tag_fraction", s.rare_tag_fraction},
          {"small_bookmark_fraction", s.small_bookmark_fraction},
          {"tag_histogram", std::move(hist)}};
}

inline std::string psi_label(double psi) {
  return psi == 0.0 ? "cosine (baseline)" : "psi=" + format_double(psi);
}

inline std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

/// One row per psi value: psi,label,dataset,precision,recall.
inline void write_report_csv(std::ostream& os, const EvalReport& r) {
  os << "psi,label,dataset,precision,recall\n";
  for (const auto& p : r.results) {
    os << format_double(p.params.psi) << ',' << csv_field(psi_label(p.params.psi)) << ','
       << csv_field(r.dataset_name) << ',' << fixed9(p.precision) << ',' << fixed9(p.recall)
       << '\n';
  }
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const auto& p : r.results) {
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& run : p.runs) {
      runs.push_back({{"repetition", run.repetition},
                      {"test_bookmarks", run.test_bookmarks},
                      {"cases", run.cases},
                      {"empty", run.empty},
                      {"precision", run.precision},
                      {"recall", run.recall},
                      {"iterations", run.iterations},
                      {"converged", run.converged}});
    }
    results.push_back({{"psi", p.params.psi},
                       {"label", psi_label(p.params.psi)},
                       {"tolerance", p.params.tolerance},
                       {"max_iterations", p.params.max_iterations},
                       {"precision", p.precision},
                       {"recall", p.recall},
                       {"runs", std::move(runs)}});
  }
  return {{"dataset", r.dataset_name},
          {"split",
           {{"train_fraction", r.split.train_fraction},
            {"repetitions", r.split.repetitions},
            {"seed", r.split.seed},
            {"min_bookmark_tags", r.split.min_bookmark_tags}}},
          {"empty_repetitions", r.empty_repetitions},
          {"results", std::move(results)}};
}

}  // namespace folksim
