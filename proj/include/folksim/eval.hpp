#pragma once

// Tag-retrieval evaluation.
//
// Each repetition splits the bookmarks into train and test sets, computes tag
// similarity on the train set only, and turns every test bookmark with enough
// tags into a query: half its tags (rounded up) form the query set, the rest
// the expected set. The k = |expected| tags most similar to the query set are
// retrieved and compared against the expected set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "folksim/dataset.hpp"
#include "folksim/error.hpp"
#include "folksim/random.hpp"
#include "folksim/similarity.hpp"
#include "folksim/sparse.hpp"

namespace folksim {

struct SplitConfig {
  double train_fraction = 0.9;
  std::size_t repetitions = 10;
  std::uint64_t seed = 42;
  std::size_t min_bookmark_tags = 3;

  void validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw ConfigError("train fraction must lie strictly between 0 and 1");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (min_bookmark_tags < 3) throw ConfigError("min bookmark tags must be >= 3");
  }
};

struct TestBookmark {
  Bookmark bookmark;
  bool eligible = false;
};

struct Split {
  FolksonomyDataset train;
  std::vector<TestBookmark> test;
};

/// Bookmark-level random split driven by (seed, repetition). The train set
/// shares the id tables of `d`.
inline Split split_dataset(const FolksonomyDataset& d, const SplitConfig& cfg,
                           std::size_t repetition) {
  cfg.validate();
  const std::size_t n = d.bookmark_count();
  if (n == 0) throw ConfigError("cannot split an empty dataset");
  const auto n_train = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n)
    throw ConfigError("split of " + std::to_string(n) + " bookmarks leaves train or test empty");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto rng = derive_stream(cfg.seed, repetition, StreamPurpose::split);
  shuffle(std::span(order), rng);

  const auto all = d.bookmarks();
  std::vector<std::size_t> train_ids(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::sort(train_ids.begin(), train_ids.end());
  std::vector<Bookmark> train;
  train.reserve(n_train);
  for (auto i : train_ids) train.push_back(all[i]);

  Split split{d.with_bookmarks(std::move(train)), {}};
  split.test.reserve(n - n_train);
  for (std::size_t k = n_train; k < n; ++k) {
    const auto& b = all[order[k]];
    split.test.push_back({b, b.tags.size() >= cfg.min_bookmark_tags});
  }
  return split;
}

struct QueryCase {
  std::vector<TagId> query;
  std::vector<TagId> expected;
};

/// Shuffles the bookmark's tags; the first ceil(m/2) form the query set and the
/// remaining floor(m/2) the expected set. Returns nothing when m < min_tags.
inline std::optional<QueryCase> make_query_case(const Bookmark& b, Engine& rng,
                                                std::size_t min_tags = 3) {
  if (b.tags.size() < min_tags || b.tags.size() < 2) return std::nullopt;
  std::vector<TagId> tags = b.tags;
  shuffle(std::span(tags), rng);
  const std::size_t q = (tags.size() + 1) / 2;
  QueryCase c;
  c.query.assign(tags.begin(), tags.begin() + static_cast<std::ptrdiff_t>(q));
  c.expected.assign(tags.begin() + static_cast<std::ptrdiff_t>(q), tags.end());
  std::sort(c.query.begin(), c.query.end());
  std::sort(c.expected.begin(), c.expected.end());
  return c;
}

struct CaseScore {
  std::size_t hits = 0;
  double precision = 0.0;
  double recall = 0.0;
};

/// precision = |R ∩ E| / |R| (0 when R is empty), recall = |R ∩ E| / |E|.
inline CaseScore score_case(std::span<const TagId> retrieved, std::span<const TagId> expected) {
  CaseScore s;
  for (auto t : retrieved)
    if (std::find(expected.begin(), expected.end(), t) != expected.end()) ++s.hits;
  const auto hits = static_cast<double>(s.hits);
  s.precision = retrieved.empty() ? 0.0 : hits / static_cast<double>(retrieved.size());
  s.recall = expected.empty() ? 0.0 : hits / static_cast<double>(expected.size());
  return s;
}

struct RepetitionResult {
  std::size_t repetition = 0;
  std::size_t test_bookmarks = 0;
  std::size_t cases = 0;
  double precision = 0.0;
  double recall = 0.0;
  int iterations = 0;
  bool converged = false;
  /// No eligible test bookmark; excluded from the averages.
  bool empty = false;
};

struct PsiResult {
  IterationParams params;
  std::vector<RepetitionResult> runs;
  double precision = 0.0;
  double recall = 0.0;
};

struct EvalReport {
  std::string dataset_name;
  SplitConfig split;
  std::vector<PsiResult> results;
  /// Repetitions skipped for lack of eligible cases, summed over psi values.
  std::size_t empty_repetitions = 0;
};

/// Everything known about one evaluated query, for inspection by callers.
struct CaseRecord {
  double psi = 0.0;
  std::size_t repetition = 0;
  const Bookmark* bookmark = nullptr;
  const QueryCase* query = nullptr;
  std::span<const ScoredTag> retrieved;
  CaseScore score;
};

using CaseObserver = std::function<void(const CaseRecord&)>;

/// Tags retrieved for a query case against a given similarity matrix.
inline std::vector<ScoredTag> retrieve(const SimilarityMatrix& st, const QueryCase& c) {
  return top_k_similar(st, c.query, c.expected.size(), c.query);
}

inline EvalReport evaluate(const FolksonomyDataset& d, const SplitConfig& cfg,
                           std::span<const IterationParams> params_list,
                           const EngineOptions& opts = {}, const CaseObserver& observer = {},
                           std::string dataset_name = "dataset") {
  cfg.validate();
  if (params_list.empty()) throw ConfigError("no psi values to evaluate");
  for (const auto& p : params_list) p.validate();

  EvalReport report;
  report.dataset_name = std::move(dataset_name);
  report.split = cfg;
  for (const auto& p : params_list) report.results.push_back({p, {}, 0.0, 0.0});

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    const auto split = split_dataset(d, cfg, rep);
    auto rng = derive_stream(cfg.seed, rep, StreamPurpose::query);
    std::vector<QueryCase> cases;
    std::vector<const Bookmark*> sources;
    for (const auto& tb : split.test) {
      if (!tb.eligible) continue;
      if (auto c = make_query_case(tb.bookmark, rng, cfg.min_bookmark_tags)) {
        cases.push_back(std::move(*c));
        sources.push_back(&tb.bookmark);
      }
    }

    const auto tr = tr_matrix(split.train);
    for (auto& psi_result : report.results) {
      RepetitionResult run;
      run.repetition = rep;
      run.test_bookmarks = split.test.size();
      run.cases = cases.size();
      if (cases.empty()) {
        run.empty = true;
        ++report.empty_repetitions;
        psi_result.runs.push_back(run);
        continue;
      }
      const auto sim = iterate_similarity(tr, psi_result.params, opts);
      run.iterations = sim.trace.iterations_run;
      run.converged = sim.trace.converged;
      double p_sum = 0.0, r_sum = 0.0;
      std::vector<TagId> ids;
      for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto got = retrieve(sim.st, cases[i]);
        ids.clear();
        for (const auto& s : got) ids.push_back(s.tag);
        const auto score = score_case(ids, cases[i].expected);
        p_sum += score.precision;
        r_sum += score.recall;
        if (observer)
          observer({psi_result.params.psi, rep, sources[i], &cases[i], got, score});
      }
      run.precision = p_sum / static_cast<double>(cases.size());
      run.recall = r_sum / static_cast<double>(cases.size());
      psi_result.runs.push_back(run);
    }
  }

  for (auto& psi_result : report.results) {
    double p = 0.0, r = 0.0;
    std::size_t used = 0;
    for (const auto& run : psi_result.runs) {
      if (run.empty) continue;
      p += run.precision;
      r += run.recall;
      ++used;
    }
    if (used > 0) {
      psi_result.precision = p / static_cast<double>(used);
      psi_result.recall = r / static_cast<double>(used);
    }
  }
  return report;
}

}  // namespace folksim
