#pragma once

// Tag/resource similarity by mutual reinforcement.
//
// Starting from identity matrices, each iteration computes
//
//   ST = TR (Psi_r o sr) TR^t        SR = TR^t (Psi_t o st) TR
//
// where Psi is 1 on the diagonal and psi elsewhere, then rescales each kernel
// to unit diagonal: s(a,b) = S(a,b) / sqrt(S(a,a) S(b,b)). Both updates read
// the previous iterate. With psi = 0 the gated matrix is the identity and the
// tag update is plain cosine similarity over TR rows.
//
// The gate is never materialized: Psi o s = psi s + (1 - psi) diag(s), so each
// row of the intermediate product is a psi-weighted sum of rows of s plus a
// diagonal correction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "folksim/dataset.hpp"
#include "folksim/error.hpp"
#include "folksim/parallel.hpp"
#include "folksim/sparse.hpp"

namespace folksim {

struct IterationParams {
  double psi = 0.0;
  /// Stop once the largest elementwise change of both st and sr is <= this.
  double tolerance = 1e-4;
  int max_iterations = 50;

  void validate() const {
    if (!(psi >= 0.0 && psi <= 1.0)) throw ConfigError("psi must lie in [0, 1]");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance))
      throw ConfigError("tolerance must be a positive finite number");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  }
};

inline constexpr std::size_t kDefaultMemoryBudgetBytes = std::size_t{4} << 30;
inline constexpr const char* kMemoryBudgetEnv = "FOLKSIM_MEMORY_BUDGET_MB";

/// Execution knobs that never change results.
struct EngineOptions {
  unsigned threads = 1;
  std::size_t memory_budget_bytes = kDefaultMemoryBudgetBytes;

  /// Defaults, with the memory budget taken from FOLKSIM_MEMORY_BUDGET_MB when set.
  static EngineOptions from_environment() {
    EngineOptions o;
    if (const char* env = std::getenv(kMemoryBudgetEnv); env && *env) {
      char* end = nullptr;
      const auto mb = std::strtoull(env, &end, 10);
      if (*end != '\0' || mb == 0)
        throw ConfigError(std::string(kMemoryBudgetEnv) + " must be a positive integer");
      o.memory_budget_bytes = static_cast<std::size_t>(mb) << 20;
    }
    return o;
  }
};

/// Dense symmetric similarity matrix. Ids whose row in the underlying count
/// matrix is empty are "dead": their whole row, diagonal included, is 0.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t dim) : dim_(dim), values_(dim * dim, 0.0), live_(dim, 1) {}

  static SimilarityMatrix identity(std::size_t dim) {
    SimilarityMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.values_[i * dim + i] = 1.0;
    return m;
  }

  std::size_t dimension() const noexcept { return dim_; }
  double operator()(std::size_t a, std::size_t b) const { return values_[a * dim_ + b]; }
  double& operator()(std::size_t a, std::size_t b) { return values_[a * dim_ + b]; }

  std::span<const double> row(std::size_t a) const {
    return std::span(values_).subspan(a * dim_, dim_);
  }
  std::span<double> row(std::size_t a) { return std::span(values_).subspan(a * dim_, dim_); }
  std::span<const double> values() const noexcept { return values_; }

  bool is_live(std::size_t a) const { return live_[a] != 0; }
  void set_live(std::size_t a, bool live) { live_[a] = live ? 1 : 0; }

  std::vector<std::size_t> dead_ids() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dim_; ++i)
      if (!live_[i]) out.push_back(i);
    return out;
  }

  /// Largest |this - other| over all entries.
  double max_abs_difference(const SimilarityMatrix& other) const {
    double d = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
      d = std::max(d, std::abs(values_[k] - other.values_[k]));
    return d;
  }

  bool operator==(const SimilarityMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> live_;
};

struct ConvergenceTrace {
  std::vector<double> st_deltas;
  std::vector<double> sr_deltas;
  int iterations_run = 0;
  bool converged = false;
};

struct IterationResult {
  SimilarityMatrix st;
  SimilarityMatrix sr;
  ConvergenceTrace trace;
};

namespace detail {

/// Lines of `left` span the inner dimension; returns the upper triangle of
/// left * (Psi o inner) * left^t mirrored into a full matrix (unnormalized).
/// Row a only reads row a of the intermediate product, and every sum runs in
/// index order, so the result is independent of the thread count.
inline void congruence(const SparseCountMatrix& left, const SimilarityMatrix& inner, double psi,
                       unsigned threads, SimilarityMatrix& out) {
  const std::size_t n = left.rows();
  const std::size_t m = left.cols();
  if (out.dimension() != n) out = SimilarityMatrix(n);
  std::vector<std::vector<double>> scratch(std::max(1u, threads), std::vector<double>(m));
  parallel_for(n, threads, [&](unsigned worker, std::size_t a) {
    auto& acc = scratch[worker];
    std::fill(acc.begin(), acc.end(), 0.0);
    const auto line = left.row(a);
    for (std::size_t p = 0; p < line.indices.size(); ++p) {
      const std::size_t i = line.indices[p];
      const double w = line.counts[p];
      if (psi != 0.0) {
        const double wp = w * psi;
        const auto src = inner.row(i);
        for (std::size_t j = 0; j < m; ++j) acc[j] += wp * src[j];
      }
      if (psi != 1.0) acc[i] += w * (1.0 - psi) * inner(i, i);
    }
    auto dst = out.row(a);
    for (std::size_t b = a; b < n; ++b) {
      const auto other = left.row(b);
      double s = 0.0;
      for (std::size_t p = 0; p < other.indices.size(); ++p)
        s += other.counts[p] * acc[other.indices[p]];
      dst[b] = s;
    }
  });
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) out(b, a) = out(a, b);
}

/// In-place rescale to unit diagonal; ids with a zero self-kernel become dead.
inline void normalize(SimilarityMatrix& s) {
  const std::size_t n = s.dimension();
  std::vector<double> diag(n);
  for (std::size_t a = 0; a < n; ++a) {
    diag[a] = s(a, a);
    s.set_live(a, diag[a] > 0.0);
  }
  for (std::size_t a = 0; a < n; ++a) {
    auto r = s.row(a);
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) {
        r[b] = s.is_live(a) ? 1.0 : 0.0;
      } else if (diag[a] > 0.0 && diag[b] > 0.0) {
        r[b] = r[b] / std::sqrt(diag[a] * diag[b]);
      } else {
        r[b] = 0.0;
      }
    }
  }
}

inline void require_finite(const SimilarityMatrix& s, const char* which, int iteration) {
  for (double v : s.values()) {
    if (!std::isfinite(v)) {
      throw ComputeError(std::string("non-finite value in ") + which + " at iteration " +
                         std::to_string(iteration));
    }
  }
}

}  // namespace detail

/// Bytes of dense state the iteration holds at once for an n_t x n_r instance.
inline std::size_t iteration_memory_bytes(std::size_t n_tags, std::size_t n_resources) {
  const std::size_t t2 = n_tags * n_tags;
  const std::size_t r2 = n_resources * n_resources;
  return sizeof(double) * (2 * t2 + 2 * r2 + std::max(t2, r2));
}

inline void check_memory_budget(std::size_t n_tags, std::size_t n_resources,
                                const EngineOptions& opts) {
  const auto need = iteration_memory_bytes(n_tags, n_resources);
  if (need > opts.memory_budget_bytes) {
    throw ComputeError("dense similarity iterates for " + std::to_string(n_tags) + " tags x " +
                       std::to_string(n_resources) + " resources need " +
                       std::to_string(need >> 20) + " MiB, over the budget of " +
                       std::to_string(opts.memory_budget_bytes >> 20) +
                       " MiB; subsample the dataset or raise " + kMemoryBudgetEnv);
  }
}

/// Cosine similarity between TR rows.
inline SimilarityMatrix cosine_tag_similarity(const SparseCountMatrix& tr,
                                              const EngineOptions& opts = {}) {
  const std::size_t n = tr.rows();
  SimilarityMatrix gram(n);
  std::vector<std::vector<double>> scratch(std::max(1u, opts.threads),
                                           std::vector<double>(tr.cols()));
  parallel_for(n, opts.threads, [&](unsigned worker, std::size_t a) {
    auto& dense = scratch[worker];
    const auto line = tr.row(a);
    for (std::size_t p = 0; p < line.indices.size(); ++p) dense[line.indices[p]] = line.counts[p];
    for (std::size_t b = a; b < n; ++b) {
      const auto other = tr.row(b);
      double s = 0.0;
      for (std::size_t p = 0; p < other.indices.size(); ++p)
        s += other.counts[p] * dense[other.indices[p]];
      gram(a, b) = s;
    }
    for (auto i : line.indices) dense[i] = 0.0;
  });
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) gram(b, a) = gram(a, b);
  detail::normalize(gram);
  return gram;
}

struct StepResult {
  SimilarityMatrix st;
  SimilarityMatrix sr;
};

namespace detail {

inline void step_into(const SparseCountMatrix& tr, const SparseCountMatrix& tr_t,
                      const SimilarityMatrix& st_prev, const SimilarityMatrix& sr_prev, double psi,
                      unsigned threads, StepResult& out) {
  congruence(tr, sr_prev, psi, threads, out.st);
  congruence(tr_t, st_prev, psi, threads, out.sr);
  normalize(out.st);
  normalize(out.sr);
}

}  // namespace detail

/// One simultaneous update: st from sr_prev and sr from st_prev.
/// `tr_t` must be tr.transpose().
inline StepResult similarity_step(const SparseCountMatrix& tr, const SparseCountMatrix& tr_t,
                                  const SimilarityMatrix& st_prev, const SimilarityMatrix& sr_prev,
                                  double psi, const EngineOptions& opts = {}) {
  StepResult next;
  detail::step_into(tr, tr_t, st_prev, sr_prev, psi, opts.threads, next);
  return next;
}

/// Called after each iteration k >= 1 with the new iterates.
using IterationObserver =
    std::function<void(int iteration, const SimilarityMatrix& st, const SimilarityMatrix& sr)>;

inline IterationResult iterate_similarity(const SparseCountMatrix& tr, const IterationParams& params,
                                          const EngineOptions& opts = {},
                                          const IterationObserver& observer = {}) {
  params.validate();
  if (tr.rows() == 0 || tr.cols() == 0) throw ConfigError("TR matrix is empty");
  check_memory_budget(tr.rows(), tr.cols(), opts);

  const auto tr_t = tr.transpose();
  IterationResult result{SimilarityMatrix::identity(tr.rows()),
                         SimilarityMatrix::identity(tr.cols()), {}};
  StepResult next;
  for (int k = 1; k <= params.max_iterations; ++k) {
    detail::step_into(tr, tr_t, result.st, result.sr, params.psi, opts.threads, next);
    detail::require_finite(next.st, "st", k);
    detail::require_finite(next.sr, "sr", k);
    const double dst = next.st.max_abs_difference(result.st);
    const double dsr = next.sr.max_abs_difference(result.sr);
    std::swap(result.st, next.st);
    std::swap(result.sr, next.sr);
    result.trace.st_deltas.push_back(dst);
    result.trace.sr_deltas.push_back(dsr);
    result.trace.iterations_run = k;
    result.trace.converged = dst <= params.tolerance && dsr <= params.tolerance;
    if (observer) observer(k, result.st, result.sr);
    if (result.trace.converged) break;
  }
  return result;
}

struct ScoredTag {
  TagId tag;
  double score = 0.0;

  bool operator==(const ScoredTag&) const = default;
};

/// Ranks tags by the sum of their similarities to the query tags. Query tags
/// and `excluded` are never returned; neither are tags scoring 0, so the list
/// may hold fewer than k entries. Ties go to the smaller tag id.
inline std::vector<ScoredTag> top_k_similar(const SimilarityMatrix& st, std::span<const TagId> query,
                                            std::size_t k, std::span<const TagId> excluded = {}) {
  const std::size_t n = st.dimension();
  if (query.empty()) throw ConfigError("query tag set is empty");
  for (auto q : query)
    if (q.value >= n) throw ConfigError("query tag id " + std::to_string(q.value) + " out of range");
  if (k == 0) return {};

  std::vector<double> score(n, 0.0);
  for (auto q : query) {
    const auto r = st.row(q.value);
    for (std::size_t t = 0; t < n; ++t) score[t] += r[t];
  }
  std::vector<std::uint8_t> skip(n, 0);
  for (auto q : query) skip[q.value] = 1;
  for (auto e : excluded)
    if (e.value < n) skip[e.value] = 1;

  std::vector<ScoredTag> candidates;
  for (std::size_t t = 0; t < n; ++t)
    if (!skip[t] && score[t] > 0.0)
      candidates.push_back({TagId{static_cast<std::uint32_t>(t)}, score[t]});
  const auto better = [](const ScoredTag& x, const ScoredTag& y) {
    return x.score != y.score ? x.score > y.score : x.tag < y.tag;
  };
  const auto take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), better);
  candidates.resize(take);
  return candidates;
}

}  // namespace folksim
