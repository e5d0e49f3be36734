#pragma once

// Literal quadruple-sum evaluation of one mutual-reinforcement iteration.
// O(n_t^2 n_r^2); a reference for checking the matrix path on small inputs.

#include <cmath>
#include <vector>

#include "folksim/similarity.hpp"
#include "folksim/sparse.hpp"

namespace folksim {

namespace detail {

inline std::vector<std::vector<double>> to_dense(const SparseCountMatrix& m) {
  std::vector<std::vector<double>> d(m.rows(), std::vector<double>(m.cols(), 0.0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m.at(i, j);
  return d;
}

inline SimilarityMatrix cosine_normalize(const std::vector<std::vector<double>>& kernel) {
  const std::size_t n = kernel.size();
  SimilarityMatrix s(n);
  for (std::size_t a = 0; a < n; ++a) s.set_live(a, kernel[a][a] > 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double denom = std::sqrt(kernel[a][a]) * std::sqrt(kernel[b][b]);
      s(a, b) = denom > 0.0 ? kernel[a][b] / denom : 0.0;
    }
  }
  return s;
}

}  // namespace detail

/// st(a,b) from sum_{i,j} TR(a,i) Psi(i,j) sr_prev(i,j) TR(b,j), and sr
/// likewise from st_prev, each normalized by the square roots of its diagonal.
inline StepResult direct_sum_oracle(const SparseCountMatrix& tr, const SimilarityMatrix& st_prev,
                                    const SimilarityMatrix& sr_prev, double psi) {
  const auto dense = detail::to_dense(tr);
  const std::size_t nt = tr.rows();
  const std::size_t nr = tr.cols();
  const auto gate = [psi](std::size_t i, std::size_t j) { return i == j ? 1.0 : psi; };

  std::vector<std::vector<double>> st_kernel(nt, std::vector<double>(nt, 0.0));
  for (std::size_t a = 0; a < nt; ++a)
    for (std::size_t b = 0; b < nt; ++b)
      for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nr; ++j)
          st_kernel[a][b] += dense[a][i] * gate(i, j) * sr_prev(i, j) * dense[b][j];

  std::vector<std::vector<double>> sr_kernel(nr, std::vector<double>(nr, 0.0));
  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = 0; b < nr; ++b)
      for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nt; ++j)
          sr_kernel[a][b] += dense[i][a] * gate(i, j) * st_prev(i, j) * dense[j][b];

  return {detail::cosine_normalize(st_kernel), detail::cosine_normalize(sr_kernel)};
}

}  // namespace folksim
