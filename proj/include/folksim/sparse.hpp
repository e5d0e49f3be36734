#pragma once

// Occurrence-count matrices (TR, TU, RU) in compressed row + column form.

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "folksim/dataset.hpp"

namespace folksim {

/// Sparse matrix of positive integer counts. Zeros are never stored.
/// Both row-major (CSR) and column-major (CSC) layouts are kept so that the
/// matrix and its transpose can be walked row by row.
class SparseCountMatrix {
 public:
  using Count = std::uint32_t;
  using Index = std::uint32_t;

  struct Line {
    std::span<const Index> indices;
    std::span<const Count> counts;
  };

  SparseCountMatrix() = default;

  /// Builds from a list of (row, col) occurrences; duplicates are summed.
  static SparseCountMatrix from_occurrences(std::size_t rows, std::size_t cols,
                                            std::vector<std::pair<Index, Index>> cells) {
    for (const auto& [r, c] : cells) {
      if (r >= rows || c >= cols) throw ComputeError("sparse entry out of bounds");
    }
    std::sort(cells.begin(), cells.end());
    SparseCountMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    for (std::size_t k = 0; k < cells.size();) {
      std::size_t end = k;
      while (end < cells.size() && cells[end] == cells[k]) ++end;
      m.col_idx_.push_back(cells[k].second);
      m.row_val_.push_back(static_cast<Count>(end - k));
      ++m.row_ptr_[cells[k].first + 1];
      k = end;
    }
    for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    m.build_columns();
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return row_val_.size(); }

  Line row(std::size_t r) const {
    const auto b = row_ptr_[r], e = row_ptr_[r + 1];
    return {std::span(col_idx_).subspan(b, e - b), std::span(row_val_).subspan(b, e - b)};
  }

  Line col(std::size_t c) const {
    const auto b = col_ptr_[c], e = col_ptr_[c + 1];
    return {std::span(row_idx_).subspan(b, e - b), std::span(col_val_).subspan(b, e - b)};
  }

  Count at(std::size_t r, std::size_t c) const {
    const auto line = row(r);
    auto it = std::lower_bound(line.indices.begin(), line.indices.end(), static_cast<Index>(c));
    if (it == line.indices.end() || *it != c) return 0;
    return line.counts[static_cast<std::size_t>(it - line.indices.begin())];
  }

  std::uint64_t row_sum(std::size_t r) const {
    std::uint64_t s = 0;
    for (auto v : row(r).counts) s += v;
    return s;
  }

  std::uint64_t col_sum(std::size_t c) const {
    std::uint64_t s = 0;
    for (auto v : col(c).counts) s += v;
    return s;
  }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto v : row_val_) s += v;
    return s;
  }

  SparseCountMatrix transpose() const {
    SparseCountMatrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.row_ptr_ = col_ptr_;
    t.col_idx_ = row_idx_;
    t.row_val_ = col_val_;
    t.col_ptr_ = row_ptr_;
    t.row_idx_ = col_idx_;
    t.col_val_ = row_val_;
    return t;
  }

 private:
  void build_columns() {
    col_ptr_.assign(cols_ + 1, 0);
    for (auto c : col_idx_) ++col_ptr_[c + 1];
    for (std::size_t c = 0; c < cols_; ++c) col_ptr_[c + 1] += col_ptr_[c];
    row_idx_.resize(nnz());
    col_val_.resize(nnz());
    std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        const auto dst = fill[col_idx_[k]]++;
        row_idx_[dst] = static_cast<Index>(r);
        col_val_[dst] = row_val_[k];
      }
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<Count> row_val_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<Index> row_idx_;
  std::vector<Count> col_val_;
};

/// n_t x n_r; entry (t, r) counts bookmarks on resource r carrying tag t.
inline SparseCountMatrix tr_matrix(const FolksonomyDataset& d) {
  std::vector<std::pair<SparseCountMatrix::Index, SparseCountMatrix::Index>> cells;
  cells.reserve(d.assignment_count());
  for (const auto& b : d.bookmarks())
    for (auto t : b.tags) cells.emplace_back(t.value, b.resource.value);
  return SparseCountMatrix::from_occurrences(d.tag_count(), d.resource_count(), std::move(cells));
}

/// n_t x n_u; entry (t, u) counts bookmarks of user u carrying tag t.
inline SparseCountMatrix tu_matrix(const FolksonomyDataset& d) {
  std::vector<std::pair<SparseCountMatrix::Index, SparseCountMatrix::Index>> cells;
  cells.reserve(d.assignment_count());
  for (const auto& b : d.bookmarks())
    for (auto t : b.tags) cells.emplace_back(t.value, b.user.value);
  return SparseCountMatrix::from_occurrences(d.tag_count(), d.user_count(), std::move(cells));
}

/// n_r x n_u; entry (r, u) is 1 when user u bookmarked resource r.
inline SparseCountMatrix ru_matrix(const FolksonomyDataset& d) {
  std::vector<std::pair<SparseCountMatrix::Index, SparseCountMatrix::Index>> cells;
  cells.reserve(d.bookmark_count());
  for (const auto& b : d.bookmarks()) cells.emplace_back(b.resource.value, b.user.value);
  return SparseCountMatrix::from_occurrences(d.resource_count(), d.user_count(), std::move(cells));
}

/// usage count -> number of tags with that many assignments. Tags with no
/// assignment (possible in a train subset) are not counted.
inline std::map<std::size_t, std::size_t> tag_frequency_histogram(const FolksonomyDataset& d) {
  std::vector<std::size_t> usage(d.tag_count(), 0);
  for (const auto& b : d.bookmarks())
    for (auto t : b.tags) ++usage[t.value];
  std::map<std::size_t, std::size_t> hist;
  for (auto n : usage)
    if (n > 0) ++hist[n];
  return hist;
}

}  // namespace folksim
