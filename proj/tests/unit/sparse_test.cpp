#include <gtest/gtest.h>

#include "folksim/ingest.hpp"
#include "folksim/sparse.hpp"
#include "support/instances.hpp"

namespace folksim {
namespace {

TEST(SparseCountMatrixTest, TrOfExample) {
  const auto d = build_dataset(testing::example_triples());
  const auto tr = tr_matrix(d);
  ASSERT_EQ(tr.rows(), 2u);
  ASSERT_EQ(tr.cols(), 1u);
  EXPECT_EQ(tr.at(0, 0), 2u);
  EXPECT_EQ(tr.at(1, 0), 1u);
}

TEST(SparseCountMatrixTest, TuAndRuOfExample) {
  const auto d = build_dataset(testing::example_triples());
  const auto tu = tu_matrix(d);
  ASSERT_EQ(tu.rows(), 2u);
  ASSERT_EQ(tu.cols(), 2u);
  EXPECT_EQ(tu.at(0, 0), 1u);
  EXPECT_EQ(tu.at(0, 1), 1u);
  EXPECT_EQ(tu.at(1, 0), 1u);
  EXPECT_EQ(tu.at(1, 1), 0u);

  const auto ru = ru_matrix(d);
  ASSERT_EQ(ru.rows(), 1u);
  ASSERT_EQ(ru.cols(), 2u);
  EXPECT_EQ(ru.at(0, 0), 1u);
  EXPECT_EQ(ru.at(0, 1), 1u);
}

TEST(SparseCountMatrixTest, EmptyDatasetGivesEmptyMatrices) {
  const auto d = build_dataset({});
  for (const auto& m : {tr_matrix(d), tu_matrix(d), ru_matrix(d)}) {
    EXPECT_EQ(m.rows(), 0u);
    EXPECT_EQ(m.cols(), 0u);
    EXPECT_EQ(m.nnz(), 0u);
  }
}

TEST(SparseCountMatrixTest, ZerosAreNotStored) {
  const auto tr = testing::tr_from_rows({{0, 3, 0}, {0, 0, 0}, {1, 0, 2}});
  EXPECT_EQ(tr.nnz(), 3u);
  for (std::size_t r = 0; r < tr.rows(); ++r)
    for (auto c : tr.row(r).counts) EXPECT_GT(c, 0u);
  EXPECT_EQ(tr.row(1).indices.size(), 0u);
}

TEST(SparseCountMatrixTest, ColumnViewMatchesRowView) {
  auto rng = derive_stream(11, 0, StreamPurpose::test);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rows = testing::random_rows(rng, 9, 13, 4);
    const auto m = testing::tr_from_rows(rows);
    const auto t = m.transpose();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        EXPECT_EQ(m.at(i, j), static_cast<unsigned>(rows[i][j]));
        EXPECT_EQ(t.at(j, i), static_cast<unsigned>(rows[i][j]));
      }
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto col = m.col(j);
      for (std::size_t p = 0; p < col.indices.size(); ++p)
        EXPECT_EQ(m.at(col.indices[p], j), col.counts[p]);
    }
  }
}

TEST(SparseCountMatrixTest, OutOfBoundsOccurrenceRejected) {
  EXPECT_THROW(SparseCountMatrix::from_occurrences(2, 2, {{2, 0}}), ComputeError);
}

TEST(SparseCountMatrixTest, SyntheticTotalsMatchIndependentRecount) {
  const auto d = generate(GeneratorConfig{});
  const auto tr = tr_matrix(d);
  const auto tu = tu_matrix(d);

  std::size_t memberships = 0;
  std::vector<std::uint64_t> per_tag(d.tag_count(), 0), per_resource(d.resource_count(), 0);
  for (const auto& b : d.bookmarks()) {
    for (auto t : b.tags) {
      ++memberships;
      ++per_tag[t.value];
      ++per_resource[b.resource.value];
    }
  }
  EXPECT_EQ(tr.total(), memberships);
  EXPECT_EQ(tu.total(), memberships);
  EXPECT_EQ(tr.total(), d.assignment_count());
  for (std::size_t t = 0; t < d.tag_count(); ++t) EXPECT_EQ(tr.row_sum(t), per_tag[t]);
  for (std::size_t r = 0; r < d.resource_count(); ++r) EXPECT_EQ(tr.col_sum(r), per_resource[r]);
}

TEST(TagHistogramTest, Example) {
  const auto d = build_dataset(testing::example_triples());
  const std::map<std::size_t, std::size_t> expected{{1, 1}, {2, 1}};
  EXPECT_EQ(tag_frequency_histogram(d), expected);
}

TEST(TagHistogramTest, Empty) {
  EXPECT_TRUE(tag_frequency_histogram(build_dataset({})).empty());
}

TEST(TagHistogramTest, SyntheticRareFractionMatchesRecount) {
  const auto d = generate(GeneratorConfig{});
  const auto hist = tag_frequency_histogram(d);

  std::map<std::string, std::size_t> uses;
  for (const auto& b : d.bookmarks())
    for (auto t : b.tags) ++uses[d.tags().label(t.value)];
  std::size_t rare = 0;
  for (const auto& [label, n] : uses)
    if (n < 5) ++rare;

  std::size_t hist_rare = 0, hist_total = 0;
  for (const auto& [n, tags] : hist) {
    hist_total += tags;
    if (n < 5) hist_rare += tags;
  }
  EXPECT_EQ(hist_total, uses.size());
  EXPECT_EQ(hist_rare, rare);
}

}  // namespace
}  // namespace folksim
