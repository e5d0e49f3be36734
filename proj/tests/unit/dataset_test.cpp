#include <gtest/gtest.h>

#include "folksim/dataset.hpp"
#include "folksim/ingest.hpp"
#include "support/instances.hpp"

namespace folksim {
namespace {

TEST(BuildDatasetTest, GroupsTriplesIntoBookmarks) {
  const auto triples = testing::example_triples();
  const auto d = build_dataset(triples);
  EXPECT_EQ(d.user_count(), 2u);
  EXPECT_EQ(d.resource_count(), 1u);
  EXPECT_EQ(d.tag_count(), 2u);
  ASSERT_EQ(d.bookmark_count(), 2u);
  EXPECT_EQ(d.bookmarks()[0], (Bookmark{UserId{0}, ResourceId{0}, {TagId{0}, TagId{1}}}));
  EXPECT_EQ(d.bookmarks()[1], (Bookmark{UserId{1}, ResourceId{0}, {TagId{0}}}));
  EXPECT_EQ(d.assignment_count(), 3u);
}

TEST(BuildDatasetTest, EmptyStream) {
  const auto d = build_dataset({});
  EXPECT_EQ(d.bookmark_count(), 0u);
  EXPECT_EQ(d.user_count(), 0u);
  EXPECT_EQ(d.tag_count(), 0u);
}

TEST(BuildDatasetTest, IdsFollowFirstSeenOrder) {
  const std::vector<Triple> triples{{"bob", "x", "z"}, {"amy", "y", "a"}, {"bob", "y", "z"}};
  const auto d = build_dataset(triples);
  EXPECT_EQ(d.users().label(0), "bob");
  EXPECT_EQ(d.users().label(1), "amy");
  EXPECT_EQ(d.tags().label(0), "z");
  EXPECT_EQ(d.tags().label(1), "a");
  EXPECT_EQ(d.bookmarks()[2].resource, ResourceId{1});
}

TEST(BuildDatasetTest, IdenticalTriplesCollapse) {
  const std::vector<Triple> triples{{"u", "r", "t"}, {"u", "r", "t"}, {"u", "r", "s"}, {"u", "r", "t"}};
  const auto d = build_dataset(triples);
  ASSERT_EQ(d.bookmark_count(), 1u);
  EXPECT_EQ(d.bookmarks()[0].tags.size(), 2u);
  EXPECT_EQ(d.assignment_count(), 2u);
}

TEST(BuildDatasetTest, EmptyLabelReportsLine) {
  const std::vector<Triple> triples{{"u", "r", "t", 4}, {"u", "", "t", 9}};
  try {
    build_dataset(triples);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 9u);
    EXPECT_NE(std::string(e.what()).find("line 9"), std::string::npos);
  }
}

TEST(BuildDatasetTest, EmptyLabelWithoutLineUsesPosition) {
  const std::vector<Triple> triples{{"u", "r", "t"}, {"u", "r", "t"}, {"", "r", "t"}};
  try {
    build_dataset(triples);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(BuildDatasetTest, InterningRoundTripsOnGeneratedData) {
  GeneratorConfig cfg;
  cfg.n_bookmarks = 2000;
  cfg.seed = 3;
  const auto d = generate(cfg);
  for (const Interner* table : {&d.users(), &d.resources(), &d.tags()}) {
    for (std::uint32_t id = 0; id < table->size(); ++id) {
      EXPECT_EQ(table->find(table->label(id)), id);
    }
  }
  for (const auto& b : d.bookmarks()) {
    ASSERT_FALSE(b.tags.empty());
    EXPECT_TRUE(std::is_sorted(b.tags.begin(), b.tags.end()));
    EXPECT_EQ(std::adjacent_find(b.tags.begin(), b.tags.end()), b.tags.end());
    EXPECT_LT(b.user.value, d.user_count());
    EXPECT_LT(b.resource.value, d.resource_count());
    for (auto t : b.tags) EXPECT_LT(t.value, d.tag_count());
  }
}

TEST(BuildDatasetTest, DeterministicForFixedOrder) {
  const auto triples = testing::example_triples();
  const auto a = build_dataset(triples);
  const auto b = build_dataset(triples);
  EXPECT_TRUE(std::equal(a.bookmarks().begin(), a.bookmarks().end(), b.bookmarks().begin(),
                         b.bookmarks().end()));
  EXPECT_TRUE(std::equal(a.tags().labels().begin(), a.tags().labels().end(),
                         b.tags().labels().begin(), b.tags().labels().end()));
}

TEST(BuildDatasetTest, SubsetSharesTables) {
  const auto triples = testing::example_triples();
  const auto d = build_dataset(triples);
  const auto sub = d.with_bookmarks({d.bookmarks()[1]});
  EXPECT_TRUE(sub.same_tables(d));
  EXPECT_EQ(sub.tag_count(), 2u);
  EXPECT_EQ(sub.bookmark_count(), 1u);
}

}  // namespace
}  // namespace folksim
