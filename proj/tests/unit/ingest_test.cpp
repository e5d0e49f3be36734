#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "folksim/ingest.hpp"
#include "folksim/report.hpp"

namespace folksim {
namespace {

ParseResult parse(const std::string& text, TripleFormat f = {}) {
  std::istringstream in(text);
  return parse_triples(in, f);
}

TEST(ParseTriplesTest, SingleLine) {
  const auto r = parse("u1\tr1\tt1\n");
  ASSERT_EQ(r.triples.size(), 1u);
  EXPECT_EQ(r.triples[0], (Triple{"u1", "r1", "t1"}));
  EXPECT_EQ(r.triples[0].line, 1u);
}

TEST(ParseTriplesTest, CommentsAndBlankLinesSkipped) {
  EXPECT_TRUE(parse("# comment\n\n").triples.empty());
  const auto r = parse("  # indented comment\n\nu\tr\tt\n   \n");
  ASSERT_EQ(r.triples.size(), 1u);
  EXPECT_EQ(r.triples[0].line, 3u);
}

TEST(ParseTriplesTest, FieldsTrimmedAndCrlfTolerated) {
  const auto r = parse(" u1 \t r1\t t1 \r\n");
  ASSERT_EQ(r.triples.size(), 1u);
  EXPECT_EQ(r.triples[0], (Triple{"u1", "r1", "t1"}));
}

TEST(ParseTriplesTest, MalformedLineReportsLineNumber) {
  try {
    parse("u\tr\tt\nu\tr\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("u\tr\tt\textra\n"), ParseError);
  EXPECT_THROW(parse("u\t\tt\n"), ParseError);
}

TEST(ParseTriplesTest, SkipModeCountsMalformedLines) {
  std::string text;
  for (int i = 0; i < 100; ++i) {
    if (i == 41) {
      text += "broken line without delimiters\n";
    } else {
      text += "u" + std::to_string(i % 7) + "\tr" + std::to_string(i) + "\tt" +
              std::to_string(i % 13) + "\n";
    }
  }
  TripleFormat f;
  f.skip_malformed = true;
  const auto r = parse(text, f);
  EXPECT_EQ(r.triples.size(), 99u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.skipped_lines, std::vector<std::size_t>{42});
}

TEST(ParseTriplesTest, CustomDelimiterAndCaseFold) {
  TripleFormat f;
  f.delimiter = ',';
  f.case_fold_tags = true;
  const auto r = parse("Alice,Doc,Machine Learning\n", f);
  ASSERT_EQ(r.triples.size(), 1u);
  EXPECT_EQ(r.triples[0], (Triple{"Alice", "Doc", "machine learning"}));
}

TEST(WriteTriplesTest, GeneratedDatasetRoundTrips) {
  GeneratorConfig cfg;
  cfg.n_bookmarks = 3000;
  cfg.seed = 99;
  const auto d = generate(cfg);
  std::ostringstream out;
  write_triples(out, d);
  std::istringstream in(out.str());
  const auto back = build_dataset(parse_triples(in).triples);

  ASSERT_EQ(back.bookmark_count(), d.bookmark_count());
  EXPECT_TRUE(std::equal(d.bookmarks().begin(), d.bookmarks().end(), back.bookmarks().begin()));
  for (const auto& [a, b] : {std::pair{&d.users(), &back.users()},
                             std::pair{&d.resources(), &back.resources()},
                             std::pair{&d.tags(), &back.tags()}}) {
    EXPECT_TRUE(std::equal(a->labels().begin(), a->labels().end(), b->labels().begin(),
                           b->labels().end()));
  }
}

TEST(WriteTriplesTest, RejectsUnrepresentableLabels) {
  const std::vector<Triple> triples{{"#user", "r", "t"}};
  const auto d = build_dataset(triples);
  std::ostringstream out;
  EXPECT_THROW(write_triples(out, d), ConfigError);

  const std::vector<Triple> tabbed{{"u", "r", "a\tb"}};
  EXPECT_THROW(write_triples(out, build_dataset(tabbed)), ConfigError);
}

TEST(ZipfTest, ProbabilitiesFollowPowerLaw) {
  const ZipfDistribution z(100, 1.5);
  double total = 0.0;
  for (std::size_t r = 0; r < z.size(); ++r) total += z.probability(r);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(z.probability(0) / z.probability(1), std::pow(2.0, 1.5), 1e-9);
}

// Least-squares slope of log(count) against log(rank) over ranks with at
// least 100 draws, from 10^6 draws.
double fitted_slope(double exponent) {
  const ZipfDistribution z(2000, exponent);
  auto rng = derive_stream(8, 0, StreamPurpose::test);
  std::vector<double> counts(z.size(), 0.0);
  for (int i = 0; i < 1'000'000; ++i) counts[z(rng)] += 1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t r = 0; r < counts.size() && counts[r] >= 100; ++r) {
    const double x = std::log(static_cast<double>(r + 1)), y = std::log(counts[r]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TEST(ZipfTest, EmpiricalSlopeMatchesExponent) {
  for (double s : {0.8, 1.1, 1.6}) {
    const double slope = fitted_slope(s);
    EXPECT_NEAR(-slope, s, 0.1 * s) << "exponent " << s;
  }
}

TEST(GeneratorTest, RejectsInvalidConfigs) {
  GeneratorConfig cfg;
  cfg.n_bookmarks = 0;
  EXPECT_THROW(generate(cfg), ConfigError);
  cfg = {};
  cfg.n_users = 2;
  cfg.n_resources = 3;
  cfg.n_bookmarks = 7;
  EXPECT_THROW(generate(cfg), ConfigError);
  cfg = {};
  cfg.min_tags_per_bookmark = 5;
  cfg.max_tags_per_bookmark = 4;
  EXPECT_THROW(generate(cfg), ConfigError);
  cfg = {};
  cfg.zipf_exponent = 0.0;
  EXPECT_THROW(generate(cfg), ConfigError);
  cfg = {};
  cfg.n_tags = 10;
  cfg.n_topics = 5;
  cfg.max_tags_per_bookmark = 3;
  EXPECT_THROW(generate(cfg), ConfigError);
  cfg = {};
  cfg.noise = 1.5;
  EXPECT_THROW(generate(cfg), ConfigError);
}

TEST(GeneratorTest, Deterministic) {
  GeneratorConfig cfg;
  cfg.n_bookmarks = 1500;
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  EXPECT_TRUE(std::equal(a.bookmarks().begin(), a.bookmarks().end(), b.bookmarks().begin(),
                         b.bookmarks().end()));
  cfg.seed += 1;
  const auto c = generate(cfg);
  EXPECT_FALSE(std::equal(a.bookmarks().begin(), a.bookmarks().end(), c.bookmarks().begin(),
                          c.bookmarks().end()));
}

TEST(GeneratorTest, SatisfiesDatasetInvariants) {
  GeneratorConfig cfg;
  cfg.n_users = 40;
  cfg.n_resources = 30;
  cfg.n_bookmarks = 1100;  // nearly exhausts the 1200 pairs
  cfg.n_tags = 200;
  cfg.n_topics = 4;
  const auto d = generate(cfg);
  EXPECT_EQ(d.bookmark_count(), cfg.n_bookmarks);
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& b : d.bookmarks()) {
    EXPECT_TRUE(pairs.emplace(b.user.value, b.resource.value).second);
    EXPECT_GE(b.tags.size(), cfg.min_tags_per_bookmark);
    EXPECT_LE(b.tags.size(), cfg.max_tags_per_bookmark);
    EXPECT_EQ(std::adjacent_find(b.tags.begin(), b.tags.end()), b.tags.end());
  }
}

TEST(GeneratorTest, SingleTopicDrawsIgnoreResources) {
  GeneratorConfig cfg;
  cfg.n_topics = 1;
  cfg.noise = 0.0;
  cfg.n_bookmarks = 500;
  EXPECT_EQ(generate(cfg).bookmark_count(), 500u);
}

TEST(GeneratorTest, DefaultsHaveLongTail) {
  const auto stats = dataset_stats(generate(GeneratorConfig{}));
  EXPECT_GT(stats.rare_tag_fraction, 0.5);
}

}  // namespace
}  // namespace folksim
