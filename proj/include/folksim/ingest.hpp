#pragma once

// Triple files and the synthetic folksonomy generator.
//
// A triple file is UTF-8 text with one assignment per line:
//   user <delim> resource <delim> tag
// Fields are trimmed. Blank lines and lines whose first non-blank character
// is '#' are ignored.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "folksim/dataset.hpp"
#include "folksim/error.hpp"
#include "folksim/random.hpp"

namespace folksim {

struct TripleFormat {
  char delimiter = '\t';
  /// ASCII-lowercase tag labels on read.
  bool case_fold_tags = false;
  /// Count and skip malformed lines instead of failing on the first one.
  bool skip_malformed = false;
};

struct ParseResult {
  std::vector<Triple> triples;
  std::size_t skipped = 0;
  std::vector<std::size_t> skipped_lines;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace detail

inline ParseResult parse_triples(std::istream& in, const TripleFormat& format = {}) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;

    std::string_view fields[3];
    std::size_t count = 0;
    std::string_view rest = body;
    while (true) {
      const auto pos = rest.find(format.delimiter);
      if (count < 3) fields[count] = detail::trim(rest.substr(0, pos));
      ++count;
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }

    const char* problem = nullptr;
    if (count != 3) {
      problem = "expected 3 fields";
    } else if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      problem = "empty field";
    }
    if (problem) {
      if (!format.skip_malformed)
        throw ParseError(std::string(problem) + " (got " + std::to_string(count) + ")", line_no);
      ++result.skipped;
      result.skipped_lines.push_back(line_no);
      continue;
    }
    result.triples.push_back(Triple{std::string(fields[0]), std::string(fields[1]),
                                    format.case_fold_tags ? detail::ascii_lower(fields[2])
                                                          : std::string(fields[2]),
                                    line_no});
  }
  if (in.bad()) throw IoError("read failure after line " + std::to_string(line_no));
  return result;
}

inline FolksonomyDataset read_dataset(const std::string& path, const TripleFormat& format = {},
                                      ParseResult* parse_info = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  auto parsed = parse_triples(in, format);
  auto dataset = build_dataset(parsed.triples);
  if (parse_info) *parse_info = std::move(parsed);
  return dataset;
}

/// Writes one line per (bookmark, tag), bookmarks in order. Labels that would
/// not survive a re-parse are rejected.
inline void write_triples(std::ostream& os, const FolksonomyDataset& d, char delimiter = '\t') {
  const auto check = [delimiter](const std::string& label, bool first) {
    if (label.empty() || label.find(delimiter) != std::string::npos ||
        label.find('\n') != std::string::npos || detail::trim(label) != label ||
        (first && label.front() == '#'))
      throw ConfigError("label cannot be written as a triple field: '" + label + "'");
  };
  for (const auto& b : d.bookmarks()) {
    const auto& user = d.users().label(b.user.value);
    const auto& resource = d.resources().label(b.resource.value);
    check(user, true);
    check(resource, false);
    for (auto t : b.tags) {
      const auto& tag = d.tags().label(t.value);
      check(tag, false);
      os << user << delimiter << resource << delimiter << tag << '\n';
    }
  }
  if (!os) throw IoError("failed writing triples");
}

/// P(rank r) proportional to r^-exponent over ranks 1..n; draws return r - 1.
class ZipfDistribution {
 public:
  ZipfDistribution(std::size_t n, double exponent) : cdf_(n) {
    if (n == 0) throw ConfigError("Zipf support must be non-empty");
    if (!(exponent > 0.0)) throw ConfigError("Zipf exponent must be positive");
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      acc += std::pow(static_cast<double>(r + 1), -exponent);
      cdf_[r] = acc;
    }
  }

  std::size_t operator()(Engine& rng) const {
    const double u = uniform_unit(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

  double probability(std::size_t rank) const {
    const double lo = rank == 0 ? 0.0 : cdf_[rank - 1];
    return (cdf_[rank] - lo) / cdf_.back();
  }

  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

struct GeneratorConfig {
  std::size_t n_users = 1500;
  std::size_t n_resources = 2000;
  std::size_t n_tags = 3000;
  std::size_t n_bookmarks = 2500;
  std::size_t min_tags_per_bookmark = 1;
  std::size_t max_tags_per_bookmark = 8;
  double zipf_exponent = 1.1;
  /// Latent topics. Tag i belongs to topic i % n_topics; each resource gets
  /// one topic. With one topic tags are drawn independently of resources.
  std::size_t n_topics = 50;
  /// Share of tag draws taken from the global law instead of the topic.
  double noise = 0.3;
  std::uint64_t seed = 42;

  void validate() const {
    if (n_users < 1 || n_resources < 1 || n_tags < 1 || n_bookmarks < 1 || n_topics < 1)
      throw ConfigError("generator counts must all be >= 1");
    if (min_tags_per_bookmark < 1 || min_tags_per_bookmark > max_tags_per_bookmark)
      throw ConfigError("tags-per-bookmark range must satisfy 1 <= min <= max");
    if (max_tags_per_bookmark > n_tags / n_topics)
      throw ConfigError("max tags per bookmark exceeds the number of tags in a topic");
    if (!(zipf_exponent > 0.0) || !std::isfinite(zipf_exponent))
      throw ConfigError("Zipf exponent must be a positive finite number");
    if (!(noise >= 0.0 && noise <= 1.0)) throw ConfigError("noise must lie in [0, 1]");
    if (static_cast<unsigned __int128>(n_bookmarks) >
        static_cast<unsigned __int128>(n_users) * n_resources)
      throw ConfigError("more bookmarks requested than distinct (user, resource) pairs");
  }
};

/// Seeded synthetic folksonomy. (user, resource) pairs are drawn uniformly
/// without replacement. Each bookmark gets a uniformly drawn number of tags,
/// sampled without replacement: with probability 1 - noise from a Zipf law
/// over the tags of the resource's topic (ordered by id), otherwise from a
/// Zipf law over all tag ids. Labels are "u<i>", "r<i>" and "t<i+1>".
inline FolksonomyDataset generate(const GeneratorConfig& cfg) {
  cfg.validate();
  auto rng = derive_stream(cfg.seed, 0, StreamPurpose::generate);

  std::vector<std::size_t> resource_topic(cfg.n_resources);
  for (auto& t : resource_topic) t = uniform_below(rng, cfg.n_topics);

  // Floyd's sampling of n_bookmarks distinct pair indices.
  const std::uint64_t space = std::uint64_t{cfg.n_users} * cfg.n_resources;
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(cfg.n_bookmarks * 2);
  std::vector<std::uint64_t> pairs;
  pairs.reserve(cfg.n_bookmarks);
  for (std::uint64_t j = space - cfg.n_bookmarks; j < space; ++j) {
    const auto t = uniform_below(rng, j + 1);
    const auto pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    pairs.push_back(pick);
  }

  const ZipfDistribution global(cfg.n_tags, cfg.zipf_exponent);
  std::vector<ZipfDistribution> topical;
  for (std::size_t c = 0; c < cfg.n_topics; ++c)
    topical.emplace_back((cfg.n_tags - c + cfg.n_topics - 1) / cfg.n_topics, cfg.zipf_exponent);

  const auto span = cfg.max_tags_per_bookmark - cfg.min_tags_per_bookmark + 1;
  DatasetBuilder builder;
  std::vector<std::size_t> tags;
  for (auto p : pairs) {
    const auto r = p % cfg.n_resources;
    const auto user = "u" + std::to_string(p / cfg.n_resources);
    const auto resource = "r" + std::to_string(r);
    const auto topic = resource_topic[r];
    const auto count = cfg.min_tags_per_bookmark + uniform_below(rng, span);
    tags.clear();
    while (tags.size() < count) {
      const bool off_topic = cfg.noise > 0.0 && uniform_unit(rng) < cfg.noise;
      const auto tag = off_topic ? global(rng) : topic + cfg.n_topics * topical[topic](rng);
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
    }
    for (auto tag : tags) builder.add(user, resource, "t" + std::to_string(tag + 1));
  }
  return std::move(builder).build();
}

}  // namespace folksim
