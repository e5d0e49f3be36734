#pragma once

// Similarity matrix export.
//
// CSV: first row is an empty cell followed by the labels; each following row
// is a label followed by that row's values.
//
// Snapshot: little-endian uint64 dimension, then the lower triangle
// (row i, columns 0..i) as little-endian IEEE-754 doubles, row-major.

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "folksim/error.hpp"
#include "folksim/similarity.hpp"

namespace folksim {

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_matrix_csv(std::ostream& os, const SimilarityMatrix& m,
                             std::span<const std::string> labels) {
  if (labels.size() != m.dimension()) throw ConfigError("label count does not match matrix");
  for (const auto& l : labels) os << ',' << csv_field(l);
  os << '\n';
  for (std::size_t a = 0; a < m.dimension(); ++a) {
    os << csv_field(labels[a]);
    for (double v : m.row(a)) os << ',' << format_double(v);
    os << '\n';
  }
}

namespace detail {

inline void put_le64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t get_le64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw IoError("truncated similarity snapshot");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

}  // namespace detail

inline void write_snapshot(std::ostream& os, const SimilarityMatrix& m) {
  detail::put_le64(os, m.dimension());
  for (std::size_t a = 0; a < m.dimension(); ++a)
    for (std::size_t b = 0; b <= a; ++b) detail::put_le64(os, std::bit_cast<std::uint64_t>(m(a, b)));
  if (!os) throw IoError("failed writing similarity snapshot");
}

/// Reads a snapshot; ids with a zero diagonal come back dead.
inline SimilarityMatrix read_snapshot(std::istream& is) {
  const auto dim = detail::get_le64(is);
  if (dim > (std::uint64_t{1} << 20)) throw IoError("implausible snapshot dimension");
  SimilarityMatrix m(static_cast<std::size_t>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      const double v = std::bit_cast<double>(detail::get_le64(is));
      m(a, b) = v;
      m(b, a) = v;
    }
  }
  for (std::size_t a = 0; a < dim; ++a) m.set_live(a, m(a, a) != 0.0);
  return m;
}

}  // namespace folksim
