#pragma once

// Counts dataset text format, one row per setting:
//
//   pair,cc_a,cc_b,cc_n,exposure,seed
//   HH,0,125012,0,1000000,20160901
//   HH:cal,...
//
// `pair` is two of {H, V, D}; a ":cal" suffix marks a calibration row.
// Reals are written in shortest round-trip form, so write -> read is
// lossless. Blank lines and lines starting with '#' are ignored.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "collectibility/error.hpp"
#include "collectibility/photonics/records.hpp"

namespace collectibility::photonics {

inline constexpr std::array<std::string_view, 6> kCountsColumns{
    "pair", "cc_a", "cc_b", "cc_n", "exposure", "seed"};

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_real(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

inline void write_counts(std::ostream& out, const CountsDataset& data) {
  for (std::size_t i = 0; i < kCountsColumns.size(); ++i) {
    out << (i ? "," : "") << kCountsColumns[i];
  }
  out << '\n';
  for (const auto& r : data.records) {
    out << r.token() << ',' << format_real(r.cc_a) << ',' << format_real(r.cc_b) << ','
        << format_real(r.cc_n) << ',' << format_real(r.exposure) << ',' << r.seed << '\n';
  }
}

inline void write_counts_file(const std::string& path, const CountsDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail_validation("cannot open counts file for writing: " + path);
  }
  write_counts(out, data);
  if (!out) {
    fail_validation("failed writing counts file: " + path);
  }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view text, std::size_t row, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    fail_validation("counts file row " + std::to_string(row) + ", column " +
                    std::string(column) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

/// Parses a counts dataset. Schema violations are reported by row and column.
inline CountsDataset read_counts(std::istream& in) {
  CountsDataset data;
  std::set<std::string> seen;
  std::string line;
  std::size_t row = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = detail::split_fields(view);
    if (!header) {
      if (fields.size() != kCountsColumns.size() ||
          !std::equal(fields.begin(), fields.end(), kCountsColumns.begin())) {
        fail_validation("counts file row " + std::to_string(row) +
                        ": header must be 'pair,cc_a,cc_b,cc_n,exposure,seed'");
      }
      header = true;
      continue;
    }
    if (fields.size() != kCountsColumns.size()) {
      fail_validation("counts file row " + std::to_string(row) + ": expected " +
                      std::to_string(kCountsColumns.size()) + " columns, found " +
                      std::to_string(fields.size()));
    }
    CoincidenceRecord rec;
    std::string_view token = fields[0];
    if (token.ends_with(":cal")) {
      rec.role = RecordRole::calibration;
      token.remove_suffix(4);
    }
    const auto pair = ProjectionPair::parse(token);
    if (!pair) {
      fail_validation("counts file row " + std::to_string(row) +
                      ", column pair: unknown setting '" + std::string(fields[0]) + "'");
    }
    rec.pair = *pair;
    rec.cc_a = detail::parse_field<double>(fields[1], row, "cc_a");
    rec.cc_b = detail::parse_field<double>(fields[2], row, "cc_b");
    rec.cc_n = detail::parse_field<double>(fields[3], row, "cc_n");
    rec.exposure = detail::parse_field<double>(fields[4], row, "exposure");
    rec.seed = detail::parse_field<std::uint64_t>(fields[5], row, "seed");
    const std::array<std::pair<double, std::string_view>, 4> checks{
        {{rec.cc_a, "cc_a"}, {rec.cc_b, "cc_b"}, {rec.cc_n, "cc_n"}, {rec.exposure, "exposure"}}};
    for (const auto& [value, column] : checks) {
      if (!(value >= 0.0) || !std::isfinite(value)) {
        fail_validation("counts file row " + std::to_string(row) + ", column " +
                        std::string(column) + ": counts must be finite and nonnegative");
      }
    }
    if (!seen.insert(rec.token()).second) {
      fail_validation("counts file row " + std::to_string(row) + ", column pair: duplicate setting " +
                      rec.token());
    }
    data.records.push_back(rec);
  }
  if (!header) {
    fail_validation("counts file is empty: missing header");
  }
  return data;
}

inline CountsDataset read_counts_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail_validation("cannot open counts file: " + path);
  }
  return read_counts(in);
}

}  // namespace collectibility::photonics
