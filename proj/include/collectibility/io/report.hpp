#pragma once

// Structured command reports rendered as an aligned text table, CSV or
// JSON. Reals are printed in shortest round-trip form in CSV and JSON so
// both carry identical values.

#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "collectibility/photonics/counts_io.hpp"

namespace collectibility::io {

using Scalar = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Scalar>> rows;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, Scalar>> fields;
  std::vector<Table> tables;
  std::vector<std::string> notes;

  void add(std::string key, Scalar value) {
    fields.emplace_back(std::move(key), std::move(value));
  }

  const Scalar* field(std::string_view key) const {
    for (const auto& [k, v] : fields) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  const Table* table(std::string_view name) const {
    for (const auto& t : tables) {
      if (t.name == name) return &t;
    }
    return nullptr;
  }
};

enum class Format { table, csv, json };

inline std::optional<Format> format_from_string(std::string_view s) {
  if (s == "table" || s == "human") return Format::table;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return std::nullopt;
}

namespace detail {

inline std::string exact_text(const Scalar& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return photonics::format_real(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          return std::to_string(x);
        }
      },
      v);
}

inline std::string human_text(const Scalar& v) {
  if (const double* d = std::get_if<double>(&v)) {
    std::ostringstream s;
    s << std::setprecision(6) << *d;
    return s.str();
  }
  return exact_text(v);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline nlohmann::ordered_json to_json(const Scalar& v) {
  return std::visit([](const auto& x) { return nlohmann::ordered_json(x); }, v);
}

}  // namespace detail

inline void render_table(std::ostream& out, const Report& r) {
  out << "collectibility " << r.command << '\n';
  std::size_t width = 0;
  for (const auto& [k, v] : r.fields) width = std::max(width, k.size());
  for (const auto& [k, v] : r.fields) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << k << " : "
        << detail::human_text(v) << '\n';
  }
  for (const auto& t : r.tables) {
    out << '\n' << "[" << t.name << "]\n";
    std::vector<std::size_t> widths(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) widths[c] = t.columns[c].size();
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : t.rows) {
      std::vector<std::string> line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        line.push_back(detail::human_text(row[c]));
        widths[c] = std::max(widths[c], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    const auto emit = [&](const std::vector<std::string>& line) {
      out << ' ';
      for (std::size_t c = 0; c < line.size(); ++c) {
        out << ' ' << std::right << std::setw(static_cast<int>(widths[c])) << line[c];
      }
      out << '\n';
    };
    emit(t.columns);
    for (const auto& line : cells) emit(line);
  }
  if (!r.notes.empty()) {
    out << '\n';
    for (const auto& n : r.notes) out << "note: " << n << '\n';
  }
}

/// key,value block, then one block per table introduced by "# <name>".
inline void render_csv(std::ostream& out, const Report& r) {
  out << "key,value\n";
  out << "command," << detail::csv_escape(r.command) << '\n';
  for (const auto& [k, v] : r.fields) {
    out << detail::csv_escape(k) << ',' << detail::csv_escape(detail::exact_text(v)) << '\n';
  }
  for (const auto& n : r.notes) {
    out << "note," << detail::csv_escape(n) << '\n';
  }
  for (const auto& t : r.tables) {
    out << "\n# " << t.name << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      out << (c ? "," : "") << detail::csv_escape(t.columns[c]);
    }
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c ? "," : "") << detail::csv_escape(detail::exact_text(row[c]));
      }
      out << '\n';
    }
  }
}

inline nlohmann::ordered_json report_json(const Report& r) {
  nlohmann::ordered_json doc;
  doc["command"] = r.command;
  for (const auto& [k, v] : r.fields) doc[k] = detail::to_json(v);
  if (!r.tables.empty()) {
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const auto& t : r.tables) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = detail::to_json(row[c]);
        rows.push_back(std::move(obj));
      }
      tables[t.name] = std::move(rows);
    }
    doc["tables"] = std::move(tables);
  }
  doc["notes"] = r.notes;
  return doc;
}

inline void render(std::ostream& out, const Report& r, Format format) {
  switch (format) {
    case Format::table: render_table(out, r); break;
    case Format::csv: render_csv(out, r); break;
    case Format::json: out << report_json(r).dump(2) << '\n'; break;
  }
}

}  // namespace collectibility::io
