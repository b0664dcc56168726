#pragma once

// Density-matrix documents:
//
//   {"rho": [[[re, im], [re, im], [re, im], [re, im]], ... 4 rows]}
//
// in the {HH, HV, VH, VV} basis. Parsed matrices must satisfy every
// TwoQubitState invariant.

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "collectibility/error.hpp"
#include "collectibility/linalg.hpp"
#include "collectibility/qstate.hpp"

namespace collectibility::io {

inline TwoQubitState parse_density_matrix(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("rho")) {
    fail_validation("density matrix document must be an object with key \"rho\"");
  }
  const auto& rows = doc.at("rho");
  if (!rows.is_array() || rows.size() != 4) {
    fail_validation("\"rho\" must be an array of 4 rows");
  }
  Matrix4c rho;
  for (int i = 0; i < 4; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 4) {
      fail_validation("\"rho\" row " + std::to_string(i) + " must hold 4 entries");
    }
    for (int j = 0; j < 4; ++j) {
      const auto& entry = row[static_cast<std::size_t>(j)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        fail_validation("\"rho\"[" + std::to_string(i) + "][" + std::to_string(j) +
                        "] must be a [re, im] number pair");
      }
      rho(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return TwoQubitState::from_matrix(rho);
}

inline TwoQubitState read_density_matrix(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail_validation(std::string("density matrix document is not valid JSON: ") + e.what());
  }
  return parse_density_matrix(doc);
}

inline TwoQubitState read_density_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail_validation("cannot open density matrix file: " + path);
  }
  return read_density_matrix(in);
}

inline nlohmann::json density_matrix_json(const TwoQubitState& state) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) {
      const Complex z = state.matrix()(i, j);
      row.push_back({z.real(), z.imag()});
    }
    rows.push_back(row);
  }
  return {{"rho", rows}};
}

}  // namespace collectibility::io
