#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collectibility/error.hpp"
#include "collectibility/qstate.hpp"

namespace collectibility::photonics {

enum class Polarization { H, V, D };

inline char to_char(Polarization p) {
  switch (p) {
    case Polarization::H: return 'H';
    case Polarization::V: return 'V';
    case Polarization::D: return 'D';
  }
  return '?';
}

inline std::optional<Polarization> polarization_from_char(char c) {
  switch (c) {
    case 'H': return Polarization::H;
    case 'V': return Polarization::V;
    case 'D': return Polarization::D;
    default: return std::nullopt;
  }
}

/// Projection of a photon onto H, V or D expressed as a branch of a local
/// measurement basis on qubit A.
inline std::pair<ProjectionSetting, Branch> as_projection(Polarization p) {
  switch (p) {
    case Polarization::H: return {ProjectionSetting::rectilinear(), Branch::plus};
    case Polarization::V: return {ProjectionSetting::rectilinear(), Branch::minus};
    case Polarization::D: return {ProjectionSetting::diagonal(), Branch::plus};
  }
  return {ProjectionSetting::rectilinear(), Branch::plus};
}

/// Polarizations onto which photons 1 (copy I) and 3 (copy II) are projected.
struct ProjectionPair {
  Polarization first = Polarization::H;
  Polarization second = Polarization::H;

  std::string label() const { return {to_char(first), to_char(second)}; }

  static std::optional<ProjectionPair> parse(std::string_view text) {
    if (text.size() != 2) {
      return std::nullopt;
    }
    const auto a = polarization_from_char(text[0]);
    const auto b = polarization_from_char(text[1]);
    if (!a || !b) {
      return std::nullopt;
    }
    return ProjectionPair{*a, *b};
  }

  auto operator<=>(const ProjectionPair&) const = default;
};

inline constexpr ProjectionPair kPairHH{Polarization::H, Polarization::H};
inline constexpr ProjectionPair kPairVV{Polarization::V, Polarization::V};
inline constexpr ProjectionPair kPairHV{Polarization::H, Polarization::V};
inline constexpr ProjectionPair kPairDD{Polarization::D, Polarization::D};

/// Settings entering the witness, in campaign order.
inline constexpr std::array<ProjectionPair, 4> kWitnessPairs{kPairHH, kPairVV, kPairHV, kPairDD};
/// Same-polarization settings used to calibrate the parasitic level.
inline constexpr std::array<ProjectionPair, 2> kCalibrationPairs{kPairHH, kPairVV};

enum class RecordRole { measurement, calibration };

/// Counts for one projection pair. cc_a: photons 2 and 4 overlapped in time
/// on the beam splitter; cc_b: not overlapped; cc_n: parasitic
/// (non-interfering) level subtracted from both. Counts are real-valued so
/// that interpolated datasets remain representable.
struct CoincidenceRecord {
  ProjectionPair pair;
  RecordRole role = RecordRole::measurement;
  double cc_a = 0.0;
  double cc_b = 0.0;
  double cc_n = 0.0;
  double exposure = 0.0;
  std::uint64_t seed = 0;

  /// File token: "HH" for measurements, "HH:cal" for calibration rows.
  std::string token() const {
    return role == RecordRole::calibration ? pair.label() + ":cal" : pair.label();
  }

  bool operator==(const CoincidenceRecord&) const = default;
};

struct CountsDataset {
  std::vector<CoincidenceRecord> records;

  const CoincidenceRecord* find(ProjectionPair pair,
                                RecordRole role = RecordRole::measurement) const {
    for (const auto& r : records) {
      if (r.pair == pair && r.role == role) {
        return &r;
      }
    }
    return nullptr;
  }

  std::vector<const CoincidenceRecord*> calibration() const {
    std::vector<const CoincidenceRecord*> out;
    for (const auto& r : records) {
      if (r.role == RecordRole::calibration) {
        out.push_back(&r);
      }
    }
    return out;
  }

  bool operator==(const CountsDataset&) const = default;
};

}  // namespace collectibility::photonics
