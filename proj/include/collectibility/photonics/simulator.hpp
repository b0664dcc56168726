#pragma once

// Monte Carlo model of the four-photon coincidence experiment.
//
// Two copies of rho are emitted per trial. Photon 1 (copy I) and photon 3
// (copy II) are projected locally; photons 2 and 4 meet on a balanced beam
// splitter. A trial counts when both projections succeed and photons 2 and
// 4 leave through different ports (anticoalescence):
//   * overlapped arm, interfering (probability nu): the pair projects onto
//     the singlet with probability tr[P- (sigma_I (x) sigma_J)];
//   * overlapped arm, non-interfering (1 - nu), or separated arm: the
//     photons are distinguishable and split with probability 1/2.
// The non-interfering share of the overlapped arm is the parasitic level
// ccN = (1 - nu) ccB.

#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "collectibility/error.hpp"
#include "collectibility/photonics/records.hpp"
#include "collectibility/photonics/reduction.hpp"
#include "collectibility/qstate.hpp"
#include "collectibility/witness.hpp"

namespace collectibility::photonics {

inline constexpr std::uint64_t kDefaultSeed = 20160901;
inline constexpr std::uint64_t kDefaultTrials = 1'000'000;

/// Two-photon mode overlap on the beam splitter.
struct NoiseModel {
  double overlap = 1.0;

  /// From a relative parasitic rate ccN/ccB = 1 - nu.
  static NoiseModel from_parasitic_ratio(double ratio) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) {
      fail_validation("parasitic ratio ccN/ccB must lie in [0, 1]");
    }
    return {1.0 - ratio};
  }

  double parasitic_ratio() const { return 1.0 - overlap; }

  void validate() const {
    if (!(overlap >= 0.0 && overlap <= 1.0)) {
      fail_validation("mode overlap nu must lie in [0, 1]");
    }
  }
};

/// Relative parasitic levels observed for the Bell, separable and maximally
/// mixed sources.
inline constexpr double kParasiticBell = 0.57;
inline constexpr double kParasiticSeparable = 0.49;
inline constexpr double kParasiticMixed = 0.85;

inline std::optional<NoiseModel> noise_preset(std::string_view name) {
  if (name == "ideal") return NoiseModel{1.0};
  if (name == "bell") return NoiseModel::from_parasitic_ratio(kParasiticBell);
  if (name == "separable") return NoiseModel::from_parasitic_ratio(kParasiticSeparable);
  if (name == "mixed") return NoiseModel::from_parasitic_ratio(kParasiticMixed);
  return std::nullopt;
}

enum class Arm { overlapped, separated };

/// How the parasitic level is calibrated.
///  same_projection: photons 1 and 3 projected onto HH and VV, overlapped
///    counts of the state under test taken as pure noise. Exact only when
///    the heralded photons are identical pure states at those settings.
///  polarized_reference: the same settings with photons 2 and 4 filtered to
///    identical polarization, so every anticoalescence is parasitic.
enum class Calibration { same_projection, polarized_reference };

inline const char* to_string(Calibration c) {
  return c == Calibration::same_projection ? "same-projection" : "polarized-reference";
}

inline std::optional<Calibration> calibration_from_string(std::string_view s) {
  if (s == "same-projection") return Calibration::same_projection;
  if (s == "polarized-reference") return Calibration::polarized_reference;
  return std::nullopt;
}

/// Independent stream per (campaign seed, setting index, arm); results do
/// not depend on scheduling order.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint32_t setting, Arm arm) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL),
                    static_cast<std::uint32_t>(seed >> 32), setting,
                    static_cast<std::uint32_t>(arm == Arm::overlapped ? 0 : 1)};
  return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every
/// standard library.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Per-trial probabilities of one setting.
struct SettingModel {
  double herald = 0.0;     // p_I * p_J
  double singlet = 0.0;    // tr[P- (sigma_I (x) sigma_J)]
};

inline SettingModel setting_model(const TwoQubitState& rho, ProjectionPair pair,
                                  bool polarized_reference = false) {
  const auto [setting_i, branch_i] = as_projection(pair.first);
  const auto [setting_j, branch_j] = as_projection(pair.second);
  const ConditionalState ci = conditional_state(rho, setting_i, branch_i);
  const ConditionalState cj = conditional_state(rho, setting_j, branch_j);
  SettingModel m;
  m.herald = std::max(ci.probability, 0.0) * std::max(cj.probability, 0.0);
  if (!polarized_reference && !ci.degenerate() && !cj.degenerate()) {
    m.singlet = singlet_overlap(ci.normalized(), cj.normalized());
  }
  return m;
}

/// Number of successes in `trials` Bernoulli draws.
inline std::uint64_t bernoulli_count(double probability, std::uint64_t trials,
                                     std::mt19937_64& rng) {
  std::uint64_t count = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (unit_uniform(rng) < probability) ++count;
  }
  return count;
}

/// Bernoulli trials for one arm of one setting; returns the count.
inline std::uint64_t simulate_arm(const SettingModel& model, Arm arm, const NoiseModel& noise,
                                  std::uint64_t trials, std::mt19937_64& rng) {
  std::uint64_t count = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (unit_uniform(rng) >= model.herald) continue;
    double q = 0.5;
    if (arm == Arm::overlapped && unit_uniform(rng) < noise.overlap) {
      q = model.singlet;
    }
    if (unit_uniform(rng) < q) ++count;
  }
  return count;
}

/// Both arms of one setting; cc_n is left at zero for the caller to fill.
inline CoincidenceRecord simulate_setting(const TwoQubitState& rho, ProjectionPair pair,
                                          const NoiseModel& noise, std::uint64_t trials,
                                          std::uint64_t seed, std::uint32_t setting_index,
                                          RecordRole role = RecordRole::measurement,
                                          bool polarized_reference = false) {
  if (trials == 0) {
    fail_validation("trials must be positive");
  }
  noise.validate();
  const SettingModel model = setting_model(rho, pair, polarized_reference);
  auto rng_a = stream(seed, setting_index, Arm::overlapped);
  auto rng_b = stream(seed, setting_index, Arm::separated);
  CoincidenceRecord rec;
  rec.pair = pair;
  rec.role = role;
  rec.cc_a = static_cast<double>(simulate_arm(model, Arm::overlapped, noise, trials, rng_a));
  rec.cc_b = static_cast<double>(simulate_arm(model, Arm::separated, noise, trials, rng_b));
  rec.exposure = static_cast<double>(trials);
  rec.seed = seed;
  return rec;
}

/// Two-fold product synthesis: counts of photons 1&3 (heralding) and of
/// photons 2&4 (splitter) are recorded separately and multiplied, divided
/// by the exposure. Equivalent to four-fold counting only for product
/// states, where the two photon pairs are uncorrelated.
inline CoincidenceRecord simulate_setting_twofold(const TwoQubitState& rho, ProjectionPair pair,
                                                  const NoiseModel& noise, std::uint64_t trials,
                                                  std::uint64_t seed, std::uint32_t setting_index,
                                                  RecordRole role = RecordRole::measurement,
                                                  bool polarized_reference = false) {
  if (trials == 0) {
    fail_validation("trials must be positive");
  }
  noise.validate();
  const Matrix2c rho_a = rho.reduced_first();
  const Matrix2c rho_b = rho.reduced_second();
  if ((rho.matrix() - Matrix4c(kron(rho_a, rho_b))).cwiseAbs().maxCoeff() > 1e-12) {
    fail_validation("two-fold product synthesis requires a product state");
  }
  const SettingModel full = setting_model(rho, pair, polarized_reference);
  const auto [setting_i, branch_i] = as_projection(pair.first);
  const auto [setting_j, branch_j] = as_projection(pair.second);
  const auto marginal = [&rho_a](const ProjectionSetting& s, Branch b) {
    const Vector2c v = s.vector(b);
    return std::max((v.adjoint() * rho_a * v)(0, 0).real(), 0.0);
  };
  const double herald = marginal(setting_i, branch_i) * marginal(setting_j, branch_j);
  const SettingModel splitter{1.0, full.singlet};
  const auto twofold = [&](Arm arm) {
    auto rng = stream(seed, setting_index, arm);
    const double cc13 = static_cast<double>(bernoulli_count(herald, trials, rng));
    const double cc24 = static_cast<double>(simulate_arm(splitter, arm, noise, trials, rng));
    return cc13 * cc24 / static_cast<double>(trials);
  };
  CoincidenceRecord rec;
  rec.pair = pair;
  rec.role = role;
  rec.cc_a = twofold(Arm::overlapped);
  rec.cc_b = twofold(Arm::separated);
  rec.exposure = static_cast<double>(trials);
  rec.seed = seed;
  return rec;
}

struct CampaignConfig {
  NoiseModel noise;
  double xi = 0.5;
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  Calibration calibration = Calibration::polarized_reference;
  bool twofold_product = false;
  ReductionOptions reduction;
};

/// Calibration measurement: overlapped and separated counts at HH and VV.
struct NoiseEstimate {
  Calibration method = Calibration::same_projection;
  std::array<CoincidenceRecord, 2> records;

  /// Average overlapped count of the calibration settings.
  double count() const { return 0.5 * (records[0].cc_a + records[1].cc_a); }
  /// Pooled ccN/ccB.
  double relative() const {
    return noise_level({&records[0], &records[1]});
  }
  /// Poisson standard error of relative().
  double relative_error() const {
    const double a = records[0].cc_a + records[1].cc_a;
    const double b = records[0].cc_b + records[1].cc_b;
    if (!(b > 0.0)) return 0.0;
    return (a / b) * std::sqrt((a > 0.0 ? 1.0 / a : 0.0) + 1.0 / b);
  }
};

inline constexpr std::uint32_t kCalibrationStreamBase = 4;

inline NoiseEstimate estimate_ccN(const TwoQubitState& rho, const NoiseModel& noise,
                                  std::uint64_t trials, std::uint64_t seed,
                                  Calibration method = Calibration::same_projection,
                                  bool twofold_product = false) {
  NoiseEstimate est;
  est.method = method;
  const bool polarized = method == Calibration::polarized_reference;
  const std::uint32_t base = kCalibrationStreamBase + (polarized ? 2u : 0u);
  for (std::uint32_t j = 0; j < 2; ++j) {
    est.records[j] =
        twofold_product
            ? simulate_setting_twofold(rho, kCalibrationPairs[j], noise, trials, seed,
                                       base + j, RecordRole::calibration, polarized)
            : simulate_setting(rho, kCalibrationPairs[j], noise, trials, seed, base + j,
                               RecordRole::calibration, polarized);
  }
  return est;
}

struct CampaignResult {
  CountsDataset dataset;
  WitnessEstimate estimate;
  NoiseEstimate same_projection;
  NoiseEstimate polarized_reference;
  /// Present when the same-projection level exceeds the polarized
  /// reference by more than three combined standard errors: the state has
  /// genuine anticoalescence at HH/VV and same-projection calibration would
  /// subtract signal.
  std::optional<std::string> calibration_note;
};

/// Simulates the four witness settings plus both calibrations, subtracts
/// the chosen calibration level and reduces the counts to W.
inline CampaignResult run_campaign(const TwoQubitState& rho, const CampaignConfig& config) {
  config.noise.validate();
  if (config.trials == 0) {
    fail_validation("trials must be positive");
  }
  const auto measure = [&](std::uint32_t index) {
    return config.twofold_product
               ? simulate_setting_twofold(rho, kWitnessPairs[index], config.noise,
                                          config.trials, config.seed, index)
               : simulate_setting(rho, kWitnessPairs[index], config.noise, config.trials,
                                  config.seed, index);
  };
  std::vector<std::future<CoincidenceRecord>> jobs;
  for (std::uint32_t i = 0; i < kWitnessPairs.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, measure, i));
  }
  auto same = std::async(std::launch::async, [&] {
    return estimate_ccN(rho, config.noise, config.trials, config.seed,
                        Calibration::same_projection, config.twofold_product);
  });
  auto reference = std::async(std::launch::async, [&] {
    return estimate_ccN(rho, config.noise, config.trials, config.seed,
                        Calibration::polarized_reference, config.twofold_product);
  });

  CampaignResult result;
  for (auto& job : jobs) {
    result.dataset.records.push_back(job.get());
  }
  result.same_projection = same.get();
  result.polarized_reference = reference.get();

  const NoiseEstimate& chosen = config.calibration == Calibration::same_projection
                                    ? result.same_projection
                                    : result.polarized_reference;
  const double level = chosen.relative();
  for (auto& rec : result.dataset.records) {
    rec.cc_n = level * rec.cc_b;
  }
  for (const auto& rec : chosen.records) {
    result.dataset.records.push_back(rec);
  }

  const double bias = result.same_projection.relative() - result.polarized_reference.relative();
  const double bias_error = std::hypot(result.same_projection.relative_error(),
                                       result.polarized_reference.relative_error());
  if (bias > 3.0 * bias_error) {
    std::string note = "calibration bias: same-projection ccN/ccB = " +
                       std::to_string(result.same_projection.relative()) +
                       " exceeds polarized-reference " +
                       std::to_string(result.polarized_reference.relative()) +
                       "; the HH/VV calibration settings carry genuine anticoalescence for this state";
    note += config.calibration == Calibration::same_projection
                ? ", so the subtracted level removes signal and W is biased"
                : ", so the polarized reference level was used";
    result.calibration_note = std::move(note);
  }

  result.estimate = witness_from_counts(result.dataset, config.xi, config.reduction);
  return result;
}

}  // namespace collectibility::photonics
