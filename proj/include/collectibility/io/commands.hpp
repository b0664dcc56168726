#pragma once

// Command implementations behind the `collectibility` tool. Each command
// turns a RunConfig into a Report (plus, for `simulate`, a counts file);
// `run` renders the report and maps errors to exit codes:
//   0 success, 1 input or validation error, 2 numerical degeneracy.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "collectibility/error.hpp"
#include "collectibility/io/density_matrix.hpp"
#include "collectibility/io/report.hpp"
#include "collectibility/photonics/counts_io.hpp"
#include "collectibility/photonics/reduction.hpp"
#include "collectibility/photonics/simulator.hpp"
#include "collectibility/qstate.hpp"
#include "collectibility/witness.hpp"

#ifndef COLLECTIBILITY_VERSION
#define COLLECTIBILITY_VERSION "1.0.0"
#endif

namespace collectibility::io {

inline constexpr std::string_view kVersion = COLLECTIBILITY_VERSION;
/// Relative output paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "COLLECTIBILITY_OUTPUT_DIR";

enum class Command { witness, collectibility, simulate, werner_sweep, reduce };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::witness: return "witness";
    case Command::collectibility: return "collectibility";
    case Command::simulate: return "simulate";
    case Command::werner_sweep: return "werner-sweep";
    case Command::reduce: return "reduce";
  }
  return "?";
}

struct RunConfig {
  Command command = Command::witness;
  /// Preset (bell, separable, mixed, werner:<p>) or density-matrix path.
  std::string state = "bell";
  std::optional<std::string> noise_preset;
  std::optional<double> nu;
  std::optional<double> xi;
  std::uint64_t trials = photonics::kDefaultTrials;
  std::uint64_t seed = photonics::kDefaultSeed;
  Format format = Format::table;
  std::string output;
  std::string counts;
  std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  photonics::Calibration calibration = photonics::Calibration::polarized_reference;
  bool twofold_product = false;
  std::size_t profile_points = 181;

  /// Every setting that influences the report, one key=value per line.
  std::string canonical() const {
    std::ostringstream s;
    s << "command=" << to_string(command) << '\n';
    switch (command) {
      case Command::reduce:
        s << "counts=" << counts << '\n';
        break;
      case Command::witness:
        s << "state=" << state << '\n';
        break;
      case Command::collectibility:
        s << "state=" << state << '\n' << "profile_points=" << profile_points << '\n';
        break;
      case Command::simulate:
      case Command::werner_sweep:
        if (command == Command::simulate) s << "state=" << state << '\n';
        s << "noise_preset=" << noise_preset.value_or("") << '\n'
          << "nu=" << (nu ? photonics::format_real(*nu) : "") << '\n'
          << "trials=" << trials << '\n'
          << "calibration=" << photonics::to_string(calibration) << '\n'
          << "twofold_product=" << twofold_product << '\n';
        if (command == Command::werner_sweep) {
          s << "grid=";
          for (double p : grid) s << photonics::format_real(p) << ';';
          s << '\n';
        }
        break;
    }
    s << "xi=" << (xi ? photonics::format_real(*xi) : "") << '\n'
      << "seed=" << seed << '\n'
      << "format=" << static_cast<int>(format) << '\n';
    return s.str();
  }

  /// FNV-1a 64 of canonical(); stable across platforms.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

struct ResolvedState {
  std::string name;
  TwoQubitState state;
};

inline ResolvedState resolve_state(const std::string& source) {
  if (source == "bell") return {source, bell_state()};
  if (source == "separable") return {source, separable_state()};
  if (source == "mixed") return {source, maximally_mixed_state()};
  if (source.starts_with("werner:")) {
    const std::string text = source.substr(7);
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
      fail_validation("cannot parse Werner parameter in '" + source + "'");
    }
    return {source, werner_state(p)};
  }
  return {source, read_density_matrix_file(source)};
}

/// Probability that photon 1 is found horizontal; the xi entering the
/// coincidence form of W when no explicit value is given.
inline double horizontal_balance(const TwoQubitState& rho) {
  return conditional_state(rho, ProjectionSetting::rectilinear(), Branch::plus).probability;
}

inline photonics::NoiseModel resolve_noise(const RunConfig& config) {
  if (config.noise_preset && config.nu) {
    fail_validation("give either --noise-preset or --nu, not both");
  }
  if (config.noise_preset) {
    const auto preset = photonics::noise_preset(*config.noise_preset);
    if (!preset) {
      fail_validation("unknown noise preset '" + *config.noise_preset +
                      "' (expected ideal, bell, separable or mixed)");
    }
    return *preset;
  }
  photonics::NoiseModel noise{config.nu.value_or(1.0)};
  noise.validate();
  return noise;
}

inline std::string output_path(const std::string& path) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      return (std::filesystem::path(dir) / p).string();
    }
  }
  return path;
}

namespace detail {

inline void stamp(Report& r, const RunConfig& config) {
  r.command = to_string(config.command);
  r.add("version", std::string(kVersion));
  r.add("seed", config.seed);
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << config.hash();
  r.add("config_hash", hash.str());
}

inline Scalar optional_ratio(const std::optional<double>& r) {
  return r ? Scalar(*r) : Scalar(std::string("undefined"));
}

inline void add_estimate(Report& r, const photonics::WitnessEstimate& est) {
  r.add("method", std::string(photonics::to_string(est.method)));
  r.add("xi", est.xi);
  r.add("w", est.w);
  r.add("sigma_w", est.sigma_w);
  r.add("sigma_w_bootstrap", est.sigma_w_bootstrap);
  r.add("bootstrap_resamples", static_cast<std::uint64_t>(est.bootstrap_resamples));
  r.add("bootstrap_failures", static_cast<std::uint64_t>(est.bootstrap_failures));
  if (est.noise_level) r.add("noise_level", *est.noise_level);
  r.add("verdict", std::string(est.w < 0.0 ? "entangled" : "not detected"));
}

inline Table ratio_table(const photonics::CountsDataset& data,
                         const photonics::WitnessEstimate& est,
                         const std::optional<TwoQubitState>& rho) {
  Table t;
  t.name = "ratios";
  t.columns = {"pair", "cc_a", "cc_b", "cc_n", "ratio"};
  if (rho) t.columns.push_back("ideal_ratio");
  for (auto pair : photonics::kWitnessPairs) {
    const auto* rec = data.find(pair);
    std::vector<Scalar> row{pair.label(), rec->cc_a, rec->cc_b, rec->cc_n,
                            optional_ratio(est.ratios.at(pair))};
    if (rho) row.push_back(optional_ratio(photonics::ideal_ratio(*rho, pair)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace detail

inline Report witness_report(const RunConfig& config) {
  const ResolvedState s = resolve_state(config.state);
  const CollectiveWitness w = collective_witness(s.state);
  Report r;
  detail::stamp(r, config);
  r.add("state", s.name);
  r.add("w", w.w);
  r.add("verdict", std::string(w.detects_entanglement() ? "entangled" : "not detected"));
  r.add("eta", w.eta);
  r.add("z_plus", w.z_plus);
  r.add("z_minus", w.z_minus);
  r.add("x_plus", w.x_plus);
  r.add("x_minus", w.x_minus);
  r.add("p_plus", w.gramm.p_plus);
  r.add("p_minus", w.gramm.p_minus);
  r.add("g_plus", w.gramm.g_plus);
  r.add("g_minus", w.gramm.g_minus);
  r.add("g", w.gramm.g);
  r.add("purity", purity(s.state));
  r.add("negativity", negativity(s.state));
  return r;
}

inline Report collectibility_report(const RunConfig& config) {
  const ResolvedState s = resolve_state(config.state);
  if (config.profile_points < 2) {
    fail_validation("profile needs at least 2 points");
  }
  const CollectibilityValue best = max_collectibility(s.state);
  Report r;
  detail::stamp(r, config);
  r.add("state", s.name);
  r.add("y_max", best.y);
  r.add("theta_star", best.theta);
  r.add("threshold", kPureStateThreshold);
  r.add("verdict", std::string(best.exceeds_threshold(1e-9) ? "entangled (if pure)"
                                                            : "not detected"));
  r.add("purity", purity(s.state));
  Table profile;
  profile.name = "profile";
  profile.columns = {"theta", "y"};
  const double step = std::numbers::pi / static_cast<double>(config.profile_points - 1);
  for (std::size_t i = 0; i < config.profile_points; ++i) {
    const double theta = step * static_cast<double>(i);
    profile.rows.push_back({theta, collectibility(s.state, {theta, 0.0}).y});
  }
  r.tables.push_back(std::move(profile));
  if (purity(s.state) < 1.0 - 1e-9) {
    r.notes.push_back("the 1/16 threshold certifies entanglement of pure states only; "
                      "this state is mixed");
  }
  return r;
}

inline photonics::CampaignConfig campaign_config(const RunConfig& config, double xi) {
  photonics::CampaignConfig c;
  c.noise = resolve_noise(config);
  c.xi = xi;
  c.trials = config.trials;
  c.seed = config.seed;
  c.calibration = config.calibration;
  c.twofold_product = config.twofold_product;
  return c;
}

/// Runs the campaign, writes the counts file and returns the report.
inline Report simulate_report(const RunConfig& config) {
  const ResolvedState s = resolve_state(config.state);
  const double xi = config.xi.value_or(horizontal_balance(s.state));
  const photonics::CampaignConfig campaign = campaign_config(config, xi);
  const photonics::CampaignResult result = photonics::run_campaign(s.state, campaign);

  const std::string counts_path = output_path(config.counts.empty() ? "counts.csv" : config.counts);
  photonics::write_counts_file(counts_path, result.dataset);

  const double w_theory = collective_witness(s.state).w;
  Report r;
  detail::stamp(r, config);
  r.add("state", s.name);
  r.add("trials", config.trials);
  r.add("nu", campaign.noise.overlap);
  r.add("parasitic_ratio", campaign.noise.parasitic_ratio());
  r.add("xi_source", std::string(config.xi ? "user" : "state balance"));
  r.add("calibration", std::string(photonics::to_string(campaign.calibration)));
  r.add("twofold_product", campaign.twofold_product);
  r.add("counts_file", counts_path);
  detail::add_estimate(r, result.estimate);
  r.add("w_theory", w_theory);
  r.add("deviation_sigma", result.estimate.sigma_w > 0.0
                               ? (result.estimate.w - w_theory) / result.estimate.sigma_w
                               : 0.0);
  r.add("ccN_same_projection", result.same_projection.count());
  r.add("ccN_over_ccB_same_projection", result.same_projection.relative());
  r.add("ccN_polarized_reference", result.polarized_reference.count());
  r.add("ccN_over_ccB_polarized_reference", result.polarized_reference.relative());
  r.tables.push_back(detail::ratio_table(result.dataset, result.estimate, s.state));
  if (result.calibration_note) r.notes.push_back(*result.calibration_note);
  if (campaign.xi != horizontal_balance(s.state)) {
    r.notes.push_back("xi differs from the state's horizontal balance " +
                      photonics::format_real(horizontal_balance(s.state)));
  }
  return r;
}

inline Report werner_sweep_report(const RunConfig& config) {
  if (config.grid.empty()) fail_validation("Werner grid is empty");
  const double xi = config.xi.value_or(0.5);
  photonics::CampaignConfig campaign = campaign_config(config, xi);
  const photonics::CampaignResult bell = photonics::run_campaign(bell_state(), campaign);
  photonics::CampaignConfig mixed_campaign = campaign;
  mixed_campaign.seed = config.seed + 1;
  const photonics::CampaignResult mixed =
      photonics::run_campaign(maximally_mixed_state(), mixed_campaign);

  Report r;
  detail::stamp(r, config);
  r.add("trials", config.trials);
  r.add("nu", campaign.noise.overlap);
  r.add("xi", xi);
  r.add("bell_seed", campaign.seed);
  r.add("mixed_seed", mixed_campaign.seed);
  r.add("separability_threshold", 1.0 / 3.0);
  r.add("detection_threshold", std::sqrt(3.0) / 2.0);
  Table t;
  t.name = "werner";
  t.columns = {"p", "w", "sigma_w", "w_theory", "verdict"};
  for (double p : config.grid) {
    const photonics::CountsDataset data = photonics::werner_mix(bell.dataset, mixed.dataset, p);
    const photonics::WitnessEstimate est = photonics::witness_from_counts(data, xi, campaign.reduction);
    const double theory = collective_witness(werner_state(p)).w;
    t.rows.push_back({p, est.w, est.sigma_w, theory,
                      std::string(est.w < 0.0 ? "entangled" : "not detected")});
  }
  r.tables.push_back(std::move(t));
  Table thresholds;
  thresholds.name = "thresholds";
  thresholds.columns = {"p", "label"};
  thresholds.rows.push_back({1.0 / 3.0, std::string("separability (entangled for p > 1/3)")});
  thresholds.rows.push_back({std::sqrt(3.0) / 2.0, std::string("detection by W (p > sqrt(3)/2)")});
  r.tables.push_back(std::move(thresholds));
  if (bell.calibration_note) r.notes.push_back("bell campaign " + *bell.calibration_note);
  if (mixed.calibration_note) r.notes.push_back("mixed campaign " + *mixed.calibration_note);
  return r;
}

inline Report reduce_report(const RunConfig& config) {
  if (config.counts.empty()) fail_validation("reduce needs --counts");
  if (!config.xi) fail_validation("reduce needs --xi");
  const photonics::CountsDataset data = photonics::read_counts_file(config.counts);
  const photonics::WitnessEstimate est = photonics::witness_from_counts(data, *config.xi);
  Report r;
  detail::stamp(r, config);
  r.add("counts_file", config.counts);
  detail::add_estimate(r, est);
  r.tables.push_back(detail::ratio_table(data, est, std::nullopt));
  return r;
}

inline Report build_report(const RunConfig& config) {
  switch (config.command) {
    case Command::witness: return witness_report(config);
    case Command::collectibility: return collectibility_report(config);
    case Command::simulate: return simulate_report(config);
    case Command::werner_sweep: return werner_sweep_report(config);
    case Command::reduce: return reduce_report(config);
  }
  fail_validation("unknown command");
}

inline int exit_code(ErrorKind kind) {
  return kind == ErrorKind::validation ? 1 : 2;
}

/// Builds and renders the report; never throws.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Report report = build_report(config);
    if (config.output.empty()) {
      render(out, report, config.format);
    } else {
      const std::string path = output_path(config.output);
      std::ofstream file(path, std::ios::binary);
      if (!file) fail_validation("cannot open output file: " + path);
      render(file, report, config.format);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace collectibility::io
