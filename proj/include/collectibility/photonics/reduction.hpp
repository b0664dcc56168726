#pragma once

// Reduction of four-fold coincidence counts to the collective witness:
// parasitic-level subtraction, coincidence ratios, W in terms of ratios and
// its statistical uncertainty.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "collectibility/error.hpp"
#include "collectibility/photonics/records.hpp"
#include "collectibility/qstate.hpp"

namespace collectibility::photonics {

inline constexpr double kMaxRatio = 2.0;

/// (cc_a - cc_n) / (cc_b - cc_n) clamped to [0, 2]. The unclamped value is
/// twice the singlet projection probability of the two heralded photons.
inline double corrected_ratio(const CoincidenceRecord& rec) {
  const double denominator = rec.cc_b - rec.cc_n;
  if (!(denominator > 0.0)) {
    fail_degenerate("degenerate-denominator: pair " + rec.pair.label() +
                    " has cc_b - cc_n = " + std::to_string(denominator));
  }
  return std::clamp((rec.cc_a - rec.cc_n) / denominator, 0.0, kMaxRatio);
}

/// Ratios for the four witness settings; a missing entry means the ratio is
/// undefined for this dataset.
struct RatioSet {
  std::optional<double> hh;
  std::optional<double> vv;
  std::optional<double> hv;
  std::optional<double> dd;

  std::optional<double>& at(ProjectionPair pair) {
    if (pair == kPairHH) return hh;
    if (pair == kPairVV) return vv;
    if (pair == kPairHV) return hv;
    return dd;
  }
  const std::optional<double>& at(ProjectionPair pair) const {
    return const_cast<RatioSet*>(this)->at(pair);
  }
};

/// Whether the ratio of `pair` carries nonzero weight in W at this xi.
inline bool ratio_required(ProjectionPair pair, double xi) {
  if (pair == kPairHH) return xi != 0.0;
  if (pair == kPairVV) return xi != 1.0;
  if (pair == kPairHV) return xi != 0.0 && xi != 1.0;
  return true;
}

/// W = [eta + xi^2 (1 - r_HH) + (1 - xi)^2 (1 - r_VV)
///      + 2 xi (1 - xi)(1 - r_HV) - 1] / 2,
/// eta = 8 xi (1 - xi) sqrt(r_HH r_VV) + 2 r_DD.
/// Terms whose coefficient vanishes are skipped, so ratios that are
/// undefined there (e.g. r_VV of |HH> at xi = 1) may be absent.
inline double witness_from_ratios(const RatioSet& r, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    fail_validation("xi must lie in [0, 1]");
  }
  for (ProjectionPair pair : kWitnessPairs) {
    if (ratio_required(pair, xi) && !r.at(pair)) {
      fail_degenerate("degenerate-denominator: ratio for pair " + pair.label() +
                      " is undefined but carries weight at xi = " + std::to_string(xi));
    }
  }
  const double cross = xi * (1.0 - xi);
  double eta = 2.0 * *r.dd;
  double sum = 0.0;
  if (xi != 0.0) sum += xi * xi * (1.0 - *r.hh);
  if (xi != 1.0) sum += (1.0 - xi) * (1.0 - xi) * (1.0 - *r.vv);
  if (cross != 0.0) {
    sum += 2.0 * cross * (1.0 - *r.hv);
    eta += 8.0 * cross * std::sqrt(*r.hh * *r.vv);
  }
  return 0.5 * (eta + sum - 1.0);
}

/// Exact ratio 2 tr[P- (sigma_I (x) sigma_J)] a noiseless, infinitely long
/// run converges to; empty when either projection never succeeds.
inline std::optional<double> ideal_ratio(const TwoQubitState& rho, ProjectionPair pair) {
  const auto [setting_i, branch_i] = as_projection(pair.first);
  const auto [setting_j, branch_j] = as_projection(pair.second);
  const ConditionalState ci = conditional_state(rho, setting_i, branch_i);
  const ConditionalState cj = conditional_state(rho, setting_j, branch_j);
  if (ci.degenerate() || cj.degenerate()) {
    return std::nullopt;
  }
  return 2.0 * singlet_overlap(ci.normalized(), cj.normalized());
}

inline RatioSet ideal_ratios(const TwoQubitState& rho) {
  RatioSet out;
  for (ProjectionPair pair : kWitnessPairs) {
    out.at(pair) = ideal_ratio(rho, pair);
  }
  return out;
}

/// Relative parasitic level ccN/ccB pooled over calibration records.
inline double noise_level(const std::vector<const CoincidenceRecord*>& calibration) {
  double a = 0.0;
  double b = 0.0;
  for (const auto* rec : calibration) {
    a += rec->cc_a;
    b += rec->cc_b;
  }
  if (!(b > 0.0)) {
    fail_degenerate("degenerate-denominator: calibration records have no "
                    "non-overlapped coincidences");
  }
  return a / b;
}

enum class EstimateMethod { analytic, from_counts };

inline const char* to_string(EstimateMethod m) {
  return m == EstimateMethod::analytic ? "analytic" : "from-counts";
}

struct WitnessEstimate {
  double w = 0.0;
  /// First-order propagation of Poisson count errors.
  double sigma_w = 0.0;
  /// Parametric Poisson bootstrap of the same counts.
  double sigma_w_bootstrap = 0.0;
  RatioSet ratios;
  double xi = 0.0;
  EstimateMethod method = EstimateMethod::from_counts;
  /// Pooled ccN/ccB when the dataset carries calibration rows.
  std::optional<double> noise_level;
  std::size_t bootstrap_resamples = 0;
  std::size_t bootstrap_failures = 0;
};

struct ReductionOptions {
  std::size_t bootstrap_resamples = 1000;
  /// Defaults to a value derived from the dataset's recorded seed.
  std::optional<std::uint64_t> bootstrap_seed;
};

namespace detail {

// Independent Poisson counts of a dataset and the map from them to W.
// Without calibration rows every cc_n is its own count. With calibration
// rows cc_n of each measurement row is proportional to the pooled
// calibration level and to the row's cc_b, so it moves with both.
class CountModel {
 public:
  explicit CountModel(const CountsDataset& data) {
    for (std::size_t i = 0; i < kWitnessPairs.size(); ++i) {
      const CoincidenceRecord* rec = data.find(kWitnessPairs[i]);
      if (rec == nullptr) {
        fail_validation("missing-setting: no measurement row for pair " +
                        kWitnessPairs[i].label());
      }
      rows_[i] = *rec;
    }
    calibration_ = data.calibration();
    if (!calibration_.empty()) {
      level0_ = noise_level(calibration_);
    }
  }

  std::size_t size() const {
    return rows_.size() * (calibrated() ? 2 : 3) + calibration_.size() * 2;
  }

  bool calibrated() const { return !calibration_.empty(); }

  std::vector<double> nominal() const {
    std::vector<double> x;
    x.reserve(size());
    for (const auto& r : rows_) {
      x.push_back(r.cc_a);
      x.push_back(r.cc_b);
      if (!calibrated()) x.push_back(r.cc_n);
    }
    for (const auto* c : calibration_) {
      x.push_back(c->cc_a);
      x.push_back(c->cc_b);
    }
    return x;
  }

  /// Ratios for counts x; pairs with a non-positive denominator are empty.
  RatioSet ratios(const std::vector<double>& x) const {
    const std::size_t stride = calibrated() ? 2 : 3;
    double scale = 1.0;
    if (calibrated() && level0_ > 0.0) {
      const std::size_t base = rows_.size() * stride;
      double a = 0.0;
      double b = 0.0;
      for (std::size_t j = 0; j < calibration_.size(); ++j) {
        a += x[base + 2 * j];
        b += x[base + 2 * j + 1];
      }
      scale = b > 0.0 ? (a / b) / level0_ : 1.0;
    }
    RatioSet out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      CoincidenceRecord rec = rows_[i];
      rec.cc_a = x[i * stride];
      rec.cc_b = x[i * stride + 1];
      if (calibrated()) {
        const double b_scale = rows_[i].cc_b > 0.0 ? rec.cc_b / rows_[i].cc_b : 1.0;
        rec.cc_n = rows_[i].cc_n * scale * b_scale;
      } else {
        rec.cc_n = x[i * stride + 2];
      }
      if (rec.cc_b - rec.cc_n > 0.0) {
        out.at(rec.pair) = corrected_ratio(rec);
      }
    }
    return out;
  }

  std::optional<double> witness(const std::vector<double>& x, double xi) const {
    try {
      return witness_from_ratios(ratios(x), xi);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::degenerate) return std::nullopt;
      throw;
    }
  }

  const std::array<CoincidenceRecord, 4>& rows() const { return rows_; }
  std::optional<double> level() const {
    return calibrated() ? std::optional<double>(level0_) : std::nullopt;
  }

 private:
  std::array<CoincidenceRecord, 4> rows_;
  std::vector<const CoincidenceRecord*> calibration_;
  double level0_ = 0.0;
};

inline std::uint64_t mix_seed(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// W and its uncertainty from the four witness settings {HH, VV, HV, DD}.
/// Errors: missing-setting (validation) when a witness row is absent;
/// degenerate-denominator when a ratio with nonzero weight is undefined.
inline WitnessEstimate witness_from_counts(const CountsDataset& data, double xi,
                                           const ReductionOptions& options = {}) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    fail_validation("xi must lie in [0, 1]");
  }
  const detail::CountModel model(data);

  WitnessEstimate est;
  est.xi = xi;
  est.method = EstimateMethod::from_counts;
  est.noise_level = model.level();
  for (const auto& rec : model.rows()) {
    if (rec.cc_a < 0.0 || rec.cc_b < 0.0 || rec.cc_n < 0.0) {
      fail_validation("counts must be nonnegative (pair " + rec.pair.label() + ")");
    }
    if (rec.cc_b - rec.cc_n > 0.0) {
      est.ratios.at(rec.pair) = corrected_ratio(rec);
    } else if (ratio_required(rec.pair, xi)) {
      corrected_ratio(rec);  // throws degenerate-denominator naming the pair
    }
  }
  est.w = witness_from_ratios(est.ratios, xi);

  // Symmetric one-sigma deltas; one-sided where a shifted count makes a
  // required ratio undefined.
  const std::vector<double> x0 = model.nominal();
  double variance = 0.0;
  for (std::size_t k = 0; k < x0.size(); ++k) {
    const double step = std::sqrt(std::max(x0[k], 0.0));
    if (step == 0.0) continue;
    std::vector<double> up = x0;
    std::vector<double> down = x0;
    up[k] += step;
    down[k] = std::max(down[k] - step, 0.0);
    const auto w_up = model.witness(up, xi);
    const auto w_down = model.witness(down, xi);
    double delta = 0.0;
    if (w_up && w_down) {
      delta = 0.5 * (*w_up - *w_down);
    } else if (w_up) {
      delta = *w_up - est.w;
    } else if (w_down) {
      delta = est.w - *w_down;
    }
    variance += delta * delta;
  }
  est.sigma_w = std::sqrt(variance);

  if (options.bootstrap_resamples > 1) {
    const std::uint64_t seed = options.bootstrap_seed.value_or(
        detail::mix_seed(data.records.empty() ? 0 : data.records.front().seed));
    std::mt19937_64 rng(seed);
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    std::vector<double> x(x0.size());
    for (std::size_t s = 0; s < options.bootstrap_resamples; ++s) {
      for (std::size_t k = 0; k < x0.size(); ++k) {
        x[k] = x0[k] > 0.0
                   ? static_cast<double>(std::poisson_distribution<long long>(x0[k])(rng))
                   : 0.0;
      }
      if (const auto w = model.witness(x, xi)) {
        ++n;
        const double d = *w - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (*w - mean);
      }
    }
    est.bootstrap_resamples = options.bootstrap_resamples;
    est.bootstrap_failures = options.bootstrap_resamples - n;
    est.sigma_w_bootstrap = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  }
  return est;
}

/// Werner-state interpolation: every counter of every setting becomes
/// p^2 * bell + (1 - p^2) * mixed. Both datasets must hold the same settings.
inline CountsDataset werner_mix(const CountsDataset& bell, const CountsDataset& mixed,
                                double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    fail_validation("Werner parameter p must lie in [0, 1]");
  }
  if (bell.records.size() != mixed.records.size()) {
    fail_validation("mismatched settings: datasets hold " +
                    std::to_string(bell.records.size()) + " and " +
                    std::to_string(mixed.records.size()) + " rows");
  }
  const double weight = p * p;
  const auto blend = [weight](double x, double y) {
    return weight * x + (1.0 - weight) * y;
  };
  CountsDataset out;
  out.records.reserve(bell.records.size());
  for (const auto& b : bell.records) {
    const CoincidenceRecord* m = mixed.find(b.pair, b.role);
    if (m == nullptr) {
      fail_validation("mismatched settings: " + b.token() + " missing from mixed dataset");
    }
    CoincidenceRecord r = b;
    r.cc_a = blend(b.cc_a, m->cc_a);
    r.cc_b = blend(b.cc_b, m->cc_b);
    r.cc_n = blend(b.cc_n, m->cc_n);
    r.exposure = blend(b.exposure, m->exposure);
    r.seed = weight >= 0.5 ? b.seed : m->seed;
    out.records.push_back(r);
  }
  return out;
}

}  // namespace collectibility::photonics
