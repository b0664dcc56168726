#pragma once

// Collectibility Y(rho, theta, phi), its maximum over theta, the collective
// witness W(rho) and the partial-transpose negativity used to cross-check
// both.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "collectibility/error.hpp"
#include "collectibility/golden_section.hpp"
#include "collectibility/linalg.hpp"
#include "collectibility/qstate.hpp"

namespace collectibility {

/// Gramm matrix elements of the unnormalized conditional states chi+-.
/// g_plus = sqrt(tr chi+^2) = p+ sqrt(tr sigma+^2), g = sqrt(tr chi+ chi-).
struct GrammElements {
  double p_plus = 0.0;
  double p_minus = 0.0;
  double g_plus = 0.0;
  double g_minus = 0.0;
  double g = 0.0;
  /// G+ G- - G^2, evaluated without cancellation.
  double radicand = 0.0;
};

namespace detail {

// Real coordinates of a 2x2 Hermitian operator in which tr(ab) is the dot product.
inline Eigen::Vector4d hermitian_coordinates(const Matrix2c& m) {
  const double r2 = std::sqrt(2.0);
  const Complex off = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  return {m(0, 0).real(), m(1, 1).real(), r2 * off.real(), r2 * off.imag()};
}

// |u|^2 |v|^2 - (u.v)^2 as a sum of squared 2x2 minors (Lagrange identity).
inline double gram_determinant(const Eigen::Vector4d& u, const Eigen::Vector4d& v) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double minor = u(i) * v(j) - u(j) * v(i);
      sum += minor * minor;
    }
  }
  return sum;
}

}  // namespace detail

inline GrammElements gramm_elements(const TwoQubitState& rho,
                                    const ProjectionSetting& setting) {
  const ConditionalState plus = conditional_state(rho, setting, Branch::plus);
  const ConditionalState minus = conditional_state(rho, setting, Branch::minus);
  // Overlaps of PSD operators are nonnegative; clamp rounding residue.
  const auto root = [](double x) { return std::sqrt(std::max(x, 0.0)); };
  GrammElements e{plus.probability,
                  minus.probability,
                  root(trace_product(plus.unnormalized, plus.unnormalized)),
                  root(trace_product(minus.unnormalized, minus.unnormalized)),
                  root(trace_product(plus.unnormalized, minus.unnormalized)),
                  0.0};
  // (G+ G-)^2 - G^4 = Gram determinant; divide by G+ G- + G^2.
  const double denominator = e.g_plus * e.g_minus + e.g * e.g;
  if (denominator > 0.0) {
    e.radicand = detail::gram_determinant(detail::hermitian_coordinates(plus.unnormalized),
                                          detail::hermitian_coordinates(minus.unnormalized)) /
                 denominator;
  }
  return e;
}

inline constexpr double kPureStateThreshold = 1.0 / 16.0;
inline constexpr double kRadicandTolerance = 1e-12;

struct CollectibilityValue {
  double y = 0.0;
  double theta = 0.0;

  /// Y > 1/16 certifies entanglement of a pure state.
  bool exceeds_threshold(double guard = 0.0) const {
    return y > kPureStateThreshold + guard;
  }
};

/// Y = (sqrt(G+ G-) + sqrt(G+ G- - G^2))^2 / 4 from precomputed elements.
inline double collectibility_from_gramm(const GrammElements& e) {
  const double product = e.g_plus * e.g_minus;
  const double naive = product - e.g * e.g;
  if (naive < -kRadicandTolerance) {
    fail_numerical("collectibility radicand G+G- - G^2 is negative (" +
                   std::to_string(naive) + ")");
  }
  const double root_sum = std::sqrt(product) + std::sqrt(std::max(e.radicand, 0.0));
  return 0.25 * root_sum * root_sum;
}

inline CollectibilityValue collectibility(const TwoQubitState& rho,
                                          const ProjectionSetting& setting) {
  return {collectibility_from_gramm(gramm_elements(rho, setting)), setting.theta};
}

struct MaximizationOptions {
  std::size_t scan_points = 361;
  double theta_tolerance = 1e-6;
};

/// max over theta in [0, pi] of Y at phi = 0.
inline CollectibilityValue max_collectibility(const TwoQubitState& rho,
                                              MaximizationOptions options = {}) {
  const auto profile = [&rho](double theta) {
    return collectibility(rho, {theta, 0.0}).y;
  };
  const Extremum best = scan_and_refine_maximum(
      profile, 0.0, std::numbers::pi, std::max<std::size_t>(options.scan_points, 181),
      options.theta_tolerance);
  return {best.value, best.x};
}

/// Value of W(rho) together with the components it is assembled from.
/// Gramm elements are evaluated in the H/V frame (theta = 0); x+- at
/// theta = pi/2, phi = 0. z+- and x+- are 2 tr[P- (sigma (x) sigma)] of the
/// normalized conditional states, zero for a degenerate branch.
struct CollectiveWitness {
  double w = 0.0;
  double eta = 0.0;
  double z_plus = 0.0;
  double z_minus = 0.0;
  double x_plus = 0.0;
  double x_minus = 0.0;
  /// p+ p- sqrt(z+ z-), computed from the unnormalized chi+-.
  double weighted_z = 0.0;
  GrammElements gramm;

  bool detects_entanglement() const { return w < 0.0; }

  /// W reassembled from the stored components.
  double recompute() const {
    const double eta_again = 8.0 * weighted_z + 2.0 * std::max(x_plus, x_minus);
    return 0.5 * (eta_again + gramm.g_plus * gramm.g_plus +
                  gramm.g_minus * gramm.g_minus + 2.0 * gramm.g * gramm.g - 1.0);
  }
};

namespace detail {

inline double doubled_singlet_self_overlap(const ConditionalState& c) {
  if (c.degenerate()) {
    return 0.0;
  }
  return 2.0 * singlet_weight(c.unnormalized, c.unnormalized) /
         (c.probability * c.probability);
}

}  // namespace detail

inline CollectiveWitness collective_witness(const TwoQubitState& rho) {
  const ProjectionSetting hv = ProjectionSetting::rectilinear();
  const ProjectionSetting diag = ProjectionSetting::diagonal();
  const ConditionalState h = conditional_state(rho, hv, Branch::plus);
  const ConditionalState v = conditional_state(rho, hv, Branch::minus);
  const ConditionalState d = conditional_state(rho, diag, Branch::plus);
  const ConditionalState a = conditional_state(rho, diag, Branch::minus);

  CollectiveWitness out;
  out.gramm = gramm_elements(rho, hv);
  out.z_plus = detail::doubled_singlet_self_overlap(h);
  out.z_minus = detail::doubled_singlet_self_overlap(v);
  out.x_plus = detail::doubled_singlet_self_overlap(d);
  out.x_minus = detail::doubled_singlet_self_overlap(a);
  // p^2 z = 2 tr[P- (chi (x) chi)], finite even when p = 0.
  const double pz_plus = std::max(2.0 * singlet_weight(h.unnormalized, h.unnormalized), 0.0);
  const double pz_minus = std::max(2.0 * singlet_weight(v.unnormalized, v.unnormalized), 0.0);
  out.weighted_z = std::sqrt(pz_plus * pz_minus);
  out.eta = 8.0 * out.weighted_z + 2.0 * std::max(out.x_plus, out.x_minus);
  out.w = 0.5 * (out.eta + out.gramm.g_plus * out.gramm.g_plus +
                 out.gramm.g_minus * out.gramm.g_minus +
                 2.0 * out.gramm.g * out.gramm.g - 1.0);
  return out;
}

/// p |Psi-><Psi-| + (1 - p) I/4.
inline TwoQubitState werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    fail_validation("Werner parameter p must lie in [0, 1]");
  }
  return mix(bell_state(), maximally_mixed_state(), p);
}

/// Twice the sum of |negative eigenvalues| of the partial transpose, so that
/// a maximally entangled state scores 1.
inline double negativity(const TwoQubitState& rho) {
  const Eigen::Vector4d eig = hermitian_eigenvalues(partial_transpose_second(rho.matrix()));
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (eig(i) < 0.0) {
      sum -= eig(i);
    }
  }
  return 2.0 * sum;
}

}  // namespace collectibility
