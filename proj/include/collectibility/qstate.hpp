#pragma once

// Two-qubit density matrices, local polarization projections on qubit A and
// the conditional states of qubit B they herald.
//
// Basis ordering is {HH, HV, VH, VV}; qubit A (the locally projected photon)
// is the first tensor factor.

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "collectibility/error.hpp"
#include "collectibility/linalg.hpp"

namespace collectibility {

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr double kDegenerateProbability = 1e-12;

/// Returns a diagnostic naming the first violated density-matrix invariant,
/// or nothing when `rho` is a valid state.
template <int N>
std::optional<std::string> density_matrix_defect(
    const Eigen::Matrix<Complex, N, N>& rho) {
  if (!rho.allFinite()) {
    return "entries must be finite";
  }
  std::ostringstream msg;
  msg.precision(3);
  if (const double d = hermiticity_defect(rho); d > kHermitianTolerance) {
    msg << "not Hermitian: max |rho - rho^dagger| = " << d << " exceeds "
        << kHermitianTolerance;
    return msg.str();
  }
  if (const double t = rho.trace().real(); std::abs(t - 1.0) > kTraceTolerance) {
    msg.precision(15);
    msg << "trace must be 1: got " << t;
    return msg.str();
  }
  if (const double e = hermitian_eigenvalues(rho)(0); e < -kPositivityTolerance) {
    msg << "not positive semidefinite: minimum eigenvalue " << e
        << " below -" << kPositivityTolerance;
    return msg.str();
  }
  return std::nullopt;
}

/// A validated two-qubit density operator.
class TwoQubitState {
 public:
  /// Throws Error(validation) naming the violated invariant.
  static TwoQubitState from_matrix(const Matrix4c& rho) {
    if (auto defect = density_matrix_defect(rho)) {
      fail_validation("invalid two-qubit state: " + *defect);
    }
    return TwoQubitState(rho);
  }

  /// |psi><psi| for a (not necessarily normalized) nonzero vector.
  static TwoQubitState pure(const Vector4c& psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      fail_validation("invalid two-qubit state: state vector must be nonzero");
    }
    const Vector4c v = psi / norm;
    return TwoQubitState(v * v.adjoint());
  }

  const Matrix4c& matrix() const noexcept { return rho_; }

  /// Reduced state of qubit A (the projected photon).
  Matrix2c reduced_first() const { return partial_trace_second(rho_); }
  /// Reduced state of qubit B (the photon sent to the beam splitter).
  Matrix2c reduced_second() const { return partial_trace_first(rho_); }

 private:
  explicit TwoQubitState(const Matrix4c& rho) : rho_(rho) {}

  Matrix4c rho_;
};

/// Convex combination weight*a + (1 - weight)*b.
inline TwoQubitState mix(const TwoQubitState& a, const TwoQubitState& b,
                         double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    fail_validation("mixing weight must lie in [0, 1]");
  }
  return TwoQubitState::from_matrix(weight * a.matrix() +
                                    (1.0 - weight) * b.matrix());
}

/// (|HV> - |VH>)/sqrt(2).
inline TwoQubitState bell_state() {
  Vector4c psi = Vector4c::Zero();
  psi(1) = 1.0;
  psi(2) = -1.0;
  return TwoQubitState::pure(psi);
}

/// |HH>.
inline TwoQubitState separable_state() {
  Vector4c psi = Vector4c::Zero();
  psi(0) = 1.0;
  return TwoQubitState::pure(psi);
}

/// I/4.
inline TwoQubitState maximally_mixed_state() {
  return TwoQubitState::from_matrix(Matrix4c::Identity() * 0.25);
}

/// A normalized single-qubit density operator.
class SingleQubitState {
 public:
  static SingleQubitState from_matrix(const Matrix2c& sigma) {
    if (auto defect = density_matrix_defect(sigma)) {
      fail_validation("invalid single-qubit state: " + *defect);
    }
    return SingleQubitState(sigma);
  }

  const Matrix2c& matrix() const noexcept { return sigma_; }

 private:
  explicit SingleQubitState(const Matrix2c& sigma) : sigma_(sigma) {}

  Matrix2c sigma_;
};

enum class Branch { plus, minus };

/// Local projection basis on qubit A:
///   |a+> = cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>
///   |a-> = cos(theta/2)|V> - e^{-i phi} sin(theta/2)|H>
struct ProjectionSetting {
  double theta = 0.0;
  double phi = 0.0;

  /// H/V basis: |a+> = |H>, |a-> = |V>.
  static constexpr ProjectionSetting rectilinear() { return {0.0, 0.0}; }
  /// Diagonal basis: |a+> = |D>, |a-> = -|A> (up to sign).
  static constexpr ProjectionSetting diagonal() {
    return {std::numbers::pi / 2.0, 0.0};
  }

  Vector2c vector(Branch branch) const {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Vector2c v;
    if (branch == Branch::plus) {
      v << Complex(c, 0.0), std::polar(s, phi);
    } else {
      v << -std::polar(s, -phi), Complex(c, 0.0);
    }
    return v;
  }

  Matrix2c projector(Branch branch) const {
    const Vector2c v = vector(branch);
    return v * v.adjoint();
  }
};

/// Heralded state of qubit B after projecting qubit A onto one branch.
/// `unnormalized` is chi = tr_A[rho (|a><a| (x) 1)]; its trace is the
/// branch probability.
struct ConditionalState {
  Matrix2c unnormalized;
  double probability = 0.0;

  bool degenerate() const noexcept {
    return probability < kDegenerateProbability;
  }

  /// sigma = chi / p. Throws Error(degenerate) when p vanishes.
  SingleQubitState normalized() const {
    if (degenerate()) {
      fail_degenerate("conditional state undefined: branch probability " +
                      std::to_string(probability) + " is zero");
    }
    Matrix2c sigma = unnormalized / probability;
    sigma = (sigma + sigma.adjoint()) * 0.5;
    return SingleQubitState::from_matrix(sigma);
  }
};

inline ConditionalState conditional_state(const TwoQubitState& rho,
                                          const ProjectionSetting& setting,
                                          Branch branch) {
  const Vector2c a = setting.vector(branch);
  const Matrix4c& m = rho.matrix();
  // chi(j,k) = sum_{i,i'} conj(a_i) a_i' rho(i j, i' k)
  Matrix2c chi = Matrix2c::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int ip = 0; ip < 2; ++ip) {
      const Complex w = std::conj(a(i)) * a(ip);
      chi += w * m.block<2, 2>(2 * i, 2 * ip);
    }
  }
  return {chi, chi.trace().real()};
}

inline double purity(const TwoQubitState& rho) {
  return trace_product(rho.matrix(), rho.matrix());
}

inline double purity(const SingleQubitState& sigma) {
  return trace_product(sigma.matrix(), sigma.matrix());
}

/// Re tr[P- (a (x) b)] for arbitrary (possibly unnormalized) operators.
inline double singlet_weight(const Matrix2c& a, const Matrix2c& b) {
  static const Matrix4c projector = singlet_projector();
  return trace_product(projector, Matrix4c(kron(a, b)));
}

/// Probability tr[P- (a (x) b)] that two photons in states a and b project
/// onto the polarization singlet; equals (1 - tr(ab))/2. Both forms are
/// evaluated and must agree.
inline double singlet_overlap(const SingleQubitState& a,
                              const SingleQubitState& b) {
  const double via_projector = singlet_weight(a.matrix(), b.matrix());
  // Symmetrized so that swapping the arguments is bit-exact.
  const double overlap = 0.5 * (trace_product(a.matrix(), b.matrix()) +
                                trace_product(b.matrix(), a.matrix()));
  const double via_overlap = 0.5 * (1.0 - overlap);
  if (std::abs(via_projector - via_overlap) > 1e-12) {
    fail_numerical("singlet overlap identity violated");
  }
  return via_overlap;
}

}  // namespace collectibility
