#pragma once

// Seeded random two-qubit ensembles for property checks.

#include <cstdint>
#include <random>

#include "collectibility/linalg.hpp"
#include "collectibility/qstate.hpp"

namespace collectibility {

inline constexpr std::uint64_t kDefaultEnsembleSeed = 20160901;

class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed = kDefaultEnsembleSeed) : rng_(seed) {}

  /// Haar-distributed pure state (normalized complex Gaussian vector).
  TwoQubitState haar_pure() {
    Vector4c psi;
    for (int i = 0; i < 4; ++i) {
      psi(i) = gaussian_complex();
    }
    return TwoQubitState::pure(psi);
  }

  /// G G^dagger / tr for a 4 x rank Ginibre matrix; rank 4 gives the
  /// Hilbert-Schmidt measure.
  TwoQubitState ginibre_mixed(int rank) {
    Eigen::Matrix<Complex, 4, Eigen::Dynamic> g(4, rank);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < rank; ++j) {
        g(i, j) = gaussian_complex();
      }
    }
    Matrix4c rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint()) * 0.5;
    return TwoQubitState::from_matrix(rho);
  }

  /// Ginibre state of uniformly drawn rank 1..4.
  TwoQubitState mixed() {
    std::uniform_int_distribution<int> rank(1, 4);
    return ginibre_mixed(rank(rng_));
  }

  /// Random normalized single-qubit density matrix (Ginibre, rank 1 or 2).
  SingleQubitState qubit() {
    std::uniform_int_distribution<int> rank(1, 2);
    const int r = rank(rng_);
    Eigen::Matrix<Complex, 2, Eigen::Dynamic> g(2, r);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < r; ++j) {
        g(i, j) = gaussian_complex();
      }
    }
    Matrix2c sigma = g * g.adjoint();
    sigma /= sigma.trace().real();
    sigma = (sigma + sigma.adjoint()) * 0.5;
    return SingleQubitState::from_matrix(sigma);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  Complex gaussian_complex() { return {normal_(rng_), normal_(rng_)}; }

  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace collectibility
