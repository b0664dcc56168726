#pragma once

// Fixed-size complex linear algebra for one and two qubits. Everything is
// dense; the largest object is the 4x4 two-copy singlet projector.

#include <complex>

#include <Eigen/Dense>

namespace collectibility {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Vector2c = Eigen::Matrix<Complex, 2, 1>;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;

/// Kronecker product; the left operand is the first tensor factor.
template <int RowsA, int ColsA, int RowsB, int ColsB>
Eigen::Matrix<Complex, RowsA * RowsB, ColsA * ColsB> kron(
    const Eigen::Matrix<Complex, RowsA, ColsA>& a,
    const Eigen::Matrix<Complex, RowsB, ColsB>& b) {
  Eigen::Matrix<Complex, RowsA * RowsB, ColsA * ColsB> out;
  for (int i = 0; i < RowsA; ++i) {
    for (int j = 0; j < ColsA; ++j) {
      out.template block<RowsB, ColsB>(i * RowsB, j * ColsB) = a(i, j) * b;
    }
  }
  return out;
}

/// tr_A of a two-qubit operator in the {HH, HV, VH, VV} ordering.
inline Matrix2c partial_trace_first(const Matrix4c& m) {
  Matrix2c out;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      out(j, k) = m(j, k) + m(2 + j, 2 + k);
    }
  }
  return out;
}

/// tr_B of a two-qubit operator.
inline Matrix2c partial_trace_second(const Matrix4c& m) {
  Matrix2c out;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      out(i, k) = m(2 * i, 2 * k) + m(2 * i + 1, 2 * k + 1);
    }
  }
  return out;
}

/// Transpose on the second tensor factor only.
inline Matrix4c partial_transpose_second(const Matrix4c& m) {
  Matrix4c out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) {
          out(2 * a + b, 2 * c + d) = m(2 * a + d, 2 * c + b);
        }
      }
    }
  }
  return out;
}

/// Re tr(a b) without forming the product.
template <int N>
double trace_product(const Eigen::Matrix<Complex, N, N>& a,
                     const Eigen::Matrix<Complex, N, N>& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

/// Largest entrywise deviation from Hermiticity.
template <int N>
double hermiticity_defect(const Eigen::Matrix<Complex, N, N>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Ascending eigenvalues of the Hermitian part of m.
template <int N>
Eigen::Matrix<double, N, 1> hermitian_eigenvalues(
    const Eigen::Matrix<Complex, N, N>& m) {
  const Eigen::Matrix<Complex, N, N> h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, N, N>> solver(
      h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// Projector |s><s| with s = (|HV> - |VH>)/sqrt(2).
inline Matrix4c singlet_projector() {
  Vector4c s = Vector4c::Zero();
  s(1) = Complex(1.0 / std::sqrt(2.0), 0.0);
  s(2) = Complex(-1.0 / std::sqrt(2.0), 0.0);
  return s * s.adjoint();
}

/// Two-qubit swap permutation in the {HH, HV, VH, VV} ordering.
inline Matrix4c swap_operator() {
  Matrix4c s = Matrix4c::Zero();
  s(0, 0) = 1.0;
  s(1, 2) = 1.0;
  s(2, 1) = 1.0;
  s(3, 3) = 1.0;
  return s;
}

}  // namespace collectibility
