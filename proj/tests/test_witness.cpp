#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "collectibility/random_states.hpp"
#include "collectibility/witness.hpp"

using namespace collectibility;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Vector4c singlet_vector() {
  Vector4c v = Vector4c::Zero();
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

// Independent reference: explicit 4x4 products and normalized conditional
// states, following the textbook form of the witness.
struct Oracle {
  double p[2];
  Matrix2c sigma[2];
  Matrix2c diag_sigma[2];
  double diag_p[2];
};

Matrix2c projected(const Matrix4c& rho, const Vector2c& a) {
  const Matrix2c proj = a * a.adjoint();
  Matrix4c full = Matrix4c::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      full.block<2, 2>(2 * i, 2 * j) = proj(i, j) * Matrix2c::Identity();
    }
  }
  const Matrix4c m = rho * full;
  Matrix2c out = Matrix2c::Zero();
  for (int k = 0; k < 2; ++k) out += m.block<2, 2>(2 * k, 2 * k);
  return out;
}

double two_copy_singlet(const Matrix2c& s, const Matrix2c& t) {
  Matrix4c st;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) st.block<2, 2>(2 * i, 2 * j) = s(i, j) * t;
  }
  const Vector4c psi = singlet_vector();
  return (psi.adjoint() * st * psi)(0, 0).real();
}

double oracle_w(const TwoQubitState& state) {
  const Matrix4c& rho = state.matrix();
  const Vector2c h(1.0, 0.0), v(0.0, 1.0);
  const Vector2c d(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const Vector2c a(-1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const Matrix2c chi_h = projected(rho, h), chi_v = projected(rho, v);
  const Matrix2c chi_d = projected(rho, d), chi_a = projected(rho, a);
  const double ph = chi_h.trace().real(), pv = chi_v.trace().real();
  const double pd = chi_d.trace().real(), pa = chi_a.trace().real();
  const auto tr2 = [](const Matrix2c& x, const Matrix2c& y) { return (x * y).trace().real(); };
  double g_plus2 = 0, g_minus2 = 0, g2 = 0, z_p = 0, z_m = 0, x_p = 0, x_m = 0;
  if (ph > 1e-12) {
    const Matrix2c s = chi_h / ph;
    g_plus2 = ph * ph * tr2(s, s);
    z_p = 2.0 * two_copy_singlet(s, s);
  }
  if (pv > 1e-12) {
    const Matrix2c s = chi_v / pv;
    g_minus2 = pv * pv * tr2(s, s);
    z_m = 2.0 * two_copy_singlet(s, s);
  }
  if (ph > 1e-12 && pv > 1e-12) g2 = ph * pv * tr2(chi_h / ph, chi_v / pv);
  if (pd > 1e-12) x_p = 2.0 * two_copy_singlet(chi_d / pd, chi_d / pd);
  if (pa > 1e-12) x_m = 2.0 * two_copy_singlet(chi_a / pa, chi_a / pa);
  const double eta = 8.0 * ph * pv * std::sqrt(std::max(z_p * z_m, 0.0)) + 2.0 * std::max(x_p, x_m);
  return 0.5 * (eta + g_plus2 + g_minus2 + 2.0 * g2 - 1.0);
}

double oracle_y(const TwoQubitState& state, double theta) {
  const Matrix4c& rho = state.matrix();
  const Vector2c ap(std::cos(theta / 2), std::sin(theta / 2));
  const Vector2c am(-std::sin(theta / 2), std::cos(theta / 2));
  const Matrix2c cp = projected(rho, ap), cm = projected(rho, am);
  const double gp = std::sqrt((cp * cp).trace().real());
  const double gm = std::sqrt((cm * cm).trace().real());
  const double g2 = (cp * cm).trace().real();
  const double r = std::sqrt(gp * gm) + std::sqrt(std::max(gp * gm - g2, 0.0));
  return 0.25 * r * r;
}

// Exhaustive dense scan of the Y(theta) profile.
double oracle_y_max(const TwoQubitState& state) {
  double best = 0.0;
  for (int i = 0; i <= 20000; ++i) best = std::max(best, oracle_y(state, kPi * i / 20000.0));
  return best;
}

}  // namespace

TEST_CASE("Gramm elements of the reference states", "[witness]") {
  const auto bell = gramm_elements(bell_state(), ProjectionSetting::rectilinear());
  CHECK(bell.g_plus == Approx(0.5).margin(1e-15));
  CHECK(bell.g_minus == Approx(0.5).margin(1e-15));
  CHECK(bell.g == Approx(0.0).margin(1e-15));

  const auto hh = gramm_elements(separable_state(), ProjectionSetting::rectilinear());
  CHECK(hh.g_plus == Approx(1.0).margin(1e-15));
  CHECK(hh.g_minus == 0.0);
  CHECK(hh.g == 0.0);

  const auto mixed = gramm_elements(maximally_mixed_state(), ProjectionSetting::rectilinear());
  CHECK(mixed.g_plus == Approx(std::sqrt(0.125)).margin(1e-15));
  CHECK(mixed.g == Approx(std::sqrt(0.125)).margin(1e-15));
}

TEST_CASE("Gramm elements obey Cauchy-Schwarz and the branch bounds", "[witness][property]") {
  StateSampler sampler(41);
  for (int n = 0; n < 5000; ++n) {
    const auto rho = n % 2 ? sampler.mixed() : sampler.haar_pure();
    const ProjectionSetting s{sampler.uniform(0.0, kPi), 0.0};
    const auto e = gramm_elements(rho, s);
    REQUIRE(e.g * e.g <= e.g_plus * e.g_minus + 1e-12);
    REQUIRE(e.g_plus <= e.p_plus + 1e-12);
    REQUIRE(e.g_minus <= e.p_minus + 1e-12);
  }
}

TEST_CASE("collectibility examples", "[witness]") {
  CHECK(collectibility::collectibility(bell_state(), ProjectionSetting::rectilinear()).y ==
        Approx(0.25).margin(1e-12));
  CHECK(collectibility::collectibility(separable_state(), {kPi / 2, 0.0}).y == Approx(1.0 / 16).margin(1e-12));
  CHECK(collectibility::collectibility(separable_state(), ProjectionSetting::rectilinear()).y ==
        Approx(0.0).margin(1e-15));
  CHECK(collectibility::collectibility(maximally_mixed_state(), ProjectionSetting::rectilinear()).y ==
        Approx(1.0 / 32).margin(1e-12));
}

TEST_CASE("collectibility agrees with the direct oracle", "[witness]") {
  StateSampler sampler(43);
  for (int n = 0; n < 500; ++n) {
    const auto rho = n % 2 ? sampler.mixed() : sampler.haar_pure();
    const double theta = sampler.uniform(0.0, kPi);
    REQUIRE(collectibility::collectibility(rho, {theta, 0.0}).y == Approx(oracle_y(rho, theta)).margin(1e-10));
  }
}

TEST_CASE("maximal collectibility of the reference states", "[witness]") {
  CHECK(max_collectibility(bell_state()).y == Approx(0.25).margin(1e-12));
  const auto hh = max_collectibility(separable_state());
  CHECK(hh.y == Approx(0.0625).margin(1e-12));
  CHECK(hh.theta == Approx(kPi / 2).margin(1e-5));
  CHECK(max_collectibility(maximally_mixed_state()).y <= 1.0 / 16 + 1e-9);
}

TEST_CASE("maximization reaches the dense-scan maximum", "[witness]") {
  StateSampler sampler(47);
  for (int n = 0; n < 40; ++n) {
    const auto rho = sampler.haar_pure();
    REQUIRE(max_collectibility(rho).y >= oracle_y_max(rho) - 1e-10);
  }
}

TEST_CASE("witness values of the reference states", "[witness]") {
  CHECK(collective_witness(bell_state()).w == Approx(-0.25).margin(1e-9));
  CHECK(collective_witness(separable_state()).w == Approx(0.0).margin(1e-9));
  CHECK(collective_witness(maximally_mixed_state()).w == Approx(0.75).margin(1e-9));
  CHECK(collective_witness(bell_state()).detects_entanglement());
}

TEST_CASE("witness components reassemble to the same value", "[witness]") {
  StateSampler sampler(53);
  for (int n = 0; n < 500; ++n) {
    const auto w = collective_witness(sampler.mixed());
    REQUIRE(w.recompute() == Approx(w.w).margin(1e-14));
  }
}

TEST_CASE("witness agrees with the direct matrix oracle", "[witness]") {
  StateSampler sampler(59);
  for (int n = 0; n < 2000; ++n) {
    const auto rho = n % 2 ? sampler.mixed() : sampler.haar_pure();
    REQUIRE(collective_witness(rho).w == Approx(oracle_w(rho)).margin(1e-10));
  }
}

TEST_CASE("Werner closed form 3/4 - p^2", "[witness][property]") {
  // Validate the closed form against the direct computation first.
  StateSampler sampler(61);
  for (int n = 0; n < 5; ++n) {
    const double p = sampler.uniform(0.0, 1.0);
    REQUIRE(oracle_w(werner_state(p)) == Approx(0.75 - p * p).margin(1e-12));
  }
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    REQUIRE(collective_witness(werner_state(p)).w == Approx(0.75 - p * p).margin(1e-9));
  }
}

TEST_CASE("Werner grid matches the reference values to two decimals", "[witness]") {
  const double p[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const double table[] = {0.75, 0.69, 0.50, 0.19, -0.25};
  for (int i = 0; i < 5; ++i) {
    CHECK(collective_witness(werner_state(p[i])).w == Approx(table[i]).margin(0.005));
  }
}

TEST_CASE("Werner witness threshold at sqrt(3)/2", "[witness][property]") {
  const double root = std::sqrt(3.0) / 2.0;
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    if (std::abs(p - root) < 1e-9) continue;
    REQUIRE((collective_witness(werner_state(p)).w < 0.0) == (p > root));
  }
}

TEST_CASE("Werner parameter outside [0, 1] is rejected", "[witness]") {
  CHECK_THROWS_AS(werner_state(1.5), Error);
  CHECK_THROWS_AS(werner_state(-0.1), Error);
}

TEST_CASE("negativity examples", "[witness]") {
  CHECK(negativity(bell_state()) == Approx(1.0).margin(1e-12));
  CHECK(negativity(separable_state()) == Approx(0.0).margin(1e-12));
  CHECK(negativity(maximally_mixed_state()) == Approx(0.0).margin(1e-12));
  // Werner: the only partial-transpose eigenvalue that can go negative is (1 - 3p)/4.
  for (double p : {0.4, 0.6, 0.9}) {
    CHECK(negativity(werner_state(p)) == Approx((3.0 * p - 1.0) / 2.0).margin(1e-12));
  }
}

TEST_CASE("witness is sound on pure and mixed ensembles", "[witness][property]") {
  StateSampler sampler(kDefaultEnsembleSeed);
  int detected = 0;
  for (int n = 0; n < 10000; ++n) {
    const auto pure = sampler.haar_pure();
    if (collective_witness(pure).w < 0.0) {
      ++detected;
      REQUIRE(negativity(pure) > 0.0);
    }
    const auto mixed = sampler.mixed();
    if (collective_witness(mixed).w < 0.0) {
      ++detected;
      REQUIRE(negativity(mixed) > 0.0);
    }
  }
  CHECK(detected > 0);
}

TEST_CASE("pure-state detection equivalence", "[witness][property]") {
  StateSampler sampler(kDefaultEnsembleSeed + 1);
  for (int n = 0; n < 10000; ++n) {
    const auto rho = sampler.haar_pure();
    REQUIRE(max_collectibility(rho).exceeds_threshold(1e-9) == (negativity(rho) > 1e-9));
  }
}

Matrix2c phase_rotation(double a, double b) {
  Matrix2c u = Matrix2c::Zero();
  u(0, 0) = std::polar(1.0, a);
  u(1, 1) = std::polar(1.0, b);
  return u;
}

TwoQubitState rotated(const TwoQubitState& rho, const Matrix2c& ua, const Matrix2c& ub) {
  const Matrix4c u = kron(ua, ub);
  return TwoQubitState::from_matrix(u * rho.matrix() * u.adjoint());
}

TEST_CASE("witness is invariant under diagonal phase rotations of pure and Werner states",
          "[witness][property]") {
  StateSampler sampler(67);
  for (int n = 0; n < 10000; ++n) {
    const auto rho = n % 10 == 0 ? werner_state(sampler.uniform(0.0, 1.0)) : sampler.haar_pure();
    const auto ua = phase_rotation(sampler.uniform(0.0, 2 * kPi), sampler.uniform(0.0, 2 * kPi));
    const auto ub = phase_rotation(sampler.uniform(0.0, 2 * kPi), sampler.uniform(0.0, 2 * kPi));
    REQUIRE(collective_witness(rotated(rho, ua, ub)).w ==
            Approx(collective_witness(rho).w).margin(1e-10));
  }
}

TEST_CASE("H/V-frame witness components are invariant under diagonal phase rotations",
          "[witness][property]") {
  StateSampler sampler(71);
  for (int n = 0; n < 5000; ++n) {
    const auto rho = sampler.mixed();
    const auto ua = phase_rotation(sampler.uniform(0.0, 2 * kPi), sampler.uniform(0.0, 2 * kPi));
    const auto ub = phase_rotation(sampler.uniform(0.0, 2 * kPi), sampler.uniform(0.0, 2 * kPi));
    const auto before = collective_witness(rho);
    const auto after = collective_witness(rotated(rho, ua, ub));
    REQUIRE(after.gramm.g_plus == Approx(before.gramm.g_plus).margin(1e-10));
    REQUIRE(after.gramm.g_minus == Approx(before.gramm.g_minus).margin(1e-10));
    REQUIRE(after.gramm.g == Approx(before.gramm.g).margin(1e-10));
    REQUIRE(after.weighted_z == Approx(before.weighted_z).margin(1e-10));
  }
}

TEST_CASE("witness of mixed states is invariant under B phases and A phase flips",
          "[witness][property]") {
  StateSampler sampler(73);
  for (int n = 0; n < 5000; ++n) {
    const auto rho = sampler.mixed();
    const double a = sampler.uniform(0.0, 2 * kPi);
    // Relative phase 0 or pi maps the diagonal projectors onto themselves or each other.
    const auto ua = phase_rotation(a, a + (n % 2 ? kPi : 0.0));
    const auto ub = phase_rotation(sampler.uniform(0.0, 2 * kPi), sampler.uniform(0.0, 2 * kPi));
    REQUIRE(collective_witness(rotated(rho, ua, ub)).w ==
            Approx(collective_witness(rho).w).margin(1e-10));
  }
}

TEST_CASE("a generic A phase moves the diagonal projection off phi = 0", "[witness]") {
  // rho with coherence between the HH and VH blocks: the D-projected conditional
  // state of B depends on the relative phase on A, so x+- and W change.
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = 0.5;
  m(2, 2) = 0.25;
  m(3, 3) = 0.25;
  m(0, 2) = 0.25;
  m(2, 0) = 0.25;
  const auto rho = TwoQubitState::from_matrix(m);
  const auto turned = rotated(rho, phase_rotation(0.0, kPi / 2), Matrix2c::Identity());
  CHECK(collective_witness(turned).gramm.g == Approx(collective_witness(rho).gramm.g).margin(1e-12));
  CHECK(std::abs(collective_witness(turned).w - collective_witness(rho).w) > 1e-3);
}

TEST_CASE("product states never exceed the pure-state threshold", "[witness][property]") {
  StateSampler sampler(79);
  std::normal_distribution<double> gauss;
  for (int n = 0; n < 2000; ++n) {
    Vector2c a, b;
    for (int i = 0; i < 2; ++i) {
      a(i) = Complex(gauss(sampler.engine()), gauss(sampler.engine()));
      b(i) = Complex(gauss(sampler.engine()), gauss(sampler.engine()));
    }
    const auto rho = TwoQubitState::pure(kron(Vector2c(a.normalized()), Vector2c(b.normalized())));
    // Y = p+ p- / 4 for a product state: the radicand vanishes identically.
    const double theta = sampler.uniform(0.0, kPi);
    const auto e = gramm_elements(rho, {theta, 0.0});
    REQUIRE(e.radicand < 1e-15);
    REQUIRE(collectibility::collectibility(rho, {theta, 0.0}).y ==
            Approx(e.p_plus * e.p_minus / 4).margin(1e-15));
    REQUIRE_FALSE(max_collectibility(rho).exceeds_threshold(1e-12));
  }
}

TEST_CASE("radicand agrees with the naive difference away from cancellation", "[witness]") {
  StateSampler sampler(83);
  for (int n = 0; n < 2000; ++n) {
    const auto e = gramm_elements(sampler.mixed(), {sampler.uniform(0.0, kPi), 0.0});
    REQUIRE(e.radicand == Approx(e.g_plus * e.g_minus - e.g * e.g).margin(1e-12));
  }
}
