#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "collectibility/golden_section.hpp"

using collectibility::golden_section_maximize;
using collectibility::scan_and_refine_maximum;
using Catch::Approx;

TEST_CASE("golden section finds the vertex of a parabola", "[golden]") {
  const auto f = [](double x) { return -(x - 0.3) * (x - 0.3) + 2.0; };
  const auto best = golden_section_maximize(f, -1.0, 1.0, 1e-9);
  CHECK(best.x == Approx(0.3).margin(1e-8));
  CHECK(best.value == Approx(2.0).margin(1e-15));
}

TEST_CASE("golden section handles a maximum on the boundary", "[golden]") {
  const auto f = [](double x) { return x; };
  const auto best = golden_section_maximize(f, 0.0, 1.0, 1e-9);
  CHECK(best.x == Approx(1.0).margin(1e-8));
}

TEST_CASE("golden section rejects an inverted bracket", "[golden]") {
  CHECK_THROWS(golden_section_maximize([](double x) { return x; }, 1.0, 0.0, 1e-6));
}

TEST_CASE("scan and refine finds the global peak of a multimodal profile", "[golden]") {
  // Local maxima at 0.25 (height 1) and 0.75 (height 1.5).
  const auto f = [](double x) {
    return std::exp(-200.0 * (x - 0.25) * (x - 0.25)) +
           1.5 * std::exp(-200.0 * (x - 0.75) * (x - 0.75));
  };
  const auto best = scan_and_refine_maximum(f, 0.0, 1.0, 101, 1e-9);
  CHECK(best.x == Approx(0.75).margin(1e-6));
  CHECK(best.value == Approx(1.5).margin(1e-10));
}

TEST_CASE("scan and refine matches a dense brute-force scan", "[golden]") {
  const auto f = [](double t) { return std::sin(3.0 * t) * std::cos(t) + 0.1 * t; };
  double brute = -1e300;
  for (int i = 0; i <= 200000; ++i) {
    brute = std::max(brute, f(std::numbers::pi * i / 200000.0));
  }
  const auto best = scan_and_refine_maximum(f, 0.0, std::numbers::pi, 181, 1e-9);
  CHECK(best.value >= brute - 1e-10);
}

TEST_CASE("scan and refine requires at least three samples", "[golden]") {
  CHECK_THROWS(scan_and_refine_maximum([](double x) { return x; }, 0.0, 1.0, 2, 1e-6));
}
