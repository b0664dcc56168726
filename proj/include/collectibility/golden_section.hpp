#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace collectibility {

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi],
/// stopping once the bracket is narrower than `tolerance`.
template <typename F>
Extremum golden_section_maximize(F&& f, double lo, double hi, double tolerance) {
  if (!(hi >= lo)) {
    throw std::invalid_argument("golden_section_maximize: empty bracket");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tolerance) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

/// Global maximum on [lo, hi]: uniform scan over `samples` points, then
/// golden-section refinement inside the neighbouring grid cells of the best
/// sample. Never returns less than the best scanned value.
template <typename F>
Extremum scan_and_refine_maximum(F&& f, double lo, double hi, std::size_t samples,
                                 double tolerance) {
  if (samples < 3) {
    throw std::invalid_argument("scan_and_refine_maximum: need >= 3 samples");
  }
  const double step = (hi - lo) / static_cast<double>(samples - 1);
  std::size_t best = 0;
  double best_value = f(lo);
  for (std::size_t i = 1; i < samples; ++i) {
    const double v = f(lo + step * static_cast<double>(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double x_best = lo + step * static_cast<double>(best);
  const double left = best == 0 ? lo : x_best - step;
  const double right = best + 1 == samples ? hi : x_best + step;
  const Extremum refined = golden_section_maximize(f, left, right, tolerance);
  if (refined.value >= best_value) {
    return refined;
  }
  return {x_best, best_value};
}

}  // namespace collectibility
