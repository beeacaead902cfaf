#pragma once

// Independent numerical oracles used only by the tests. None of these call
// into the closed forms they are meant to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>

namespace oracle {

/// Composite Simpson rule on [a, b]; n is rounded up to an even count.
template <typename F>
double simpson(F&& f, double a, double b, long n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (long i = 1; i < n; ++i) s += f(a + static_cast<double>(i) * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Density of the sum of two independent exponentials with means l1, l2,
/// written as a convolution integral and integrated numerically.
inline double hypoexp_pdf_by_convolution(double x, double l1, double l2) {
  auto integrand = [&](double u) {
    return std::exp(-u / l1) / l1 * std::exp(-(x - u) / l2) / l2;
  };
  const double n = std::clamp(400.0 * x / std::min(l1, l2), 4000.0, 2e6);
  return simpson(integrand, 0.0, x, static_cast<long>(n));
}

/// Minimizer and minimum of f on the uniform grid lo, lo + step, ..., hi.
template <typename F>
std::pair<double, double> grid_minimize(F&& f, double lo, double hi, double step) {
  const auto n = static_cast<long>(std::ceil((hi - lo) / step));
  double best_x = lo;
  double best = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= n; ++i) {
    const double x = std::min(hi, lo + static_cast<double>(i) * step);
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

/// Central difference of f at x.
template <typename F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Best value of f(a, b) over a box, subject to feasible(a, b): a coarse scan
/// followed by successively finer scans around the incumbent, until the
/// spacing drops below `resolution`.
template <typename F, typename G>
std::pair<double, std::pair<double, double>> grid_refine_max(F&& f, G&& feasible, double a_lo,
                                                             double a_hi, double b_lo,
                                                             double b_hi, double resolution) {
  double best = -std::numeric_limits<double>::infinity();
  std::pair<double, double> arg{a_lo, b_lo};
  double ca_lo = a_lo, ca_hi = a_hi, cb_lo = b_lo, cb_hi = b_hi;
  int n = 200;
  for (;;) {
    const double step_a = (ca_hi - ca_lo) / n;
    const double step_b = (cb_hi - cb_lo) / n;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double a = ca_lo + i * step_a;
        const double b = cb_lo + j * step_b;
        if (!feasible(a, b)) continue;
        const double v = f(a, b);
        if (v > best) {
          best = v;
          arg = {a, b};
        }
      }
    }
    if (std::max(step_a, step_b) <= resolution) break;
    ca_lo = std::max(a_lo, arg.first - 4 * step_a);
    ca_hi = std::min(a_hi, arg.first + 4 * step_a);
    cb_lo = std::max(b_lo, arg.second - 4 * step_b);
    cb_hi = std::min(b_hi, arg.second + 4 * step_b);
    n = 80;
  }
  return {best, arg};
}

/// Empirical (p_fa, p_md) of the energy detector from a plain exponential
/// sampler, independent of the library's stream machinery.
inline std::pair<double, double> detector_monte_carlo(double l1, double l2, double sigma2,
                                                      double theta, long slots,
                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> unit(1.0);
  long fa = 0;
  long md = 0;
  for (long i = 0; i < slots; ++i) {
    const double jam = l1 * unit(rng);
    const double sig = l2 * unit(rng);
    if (sigma2 + jam > theta) ++fa;
    if (sigma2 + jam + sig < theta) ++md;
  }
  return {static_cast<double>(fa) / slots, static_cast<double>(md) / slots};
}

}  // namespace oracle
