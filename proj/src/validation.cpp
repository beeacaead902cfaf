#include "covertnet/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "covertnet/detection.hpp"
#include "covertnet/experiments.hpp"
#include "covertnet/optimizer.hpp"
#include "covertnet/random.hpp"

namespace covertnet {
namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

DetectionScales random_scales(RandomStream& rng) {
  // Log-uniform over three decades each, noise included.
  auto lu = [&](double lo, double hi) { return lo * std::pow(hi / lo, rng.uniform()); };
  return {lu(0.01, 10.0), lu(0.01, 10.0), lu(1e-4, 1e-1)};
}

// Composite Simpson on [a, b] with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

CheckResult check_quadrature(std::uint64_t seed) {
  RandomStream rng(seed, 1);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const DetectionScales s = random_scales(rng);
    const double theta = s.sigma2_w + rng.uniform() * 3.0 * std::max(s.lambda1, s.lambda2);
    const double x = theta - s.sigma2_w;
    auto pdf0 = [&](double v) { return *pdf_gamma_w(v, s, Hypothesis::psi0); };
    auto pdf1 = [&](double v) { return *pdf_gamma_w(v, s, Hypothesis::psi1); };
    // Enough panels to resolve the faster of the two decays.
    const double steps = 400.0 * x / std::min(s.lambda1, s.lambda2);
    const int n = 2 * static_cast<int>(std::clamp(steps, 2000.0, 2e6) / 2);
    const double fa = 1.0 - simpson(pdf0, 0.0, x, n);
    const double md = simpson(pdf1, 0.0, x, n);
    worst = std::max({worst, std::abs(fa - p_false_alarm(theta, s)),
                      std::abs(md - p_missed_detection(theta, s))});
  }
  return {"detection_vs_quadrature", worst < 1e-7, fmt("max abs error %.3g", worst)};
}

CheckResult check_threshold(std::uint64_t seed) {
  RandomStream rng(seed, 2);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const DetectionScales s = random_scales(rng);
    const double top = s.sigma2_w + 10.0 * std::max(s.lambda1, s.lambda2);
    const int n = 20000;
    double best = 2.0;
    for (int i = 0; i <= n; ++i) {
      const double th = s.sigma2_w + (top - s.sigma2_w) * i / n;
      best = std::min(best, p_false_alarm(th, s) + p_missed_detection(th, s));
    }
    // The grid can only match or exceed the true minimum.
    worst = std::max(worst, min_detection_error(s) - best);
  }
  return {"threshold_vs_grid_search", worst < 1e-9, fmt("max closed-form excess %.3g", worst)};
}

CheckResult check_min_error_identity(std::uint64_t seed) {
  RandomStream rng(seed, 3);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const DetectionScales s = random_scales(rng);
    const double th = *optimal_threshold(s);
    worst = std::max(worst, std::abs(p_false_alarm(th, s) + p_missed_detection(th, s) -
                                     min_detection_error(s)));
  }
  return {"min_error_identity", worst < 1e-12, fmt("max abs error %.3g", worst)};
}

CheckResult check_monte_carlo(std::uint64_t seed) {
  RandomStream rng(seed, 4);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const DetectionScales s = random_scales(rng);
    std::vector<double> thetas;
    for (int i = 1; i <= 10; ++i) thetas.push_back(s.sigma2_w + 0.3 * i * std::max(s.lambda1, s.lambda2));
    for (const auto& e : simulate_detection(s, thetas, 200000, derive_seed(seed, 40 + k))) {
      worst = std::max({worst, std::abs(e.p_fa - p_false_alarm(e.theta, s)),
                        std::abs(e.p_md - p_missed_detection(e.theta, s))});
    }
  }
  // 200k slots: standard error <= 0.0011, so 0.006 is over five sigma.
  return {"detection_vs_monte_carlo", worst < 0.006, fmt("max abs error %.3g", worst)};
}

EffectiveGains random_gains(RandomStream& rng) {
  auto lu = [&](double lo, double hi) { return lo * std::pow(hi / lo, rng.uniform()); };
  return {lu(0.1, 100.0), lu(0.1, 100.0), lu(0.1, 100.0), lu(0.1, 1000.0)};
}

CheckResult check_gradient(std::uint64_t seed) {
  RandomStream rng(seed, 5);
  double worst = 0.0;
  const double h = 1e-6;
  for (int k = 0; k < 200; ++k) {
    const EffectiveGains g = random_gains(rng);
    const double pab = 0.01 + 0.98 * rng.uniform();
    const double pj = 0.01 + 0.98 * rng.uniform();
    auto om = [&](double a, double j) { return dc_parts(PowerAllocation(a, j), g).omega; };
    const Gradient an = grad_omega(PowerAllocation(pab, pj), g);
    const double fa = (om(pab + h, pj) - om(pab - h, pj)) / (2 * h);
    const double fj = (om(pab, pj + h) - om(pab, pj - h)) / (2 * h);
    const double scale = std::max({std::abs(an.d_pab), std::abs(an.d_pj), 1e-3});
    worst = std::max({worst, std::abs(an.d_pab - fa) / scale, std::abs(an.d_pj - fj) / scale});
  }
  return {"gradient_vs_finite_differences", worst < 1e-5, fmt("max rel error %.3g", worst)};
}

CheckResult check_rate_identity(std::uint64_t seed) {
  RandomStream rng(seed, 6);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const EffectiveGains g = random_gains(rng);
    const PowerAllocation a(rng.uniform(), rng.uniform());
    const DcParts d = dc_parts(a, g);
    const double direct = carol_rate(a, g) + secrecy_margin(a, g);
    worst = std::max(worst, std::abs(d.gamma - d.omega - direct));
  }
  return {"dc_split_identity", worst < 1e-10, fmt("max abs error %.3g", worst)};
}

struct Slot {
  SystemParams params;
  Topology topo = Topology::reference();
  EffectiveGains g;
};

Slot covert_slot(std::uint64_t seed, std::uint64_t i) {
  Slot s;
  s.params = SystemParams::reference();
  s.params.p_jmax = PowerLevel::from_dbw(kCovertJammerDbw);
  RandomStream rng(seed, 1000 + i);
  s.g = effective_gains(s.params, s.topo, sample_channels(rng));
  return s;
}

CheckResult check_sca(std::uint64_t seed) {
  int solved = 0;
  double worst_drop = 0.0;
  double worst_slack = 0.0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const Slot s = covert_slot(seed, i);
    const SolveResult r = sca_solve(s.params, s.topo, s.g);
    if (!r.feasible()) continue;
    ++solved;
    for (std::size_t k = 1; k < r.trajectory.size(); ++k) {
      worst_drop = std::max(worst_drop, r.trajectory[k - 1] - r.trajectory[k]);
    }
    worst_slack = std::min(worst_slack,
                           constraint_slacks(s.params, s.topo, s.g, r.allocation).worst());
  }
  const bool ok = solved > 0 && worst_drop <= 0.0 && worst_slack >= -1e-9;
  return {"sca_monotone_and_feasible", ok,
          fmt("largest objective drop %.3g, worst slack %.3g", worst_drop, worst_slack)};
}

CheckResult check_oracle(std::uint64_t seed) {
  double worst = 0.0;
  int compared = 0;
  for (std::uint64_t i = 0; i < 5; ++i) {
    const Slot s = covert_slot(seed, i);
    const SolveResult r = sca_solve(s.params, s.topo, s.g);
    const SolveResult o = grid_oracle(s.params, s.topo, s.g, 1e-3);
    if (r.feasible() != o.feasible()) {
      return {"sca_vs_exhaustive_search", false, "feasibility verdicts disagree"};
    }
    if (!r.feasible()) continue;
    ++compared;
    worst = std::max(worst, std::abs(r.objective - o.objective));
  }
  return {"sca_vs_exhaustive_search", worst <= 1e-2,
          fmt("max objective gap %.3g over %g slots", worst, compared)};
}

CheckResult check_robust(std::uint64_t seed) {
  (void)seed;
  SystemParams p = SystemParams::reference();
  p.p_jmax = PowerLevel::from_dbw(kCovertJammerDbw);
  bool ok = true;
  int checked = 0;
  for (double tau : {0.5, 1.0}) {
    p.tau_aw = p.tau_jw = tau;
    for (double d_aw = 2.0; d_aw <= 20.0; d_aw += 2.0) {
      Positions pos = Topology::reference().positions();
      pos.willie = {0.0, -d_aw};
      const Topology t = Topology::from_positions(pos);
      const auto robust = min_jammer_fraction(p, t, p.epsilon, LocationModel::robust);
      if (!robust) continue;
      ++checked;
      const auto nominal = min_jammer_fraction(p, t, p.epsilon);
      ok = ok && nominal && *nominal <= *robust &&
           covertness_satisfied(detection_scales(p, t, *robust), p.epsilon);
    }
  }
  return {"robust_dominates_nominal", ok && checked > 0, fmt("%g geometries checked", checked)};
}

CheckResult check_determinism(std::uint64_t seed) {
  SystemParams p = SystemParams::reference();
  p.p_jmax = PowerLevel::from_dbw(kCovertJammerDbw);
  const SweepRow a = average_rate(p, Topology::reference(), 50, seed, InfeasiblePolicy::zero);
  const SweepRow b = average_rate(p, Topology::reference(), 50, seed, InfeasiblePolicy::zero);
  const bool ok = a.mean_total == b.mean_total && a.se_total == b.se_total &&
                  a.feasible == b.feasible;
  return {"seeded_runs_repeat", ok, fmt("mean rate %.12g", a.mean_total)};
}

}  // namespace

std::vector<CheckResult> run_validation(std::uint64_t seed) {
  return {check_quadrature(seed),   check_threshold(seed),      check_min_error_identity(seed),
          check_monte_carlo(seed),  check_gradient(seed),       check_rate_identity(seed),
          check_sca(seed),          check_oracle(seed),         check_robust(seed),
          check_determinism(seed)};
}

}  // namespace covertnet
