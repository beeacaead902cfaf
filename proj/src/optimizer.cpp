#include "covertnet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace covertnet {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Given a predicate true at `good` and false at `bad`, narrows the bracket to
// adjacent doubles and returns the point on the `good` side.
double bisect(double good, double bad, const std::function<bool(double)>& pred) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (good + bad);
    if (mid == good || mid == bad) break;
    (pred(mid) ? good : bad) = mid;
  }
  return good;
}

struct GoldenResult {
  double x;
  double value;
};

// Maximizes a unimodal function on [lo, hi] down to bracket width `tol`. The
// endpoints are candidates too, since constrained optima often sit there.
template <typename F>
GoldenResult golden_max(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  GoldenResult best{lo, f(lo)};
  if (!(hi > lo)) return best;
  if (const double fh = f(hi); fh > best.value) best = {hi, fh};
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

// The surrogate objective and the convexified secrecy constraint share the
// term log2((1-p_ab) gamma_u + p_j gamma_j + 1); everything else is affine.
// At fixed p_ab both are concave in p_j with a closed-form maximizer, and
// maximizing out p_j leaves functions concave in p_ab.
class ConvexifiedProblem {
 public:
  ConvexifiedProblem(const EffectiveGains& g, const Linearization& omega,
                     const Linearization& lambda, const SubproblemBounds& b)
      : g_(g), omega_(omega), lambda_(lambda), bounds_(b) {
    objective_offset_ = std::log2(g.gamma_c + 1.0) + std::log2(g.gamma_b + 1.0);
    constraint_offset_ = std::log2(g.gamma_b + 1.0) - b.r_bob_min;
  }

  double objective(double p, double q) const {
    return objective_offset_ + shared(p, q) - omega_(p, q);
  }
  double constraint(double p, double q) const {
    return constraint_offset_ + shared(p, q) - lambda_(p, q);
  }

  double constraint_peak(double p) const {
    return constraint(p, std::clamp(peak(p, lambda_.slope.d_pj), bounds_.p_j_min, 1.0));
  }

  struct Slice {
    bool feasible = false;
    double q = 0.0;
    double value = -kInf;
  };

  Slice best_slice(double p) const {
    const double qmin = bounds_.p_j_min;
    const double qc = std::clamp(peak(p, lambda_.slope.d_pj), qmin, 1.0);
    if (constraint(p, qc) < 0.0) return {};
    auto ok = [&](double q) { return constraint(p, q) >= 0.0; };
    const double lo = ok(qmin) ? qmin : bisect(qc, qmin, ok);
    const double hi = ok(1.0) ? 1.0 : bisect(qc, 1.0, ok);
    const double q = std::clamp(peak(p, omega_.slope.d_pj), lo, hi);
    return {true, q, objective(p, q)};
  }

 private:
  double shared(double p, double q) const {
    return std::log2((1.0 - p) * g_.gamma_u + q * g_.gamma_j + 1.0);
  }

  // Unconstrained maximizer in p_j of log2(A + q gamma_j) - slope * q.
  double peak(double p, double slope) const {
    if (g_.gamma_j > 0.0) {
      if (slope <= 0.0) return kInf;
      return 1.0 / (slope * kLn2) - ((1.0 - p) * g_.gamma_u + 1.0) / g_.gamma_j;
    }
    // Flat or linear in p_j; ties go to the larger jamming fraction.
    return slope > 0.0 ? -kInf : kInf;
  }

  EffectiveGains g_;
  Linearization omega_;
  Linearization lambda_;
  SubproblemBounds bounds_;
  double objective_offset_ = 0.0;
  double constraint_offset_ = 0.0;
};

std::vector<double> lattice(double resolution) {
  std::vector<double> v;
  for (std::size_t i = 0;; ++i) {
    const double x = static_cast<double>(i) * resolution;
    if (x >= 1.0 - 1e-12) break;
    v.push_back(x);
  }
  v.push_back(1.0);
  return v;
}

SolveResult finish(SolveResult r, const EffectiveGains& g) {
  r.secrecy_rate = secrecy_rate(r.allocation, g);
  r.carol_rate = carol_rate(r.allocation, g);
  r.objective = r.secrecy_rate + r.carol_rate;
  return r;
}

}  // namespace

DcParts dc_parts(const PowerAllocation& alloc, const EffectiveGains& g) {
  const double p = alloc.p_ab();
  const double q = alloc.p_j();
  DcParts d;
  d.gamma = std::log2(g.gamma_c + 1.0) + std::log2(g.gamma_b + 1.0) +
            std::log2((1.0 - p) * g.gamma_u + q * g.gamma_j + 1.0);
  d.omega = std::log2(p * g.gamma_c + 1.0) + std::log2((1.0 - p) * g.gamma_b + 1.0) +
            std::log2(g.gamma_u + q * g.gamma_j + 1.0);
  return d;
}

Gradient grad_omega(const PowerAllocation& alloc, const EffectiveGains& g) {
  const double p = alloc.p_ab();
  const double q = alloc.p_j();
  return {(g.gamma_c / (p * g.gamma_c + 1.0) - g.gamma_b / ((1.0 - p) * g.gamma_b + 1.0)) / kLn2,
          g.gamma_j / (g.gamma_u + q * g.gamma_j + 1.0) / kLn2};
}

Linearization linearize_omega(const PowerAllocation& anchor, const EffectiveGains& g) {
  return {anchor.p_ab(), anchor.p_j(), dc_parts(anchor, g).omega, grad_omega(anchor, g)};
}

double SecrecyConstraint::t(double p_ab, double p_j) const {
  return std::log2(g_.gamma_b + 1.0) +
         std::log2((1.0 - p_ab) * g_.gamma_u + p_j * g_.gamma_j + 1.0) - r_min_;
}

double SecrecyConstraint::lambda(double p_ab, double p_j) const {
  return std::log2((1.0 - p_ab) * g_.gamma_b + 1.0) +
         std::log2(g_.gamma_u + p_j * g_.gamma_j + 1.0);
}

Gradient SecrecyConstraint::lambda_gradient(double p_ab, double p_j) const {
  return {-g_.gamma_b / ((1.0 - p_ab) * g_.gamma_b + 1.0) / kLn2,
          g_.gamma_j / (g_.gamma_u + p_j * g_.gamma_j + 1.0) / kLn2};
}

Linearization SecrecyConstraint::linearize_lambda(const PowerAllocation& anchor) const {
  return {anchor.p_ab(), anchor.p_j(), lambda(anchor.p_ab(), anchor.p_j()),
          lambda_gradient(anchor.p_ab(), anchor.p_j())};
}

double CarolConstraint::k() const { return std::log2(g_.gamma_c + 1.0) - r_min_; }

double CarolConstraint::sigma(double p_ab) const { return std::log2(p_ab * g_.gamma_c + 1.0); }

Linearization CarolConstraint::linearize_sigma(const PowerAllocation& anchor) const {
  return {anchor.p_ab(), anchor.p_j(), sigma(anchor.p_ab()),
          {g_.gamma_c / (anchor.p_ab() * g_.gamma_c + 1.0) / kLn2, 0.0}};
}

std::optional<double> CarolConstraint::p_ab_max() const {
  if (r_min_ <= 0.0) return 1.0;
  if (g_.gamma_c <= 0.0) return std::nullopt;
  const double bound = ((g_.gamma_c + 1.0) / std::exp2(r_min_) - 1.0) / g_.gamma_c;
  if (bound < 0.0) return std::nullopt;
  double p = std::clamp(bound, 0.0, 1.0);
  // Round toward the feasible side so the exact constraint holds at the bound.
  auto meets = [&](double x) {
    return k() - sigma(x) >= 0.0 && carol_rate(PowerAllocation(x, 0.0), g_) >= r_min_;
  };
  while (p > 0.0 && !meets(p)) p = std::nextafter(p, 0.0);
  if (!meets(p)) return std::nullopt;
  return p;
}

std::optional<double> covert_constraint(const SystemParams& params, const Topology& topo,
                                        LocationModel model) {
  return min_jammer_fraction(params, topo, params.epsilon, model);
}

bool epigraph_covert_feasible(const DetectionScales& s, double epsilon) {
  const double l1 = s.lambda1;
  const double l2 = s.lambda2;
  if (l1 <= 0.0) return false;
  const double lhs = l1 * std::log(l1 / l2);
  // t * ln(eps) is decreasing in t, so the smallest admissible t is the best.
  const double t = std::max(0.0, l2 - l1);
  return lhs - t * std::log(epsilon) <= 0.0;
}

void SolveOptions::validate() const {
  if (!(outer_tol > 0.0)) throw ValidationError("solver.outer_tol", "must be > 0");
  if (max_outer_iters < 1) throw ValidationError("solver.max_outer_iters", "must be >= 1");
  if (!(inner_tol > 0.0)) throw ValidationError("solver.inner_tol", "must be > 0");
  if (!(grid_resolution > 0.0 && grid_resolution <= 1.0)) {
    throw ValidationError("solver.grid_resolution", "must lie in (0, 1]");
  }
}

InitStrategy parse_init(std::string_view name) {
  if (name == "half_split") return InitStrategy::half_split;
  if (name == "carol_edge") return InitStrategy::carol_edge;
  if (name == "both") return InitStrategy::both;
  throw ValidationError("init", "expected 'half_split', 'carol_edge' or 'both', got '" +
                                    std::string(name) + "'");
}

std::string_view to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::half_split: return "half_split";
    case InitStrategy::carol_edge: return "carol_edge";
    case InitStrategy::both: return "both";
  }
  return "?";
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iters: return "max-iters";
  }
  return "?";
}

std::string_view to_string(BindingConstraint b) {
  switch (b) {
    case BindingConstraint::none: return "none";
    case BindingConstraint::covertness: return "covertness";
    case BindingConstraint::carol_qos: return "carol_qos";
    case BindingConstraint::bob_secrecy: return "bob_secrecy";
  }
  return "?";
}

double surrogate_objective(const Linearization& omega_tangent, const EffectiveGains& g,
                           double p_ab, double p_j) {
  return dc_parts(PowerAllocation(p_ab, p_j), g).gamma - omega_tangent(p_ab, p_j);
}

std::optional<SubproblemSolution> solve_subproblem(const DCState& state, const EffectiveGains& g,
                                                   const SubproblemBounds& bounds,
                                                   double inner_tol) {
  const double pmax = bounds.p_ab_max;
  const double qmin = bounds.p_j_min;
  if (pmax < 0.0 || qmin > 1.0) return std::nullopt;

  const SecrecyConstraint secrecy(g, bounds.r_bob_min);
  const Linearization omega = linearize_omega(state.iterate, g);
  const Linearization lambda = secrecy.linearize_lambda(state.iterate);
  const ConvexifiedProblem problem(g, omega, lambda, bounds);

  const double ap = state.iterate.p_ab();
  const double aq = state.iterate.p_j();
  const bool anchor_admissible = ap <= pmax && aq >= qmin && problem.constraint(ap, aq) >= 0.0;

  // The admissible p_ab values form an interval on which the constraint peak
  // over p_j is nonnegative. Find one point inside, then its ends.
  double inside;
  if (anchor_admissible) {
    inside = ap;
  } else {
    const auto peak = golden_max([&](double p) { return problem.constraint_peak(p); }, 0.0, pmax,
                                 1e-13);
    if (peak.value < 0.0) return std::nullopt;
    inside = peak.x;
  }
  auto admissible = [&](double p) { return problem.constraint_peak(p) >= 0.0; };
  const double lo = admissible(0.0) ? 0.0 : bisect(inside, 0.0, admissible);
  const double hi = admissible(pmax) ? pmax : bisect(inside, pmax, admissible);

  const auto best = golden_max([&](double p) { return problem.best_slice(p).value; }, lo, hi,
                               inner_tol);
  const auto slice = problem.best_slice(best.x);
  SubproblemSolution out{PowerAllocation(best.x, slice.q), slice.value};
  if (!slice.feasible) {
    if (!anchor_admissible) return std::nullopt;
    out = {state.iterate, problem.objective(ap, aq)};
  }
  if (anchor_admissible) {
    const double anchor_value = problem.objective(ap, aq);
    if (anchor_value > out.surrogate_value) out = {state.iterate, anchor_value};
  }
  return out;
}

SolveResult solve(const SystemParams& params, const Topology& topo, const EffectiveGains& g,
                  const SolveOptions& opts, LocationModel model) {
  params.validate(topo);
  opts.validate();
  SolveResult result;
  if (opts.epigraph_diagnostic) {
    result.epigraph_feasible =
        epigraph_covert_feasible(scales_for(params, topo, 1.0, model), params.epsilon);
  }

  const auto p_j_min = covert_constraint(params, topo, model);
  if (!p_j_min) {
    result.infeasible_by = BindingConstraint::covertness;
    return result;
  }
  result.p_j_min = *p_j_min;

  const auto p_ab_max = CarolConstraint(g, params.r_carol_min).p_ab_max();
  if (!p_ab_max) {
    result.infeasible_by = BindingConstraint::carol_qos;
    return result;
  }
  result.p_ab_max = *p_ab_max;

  // Each start sits at full jamming, which maximizes every slack, with p_ab
  // moved into the secrecy-feasible range if needed (the slack is monotone
  // in p_ab).
  const SecrecyConstraint secrecy(g, params.r_bob_min);
  auto sec_ok = [&](double p) { return secrecy.slack(p, 1.0) >= 0.0; };
  auto lift = [&](double p0) -> std::optional<double> {
    if (sec_ok(p0)) return p0;
    if (sec_ok(*p_ab_max)) return bisect(*p_ab_max, p0, sec_ok);
    if (sec_ok(0.0)) return bisect(0.0, p0, sec_ok);
    return std::nullopt;
  };

  const SubproblemBounds bounds{*p_ab_max, *p_j_min, params.r_bob_min};
  auto exact = [&](const PowerAllocation& a) {
    const DcParts d = dc_parts(a, g);
    return d.gamma - d.omega;
  };
  auto run = [&](double p0) {
    SolveResult r = result;
    DCState state{PowerAllocation(p0, 1.0), 0, 0.0, 0.0};
    state.exact_value = exact(state.iterate);
    state.surrogate_value = state.exact_value;
    r.trajectory.push_back(state.exact_value);
    r.status = SolveStatus::max_iters;
    while (state.mu < opts.max_outer_iters) {
      const auto next = solve_subproblem(state, g, bounds, opts.inner_tol);
      ++state.mu;
      if (!next) {
        // The anchor is always admissible, so this only guards against a
        // degenerate numerical state.
        r.status = SolveStatus::optimal;
        break;
      }
      const double value = exact(next->allocation);
      const double gain = value - state.exact_value;
      if (gain >= 0.0) {
        state.iterate = next->allocation;
        state.exact_value = value;
        state.surrogate_value = next->surrogate_value;
      }
      r.trajectory.push_back(state.exact_value);
      if (gain < opts.outer_tol) {
        r.status = SolveStatus::optimal;
        break;
      }
    }
    r.iterations = state.mu;
    r.allocation = state.iterate;
    return r;
  };

  std::vector<double> starts;
  if (opts.init != InitStrategy::carol_edge) starts.push_back(std::min(0.5, *p_ab_max));
  if (opts.init != InitStrategy::half_split) starts.push_back(*p_ab_max);
  std::optional<SolveResult> best;
  for (double p0 : starts) {
    const auto lifted = lift(p0);
    if (!lifted) {
      result.infeasible_by = BindingConstraint::bob_secrecy;
      return result;
    }
    SolveResult r = run(*lifted);
    if (!best || r.trajectory.back() > best->trajectory.back()) best = std::move(r);
  }
  result = std::move(*best);
  return finish(std::move(result), g);
}

SolveResult sca_solve(const SystemParams& params, const Topology& topo, const EffectiveGains& g,
                      const SolveOptions& opts) {
  return solve(params, topo, g, opts, LocationModel::nominal);
}

SolveResult robust_solve(const SystemParams& params, const Topology& topo,
                         const EffectiveGains& g, const SolveOptions& opts) {
  return solve(params, topo, g, opts, LocationModel::robust);
}

SolveResult grid_oracle(const SystemParams& params, const Topology& topo,
                        const EffectiveGains& g, double resolution, LocationModel model) {
  if (!(resolution > 0.0 && resolution <= 1.0)) {
    throw ValidationError("resolution", "must lie in (0, 1]");
  }
  const std::vector<double> values = lattice(resolution);
  std::vector<char> covert_ok(values.size());
  std::vector<char> carol_ok(values.size());
  bool any_covert = false;
  bool any_carol = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    covert_ok[i] =
        covertness_satisfied(scales_for(params, topo, values[i], model), params.epsilon);
    carol_ok[i] = carol_rate(PowerAllocation(values[i], 0.0), g) >= params.r_carol_min;
    any_covert = any_covert || covert_ok[i];
    any_carol = any_carol || carol_ok[i];
  }

  SolveResult result;
  bool found = false;
  double best = -kInf;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!carol_ok[i]) continue;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (!covert_ok[j]) continue;
      const PowerAllocation a(values[i], values[j]);
      if (secrecy_margin(a, g) < params.r_bob_min) continue;
      const double value = total_rate(a, g);
      if (value > best) {
        best = value;
        result.allocation = a;
        found = true;
      }
    }
  }
  if (!found) {
    result.infeasible_by = !any_covert  ? BindingConstraint::covertness
                           : !any_carol ? BindingConstraint::carol_qos
                                        : BindingConstraint::bob_secrecy;
    return result;
  }
  result.status = SolveStatus::optimal;
  return finish(std::move(result), g);
}

double ConstraintSlacks::worst() const { return std::min({bob_secrecy, carol_qos, covertness}); }

ConstraintSlacks constraint_slacks(const SystemParams& params, const Topology& topo,
                                   const EffectiveGains& g, const PowerAllocation& alloc,
                                   LocationModel model) {
  return {secrecy_margin(alloc, g) - params.r_bob_min, carol_rate(alloc, g) - params.r_carol_min,
          covertness_log_margin(scales_for(params, topo, alloc.p_j(), model), params.epsilon)};
}

}  // namespace covertnet
