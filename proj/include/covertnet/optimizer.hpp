#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "covertnet/detection.hpp"
#include "covertnet/model.hpp"

namespace covertnet {

/// Concave pieces of the transmission-slot rate: total = gamma - omega.
struct DcParts {
  double gamma = 0.0;
  double omega = 0.0;
};

DcParts dc_parts(const PowerAllocation& alloc, const EffectiveGains& g);

/// Gradient with respect to (p_ab, p_j).
struct Gradient {
  double d_pab = 0.0;
  double d_pj = 0.0;
};

Gradient grad_omega(const PowerAllocation& alloc, const EffectiveGains& g);

/// First-order model f(a) + grad f(a) . (x - a) of a function around an anchor.
struct Linearization {
  double anchor_pab = 0.0;
  double anchor_pj = 0.0;
  double value = 0.0;
  Gradient slope;

  double operator()(double p_ab, double p_j) const {
    return value + slope.d_pab * (p_ab - anchor_pab) + slope.d_pj * (p_j - anchor_pj);
  }
};

/// Tangent plane of omega. omega is concave, so this over-estimates it.
Linearization linearize_omega(const PowerAllocation& anchor, const EffectiveGains& g);

/// Bob's secrecy QoS constraint written as t - lambda >= 0, both concave.
class SecrecyConstraint {
 public:
  SecrecyConstraint(const EffectiveGains& g, double r_min) : g_(g), r_min_(r_min) {}

  double t(double p_ab, double p_j) const;
  double lambda(double p_ab, double p_j) const;
  Gradient lambda_gradient(double p_ab, double p_j) const;
  Linearization linearize_lambda(const PowerAllocation& anchor) const;

  /// t - lambda, i.e. the unclamped secrecy rate minus the floor.
  double slack(double p_ab, double p_j) const { return t(p_ab, p_j) - lambda(p_ab, p_j); }

 private:
  EffectiveGains g_;
  double r_min_;
};

/// Carol's QoS constraint written as k - sigma >= 0, plus its exact reduction
/// to an upper bound on p_ab.
class CarolConstraint {
 public:
  CarolConstraint(const EffectiveGains& g, double r_min) : g_(g), r_min_(r_min) {}

  double k() const;
  double sigma(double p_ab) const;
  Linearization linearize_sigma(const PowerAllocation& anchor) const;

  /// Largest p_ab meeting the floor, clamped to [0, 1]; std::nullopt when even
  /// p_ab = 0 falls short.
  std::optional<double> p_ab_max() const;

 private:
  EffectiveGains g_;
  double r_min_;
};

/// Lower bound p_j >= p_j_min imposed by covertness; std::nullopt if
/// infeasible at full jamming.
std::optional<double> covert_constraint(const SystemParams& params, const Topology& topo,
                                        LocationModel model = LocationModel::nominal);

/// Whether some t >= 0 satisfies the auxiliary-variable pair
/// l1 ln(l1/l2) - t ln(eps) <= 0 and l2 - l1 <= t. Kept for diagnosis only;
/// the solver enforces covertness through covert_constraint().
bool epigraph_covert_feasible(const DetectionScales& s, double epsilon);

enum class InitStrategy {
  half_split,  ///< p_ab = min(0.5, p_ab_max), p_j = 1
  carol_edge,  ///< p_ab = p_ab_max, p_j = 1
  both,        ///< run from each of the above, keep the better end point
};

InitStrategy parse_init(std::string_view name);
std::string_view to_string(InitStrategy s);

struct SolveOptions {
  double outer_tol = 1e-6;
  int max_outer_iters = 50;
  double inner_tol = 1e-8;
  double grid_resolution = 1e-3;
  InitStrategy init = InitStrategy::both;
  bool epigraph_diagnostic = false;

  void validate() const;
};

enum class SolveStatus { optimal, infeasible, max_iters };
enum class BindingConstraint { none, covertness, carol_qos, bob_secrecy };

std::string_view to_string(SolveStatus s);
std::string_view to_string(BindingConstraint b);

struct SolveResult {
  PowerAllocation allocation{0.0, 0.0};
  double objective = 0.0;
  double secrecy_rate = 0.0;
  double carol_rate = 0.0;
  SolveStatus status = SolveStatus::infeasible;
  BindingConstraint infeasible_by = BindingConstraint::none;
  int iterations = 0;
  std::vector<double> trajectory;
  double p_j_min = 0.0;
  double p_ab_max = 0.0;
  std::optional<bool> epigraph_feasible;

  bool feasible() const { return status != SolveStatus::infeasible; }
};

/// The SCA iterate.
struct DCState {
  PowerAllocation iterate{0.0, 1.0};
  int mu = 0;
  double surrogate_value = 0.0;
  double exact_value = 0.0;
};

/// Box and QoS data defining the convexified feasible set.
struct SubproblemBounds {
  double p_ab_max = 1.0;
  double p_j_min = 0.0;
  double r_bob_min = 0.0;
};

struct SubproblemSolution {
  PowerAllocation allocation{0.0, 0.0};
  double surrogate_value = 0.0;
};

/// gamma - (tangent of omega at the anchor).
double surrogate_objective(const Linearization& omega_tangent, const EffectiveGains& g,
                           double p_ab, double p_j);

/// Maximizes the concave surrogate at state.iterate over
/// {p_ab in [0, p_ab_max], p_j in [p_j_min, 1], t - tangent(lambda) >= 0}.
/// Returns std::nullopt if that set is empty. Never returns a point whose
/// surrogate value is below the anchor's when the anchor is admissible.
std::optional<SubproblemSolution> solve_subproblem(const DCState& state, const EffectiveGains& g,
                                                   const SubproblemBounds& bounds,
                                                   double inner_tol = 1e-8);

SolveResult sca_solve(const SystemParams& params, const Topology& topo, const EffectiveGains& g,
                      const SolveOptions& opts = {});

/// sca_solve with the covertness bound taken at the worst-case warden location.
SolveResult robust_solve(const SystemParams& params, const Topology& topo,
                         const EffectiveGains& g, const SolveOptions& opts = {});

SolveResult solve(const SystemParams& params, const Topology& topo, const EffectiveGains& g,
                  const SolveOptions& opts, LocationModel model);

/// Exhaustive scan of the (p_ab, p_j) lattice with spacing `resolution`
/// (1.0 always included). Exact constraints, lexicographic tie-break toward
/// smaller p_ab then smaller p_j.
SolveResult grid_oracle(const SystemParams& params, const Topology& topo,
                        const EffectiveGains& g, double resolution,
                        LocationModel model = LocationModel::nominal);

/// Exact constraint slacks of an allocation: Bob secrecy rate, Carol rate and covertness as
/// ln(epsilon) - ln(a). All nonnegative means feasible.
struct ConstraintSlacks {
  double bob_secrecy = 0.0;
  double carol_qos = 0.0;
  double covertness = 0.0;

  double worst() const;
};

ConstraintSlacks constraint_slacks(const SystemParams& params, const Topology& topo,
                                   const EffectiveGains& g, const PowerAllocation& alloc,
                                   LocationModel model = LocationModel::nominal);

}  // namespace covertnet
