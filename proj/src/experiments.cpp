#include "covertnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "covertnet/detection.hpp"
#include "covertnet/parallel.hpp"
#include "covertnet/random.hpp"

namespace covertnet {

InfeasiblePolicy parse_policy(std::string_view name) {
  if (name == "zero") return InfeasiblePolicy::zero;
  if (name == "exclude") return InfeasiblePolicy::exclude;
  throw ValidationError("policy", "expected 'zero' or 'exclude', got '" + std::string(name) + "'");
}

std::string_view to_string(InfeasiblePolicy p) {
  return p == InfeasiblePolicy::zero ? "zero" : "exclude";
}

SlotResult run_slot(const SystemParams& params, const Topology& topo, std::uint64_t seed,
                    std::uint64_t trial_index, bool robust, const SolveOptions& opts) {
  RandomStream rng(seed, trial_index);
  SlotResult out;
  out.channel = sample_channels(rng);
  out.gains = effective_gains(params, topo, out.channel);
  out.solution = solve(params, topo, out.gains, opts,
                       robust ? LocationModel::robust : LocationModel::nominal);
  return out;
}

SweepRow average_rate(const SystemParams& params, const Topology& topo, std::uint64_t trials,
                      std::uint64_t seed, InfeasiblePolicy policy, bool robust,
                      const SolveOptions& opts) {
  if (trials < 1) throw ValidationError("trials", "must be >= 1");
  params.validate(topo);
  std::vector<SolveResult> slots(trials);
  parallel_for(trials, [&](std::size_t i) {
    slots[i] = run_slot(params, topo, seed, i, robust, opts).solution;
  });

  SweepRow row;
  row.trials = trials;
  double sum_total = 0.0;
  double sum_secrecy = 0.0;
  double sum_carol = 0.0;
  for (const auto& s : slots) {
    if (!s.feasible()) continue;
    ++row.feasible;
    sum_total += s.objective;
    sum_secrecy += s.secrecy_rate;
    sum_carol += s.carol_rate;
  }
  row.outage = static_cast<double>(trials - row.feasible) / static_cast<double>(trials);
  const std::uint64_t counted = policy == InfeasiblePolicy::zero ? trials : row.feasible;
  if (counted == 0) return row;
  const double n = static_cast<double>(counted);
  row.mean_total = sum_total / n;
  row.mean_secrecy = sum_secrecy / n;
  row.mean_carol = sum_carol / n;
  if (counted > 1) {
    double ss = 0.0;
    for (const auto& s : slots) {
      if (!s.feasible() && policy == InfeasiblePolicy::exclude) continue;
      const double v = s.feasible() ? s.objective : 0.0;
      ss += (v - row.mean_total) * (v - row.mean_total);
    }
    row.se_total = std::sqrt(ss / (n - 1.0) / n);
  }
  return row;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "d_ab") return SweepParameter::d_ab;
  if (name == "d_ac") return SweepParameter::d_ac;
  if (name == "d_au") return SweepParameter::d_au;
  if (name == "d_aw_jw") return SweepParameter::d_aw_jw;
  if (name == "p_max_dbw") return SweepParameter::p_max_dbw;
  if (name == "node_position") return SweepParameter::node_position;
  throw ValidationError("sweep.parameter", "unknown parameter '" + std::string(name) + "'");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::d_ab: return "d_ab";
    case SweepParameter::d_ac: return "d_ac";
    case SweepParameter::d_au: return "d_au";
    case SweepParameter::d_aw_jw: return "d_aw_jw";
    case SweepParameter::p_max_dbw: return "p_max_dbw";
    case SweepParameter::node_position: return "node_position";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (values.empty()) throw ValidationError("sweep.values", "must not be empty");
  const bool up = values.size() < 2 || values[1] > values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
      throw ValidationError("sweep.values", "must be strictly monotone");
    }
  }
  if (trials < 1) throw ValidationError("sweep.trials", "must be >= 1");
  if (bearing && bearing->x == 0.0 && bearing->y == 0.0) {
    throw ValidationError("sweep.bearing", "must be a nonzero direction");
  }
}

namespace {

Node swept_node(SweepParameter p, Node fallback) {
  switch (p) {
    case SweepParameter::d_ab: return Node::bob;
    case SweepParameter::d_ac: return Node::carol;
    case SweepParameter::d_au: return Node::untrusted;
    case SweepParameter::d_aw_jw: return Node::willie;
    default: return fallback;
  }
}

}  // namespace

Scenario apply_sweep_value(const SweepSpec& spec, double value, const SystemParams& params,
                           const Topology& topo) {
  Scenario s{params, topo};
  switch (spec.parameter) {
    case SweepParameter::p_max_dbw:
      s.params.p_max = PowerLevel::from_dbw(value);
      break;
    case SweepParameter::node_position: {
      Point p = topo.positions().at(spec.node);
      (spec.axis == Axis::x ? p.x : p.y) = value;
      s.topo = topo.with_node(spec.node, p);
      break;
    }
    default: {
      if (!(value > 0.0)) throw ValidationError("sweep.values", "distances must be > 0");
      const Node node = swept_node(spec.parameter, spec.node);
      const Point alice = topo.positions().alice;
      Point dir = spec.bearing.value_or(Point{topo.positions().at(node).x - alice.x,
                                              topo.positions().at(node).y - alice.y});
      const double norm = std::hypot(dir.x, dir.y);
      s.topo = topo.with_node(node, {alice.x + value * dir.x / norm, alice.y + value * dir.y / norm});
      break;
    }
  }
  s.params.validate(s.topo);
  return s;
}

std::uint64_t point_seed(const SweepSpec& spec, std::size_t point_index) {
  return spec.common_random_numbers ? spec.seed : derive_seed(spec.seed, point_index);
}

std::vector<SweepRow> sweep(const SweepSpec& spec, const SystemParams& params,
                            const Topology& topo, const SolveOptions& opts) {
  spec.validate();
  std::vector<SweepRow> rows;
  rows.reserve(spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const Scenario s = apply_sweep_value(spec, spec.values[i], params, topo);
    SweepRow row = average_rate(s.params, s.topo, spec.trials, point_seed(spec, i), spec.policy,
                                spec.robust, opts);
    row.value = spec.values[i];
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> power_sweep(const SystemParams& params, const Topology& topo,
                                  std::span<const double> p_max_dbw_values, std::uint64_t trials,
                                  std::uint64_t seed, InfeasiblePolicy policy,
                                  const SolveOptions& opts) {
  SystemParams p = params;
  p.p_jmax = PowerLevel::from_dbw(kCovertJammerDbw);
  SweepSpec spec;
  spec.parameter = SweepParameter::p_max_dbw;
  spec.values.assign(p_max_dbw_values.begin(), p_max_dbw_values.end());
  spec.trials = trials;
  spec.seed = seed;
  spec.policy = policy;
  return sweep(spec, p, topo, opts);
}

std::vector<SurfaceCell> detection_surface(const SystemParams& params,
                                           std::span<const double> d_aw_values,
                                           std::span<const double> d_jw_values, double p_j) {
  if (d_aw_values.empty() || d_jw_values.empty()) {
    throw ValidationError("grid", "distance grids must not be empty");
  }
  std::vector<SurfaceCell> cells;
  cells.reserve(d_aw_values.size() * d_jw_values.size());
  for (double d_aw : d_aw_values) {
    for (double d_jw : d_jw_values) {
      if (!(d_aw > 0.0 && d_jw > 0.0)) throw ValidationError("grid", "distances must be > 0");
      SurfaceCell c{d_aw, d_jw};
      const DetectionScales nominal = detection_scales(params, d_aw, d_jw, p_j);
      c.min_error = min_detection_error(nominal);
      c.covert = covertness_satisfied(nominal, params.epsilon);
      if (params.tau_aw < d_aw) {
        const DetectionScales worst =
            detection_scales(params, d_aw - params.tau_aw, d_jw + params.tau_jw, p_j);
        c.robust_min_error = min_detection_error(worst);
        c.robust_covert = covertness_satisfied(worst, params.epsilon);
      }
      cells.push_back(c);
    }
  }
  return cells;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("spearman", "needs two equal-length samples of size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

Figure parse_figure(std::string_view name) {
  if (name == "fig2") return Figure::fig2;
  if (name == "fig3") return Figure::fig3;
  if (name == "fig4") return Figure::fig4;
  if (name == "fig5") return Figure::fig5;
  if (name == "fig6") return Figure::fig6;
  if (name == "fig7") return Figure::fig7;
  throw ValidationError("figure", "expected fig2..fig7, got '" + std::string(name) + "'");
}

std::string_view to_string(Figure f) {
  switch (f) {
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
    case Figure::fig5: return "fig5";
    case Figure::fig6: return "fig6";
    case Figure::fig7: return "fig7";
  }
  return "?";
}

namespace {

std::vector<double> arange(double first, double last, double step) {
  std::vector<double> v;
  const auto n = static_cast<std::size_t>(std::llround((last - first) / step));
  for (std::size_t i = 0; i <= n; ++i) v.push_back(first + step * static_cast<double>(i));
  return v;
}

}  // namespace

FigureSetup figure_setup(Figure figure, const SystemParams& base, const Topology& base_topo,
                         std::optional<std::uint64_t> trials, std::uint64_t seed) {
  FigureSetup f;
  f.figure = figure;
  f.params = base;
  f.topo = base_topo;
  // The default 8 dBW jammer cannot meet epsilon = 0.1 at the reference
  // geometry, so every covert-constrained preset runs the jammer at 20 dBW.
  f.params.p_jmax = PowerLevel::from_dbw(kCovertJammerDbw);
  f.spec.seed = seed;
  f.spec.trials = trials.value_or(figure == Figure::fig7 ? 2000 : 500);

  switch (figure) {
    case Figure::fig2:
      f.d_aw_grid = arange(2.0, 20.0, 2.0);
      f.d_jw_grid = arange(2.0, 20.0, 2.0);
      f.spec.values = {1.0};
      break;
    case Figure::fig3:
      f.spec.parameter = SweepParameter::d_ab;
      f.spec.values = arange(5.0, 12.0, 1.0);
      break;
    case Figure::fig4:
      f.spec.parameter = SweepParameter::d_ac;
      f.spec.values = arange(5.0, 12.0, 1.0);
      break;
    case Figure::fig5:
      // The untrusted user recedes on the side of Alice away from the jammer.
      // Along the reference ray through the jammer, jamming at the untrusted
      // user fades faster than Alice's signal and the trend reverses.
      f.spec.parameter = SweepParameter::d_au;
      f.spec.values = arange(5.0, 12.0, 1.0);
      f.spec.bearing = Point{std::sqrt(0.5), -std::sqrt(0.5)};
      break;
    case Figure::fig6: {
      // Bob and Carol at 5 m; the warden recedes from Alice and the jammer.
      // The rate depends on the warden only through covert feasibility, which
      // flips near d_aw = 1.03 m for a 20 dBW jammer.
      Positions p = base_topo.positions();
      p.bob = {-5.0, 0.0};
      p.carol = {5.0, 0.0};
      f.topo = Topology::from_positions(p);
      f.spec.parameter = SweepParameter::d_aw_jw;
      f.spec.values = arange(0.25, 2.0, 0.25);
      f.spec.bearing = Point{0.0, -1.0};
      break;
    }
    case Figure::fig7:
      f.spec.parameter = SweepParameter::p_max_dbw;
      f.spec.values = arange(2.0, 10.0, 2.0);
      break;
  }
  return f;
}

}  // namespace covertnet
