#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "covertnet/model.hpp"
#include "covertnet/optimizer.hpp"

namespace covertnet {

enum class InfeasiblePolicy {
  zero,     ///< infeasible slots count as zero rate
  exclude,  ///< infeasible slots are left out of the means
};

InfeasiblePolicy parse_policy(std::string_view name);
std::string_view to_string(InfeasiblePolicy p);

struct SlotResult {
  ChannelRealization channel;
  EffectiveGains gains;
  SolveResult solution;
};

/// One transmission slot: fading drawn from the stream (seed, trial_index),
/// then the per-slot power allocation problem solved.
SlotResult run_slot(const SystemParams& params, const Topology& topo, std::uint64_t seed,
                    std::uint64_t trial_index, bool robust, const SolveOptions& opts = {});

struct SweepRow {
  double value = 0.0;
  double mean_total = 0.0;
  double mean_secrecy = 0.0;
  double mean_carol = 0.0;
  double outage = 0.0;
  double se_total = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t feasible = 0;
};

/// Mean optimized transmission-slot rate over `trials` fading realizations.
SweepRow average_rate(const SystemParams& params, const Topology& topo, std::uint64_t trials,
                      std::uint64_t seed, InfeasiblePolicy policy, bool robust = false,
                      const SolveOptions& opts = {});

enum class SweepParameter { d_ab, d_ac, d_au, d_aw_jw, p_max_dbw, node_position };
enum class Axis { x, y };

SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::d_ab;
  std::vector<double> values;
  std::uint64_t trials = 500;
  std::uint64_t seed = 1;
  InfeasiblePolicy policy = InfeasiblePolicy::zero;
  bool robust = false;
  /// Every point reuses the same fading draws when set; otherwise point i uses
  /// the stream family derive_seed(seed, i).
  bool common_random_numbers = true;
  /// Direction along which a distance sweep moves its node, away from Alice.
  /// Defaults to the ray from Alice through the node's configured position.
  std::optional<Point> bearing;
  /// Node and coordinate moved by a node_position sweep.
  Node node = Node::bob;
  Axis axis = Axis::x;

  void validate() const;
};

struct Scenario {
  SystemParams params;
  Topology topo;
};

/// The parameters and topology of one sweep point.
Scenario apply_sweep_value(const SweepSpec& spec, double value, const SystemParams& params,
                           const Topology& topo);

std::uint64_t point_seed(const SweepSpec& spec, std::size_t point_index);

std::vector<SweepRow> sweep(const SweepSpec& spec, const SystemParams& params,
                            const Topology& topo, const SolveOptions& opts = {});

inline constexpr double kCovertJammerDbw = 20.0;

/// Rows over Alice's power budget with the jammer budget fixed at 20 dBW.
std::vector<SweepRow> power_sweep(const SystemParams& params, const Topology& topo,
                                  std::span<const double> p_max_dbw_values, std::uint64_t trials,
                                  std::uint64_t seed,
                                  InfeasiblePolicy policy = InfeasiblePolicy::zero,
                                  const SolveOptions& opts = {});

struct SurfaceCell {
  double d_aw = 0.0;
  double d_jw = 0.0;
  double min_error = 0.0;
  bool covert = false;
  /// Same quantities at the worst case of the params' uncertainty radii.
  double robust_min_error = 0.0;
  bool robust_covert = false;
};

/// Closed-form warden error over a grid of (d_aw, d_jw) pairs, row-major in d_aw.
std::vector<SurfaceCell> detection_surface(const SystemParams& params,
                                           std::span<const double> d_aw_values,
                                           std::span<const double> d_jw_values, double p_j);

/// Spearman rank correlation with average ranks for ties. NaN if either
/// input is constant.
double spearman(std::span<const double> x, std::span<const double> y);

enum class Figure { fig2, fig3, fig4, fig5, fig6, fig7 };

Figure parse_figure(std::string_view name);
std::string_view to_string(Figure f);

/// Preset scenario and sweep reproducing one of the reference experiments,
/// built on top of a base configuration.
struct FigureSetup {
  Figure figure = Figure::fig3;
  SystemParams params;
  Topology topo = Topology::reference();
  SweepSpec spec;
  /// Willie distance grids, used by fig2 only.
  std::vector<double> d_aw_grid;
  std::vector<double> d_jw_grid;
};

FigureSetup figure_setup(Figure figure, const SystemParams& base, const Topology& base_topo,
                         std::optional<std::uint64_t> trials, std::uint64_t seed);

}  // namespace covertnet
