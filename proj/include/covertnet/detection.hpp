#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "covertnet/model.hpp"

namespace covertnet {

/// Mean received powers at the warden. lambda1 is the jamming power, lambda2
/// the power of Alice's signal; both exclude the noise floor sigma2_w.
struct DetectionScales {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double sigma2_w = 0.0;
};

/// Whether the warden's distances are taken as exact or at the worst point
/// of their uncertainty radii.
enum class LocationModel { nominal, robust };

DetectionScales detection_scales(const SystemParams& params, double d_aw, double d_jw,
                                 double p_j);
DetectionScales detection_scales(const SystemParams& params, const Topology& topo, double p_j);

/// Worst case over the location uncertainty: the jammer is taken tau_jw
/// farther and Alice tau_aw closer. Throws ValidationError if tau_aw >= d_aw.
DetectionScales robust_scales(const SystemParams& params, const Topology& topo, double p_j);

DetectionScales scales_for(const SystemParams& params, const Topology& topo, double p_j,
                           LocationModel model);

/// Density of the warden's received (noise-free) power. std::nullopt flags the
/// degenerate psi0 law with lambda1 = 0, which is a point mass at zero.
std::optional<double> pdf_gamma_w(double x, const DetectionScales& s, Hypothesis h);

/// P(Y/n > theta | psi0) in the large-n limit.
double p_false_alarm(double theta, const DetectionScales& s);
/// P(Y/n < theta | psi1) in the large-n limit.
double p_missed_detection(double theta, const DetectionScales& s);

/// Threshold minimizing p_FA + p_MD. std::nullopt when lambda1 = 0: without
/// jamming the warden separates the hypotheses perfectly.
std::optional<double> optimal_threshold(const DetectionScales& s);

/// p_FA + p_MD at the optimal threshold, 1 - (l1/l2)^(l1/(l2-l1)).
double min_detection_error(const DetectionScales& s);

/// min_detection_error >= 1 - epsilon, evaluated in log form.
bool covertness_satisfied(const DetectionScales& s, double epsilon);

/// ln(epsilon) - ln(1 - min_detection_error): nonnegative exactly when
/// covertness holds; -infinity without jamming.
double covertness_log_margin(const DetectionScales& s, double epsilon);

struct DetectionOutcome {
  std::optional<double> theta_op;
  double p_fa = 0.0;
  double p_md = 0.0;
  double min_error = 0.0;
};

DetectionOutcome evaluate_detection(const DetectionScales& s);

/// Smallest jamming fraction meeting the covertness budget, by bisection on
/// [0, 1]. std::nullopt if full jamming is not enough.
std::optional<double> min_jammer_fraction(const SystemParams& params, const Topology& topo,
                                          double epsilon,
                                          LocationModel model = LocationModel::nominal);

enum class RadiometerMode {
  asymptotic,  ///< Y/n = sigma2_w + gamma_w exactly
  finite_n,    ///< Y/n = (sigma2_w + gamma_w) * chi2(2n) / (2n)
};

struct EmpiricalDetection {
  double theta = 0.0;
  double p_fa = 0.0;
  double p_md = 0.0;
  std::uint64_t slots = 0;
};

/// Monte Carlo estimate of the warden's error rates. Every slot draws its own
/// fading for both hypotheses; one pass serves all thresholds.
std::vector<EmpiricalDetection> simulate_detection(const DetectionScales& s,
                                                   std::span<const double> thetas,
                                                   std::uint64_t slots, std::uint64_t seed,
                                                   RadiometerMode mode = RadiometerMode::asymptotic,
                                                   std::uint64_t n_symbols = 1);

EmpiricalDetection simulate_detection(const SystemParams& params, const Topology& topo,
                                      const PowerAllocation& alloc, double theta,
                                      std::uint64_t slots, std::uint64_t seed,
                                      RadiometerMode mode = RadiometerMode::asymptotic);

}  // namespace covertnet
