#include "covertnet/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covertnet/parallel.hpp"
#include "covertnet/random.hpp"

namespace covertnet {
namespace {

// expm1(u)/u with its limit 1 at u = 0.
double expm1_ratio(double u) { return u == 0.0 ? 1.0 : std::expm1(u) / u; }

// ln(l2/l1) / (l2/l1 - 1) for l1, l2 > 0, with its limit 1 at l1 = l2.
// Written through log1p so it stays exact as the two scales merge.
double log_ratio_slope(double l1, double l2) {
  const double delta = (l2 - l1) / l1;
  if (delta == 0.0) return 1.0;
  if (std::abs(delta) < 0.5) return std::log1p(delta) / delta;
  return std::log(l2 / l1) / delta;
}

DetectionScales scales_at(const SystemParams& params, double d_aw, double d_jw, double p_j) {
  DetectionScales s;
  s.lambda1 = p_j * params.p_jmax.watts() * std::pow(d_jw, -params.alpha);
  s.lambda2 = params.p_max.watts() * std::pow(d_aw, -params.alpha);
  s.sigma2_w = params.noise.willie;
  return s;
}

}  // namespace

DetectionScales detection_scales(const SystemParams& params, double d_aw, double d_jw,
                                 double p_j) {
  return scales_at(params, d_aw, d_jw, p_j);
}

DetectionScales detection_scales(const SystemParams& params, const Topology& topo, double p_j) {
  return scales_at(params, topo.distances().aw, topo.distances().jw, p_j);
}

DetectionScales robust_scales(const SystemParams& params, const Topology& topo, double p_j) {
  const LinkDistances& d = topo.distances();
  if (!(params.tau_aw < d.aw)) {
    throw ValidationError("tau_aw", "must be smaller than the Alice-Willie distance");
  }
  return scales_at(params, d.aw - params.tau_aw, d.jw + params.tau_jw, p_j);
}

DetectionScales scales_for(const SystemParams& params, const Topology& topo, double p_j,
                           LocationModel model) {
  return model == LocationModel::robust ? robust_scales(params, topo, p_j)
                                        : detection_scales(params, topo, p_j);
}

std::optional<double> pdf_gamma_w(double x, const DetectionScales& s, Hypothesis h) {
  const double l1 = s.lambda1;
  const double l2 = s.lambda2;
  if (h == Hypothesis::psi0) {
    if (l1 <= 0.0) return std::nullopt;
    return x < 0.0 ? 0.0 : std::exp(-x / l1) / l1;
  }
  if (x < 0.0) return 0.0;
  if (l1 <= 0.0) return std::exp(-x / l2) / l2;
  const double u = x * (l2 - l1) / (l1 * l2);
  if (std::abs(u) <= 1.0) return std::exp(-x / l1) * (x / (l1 * l2)) * expm1_ratio(u);
  return (std::exp(-x / l2) - std::exp(-x / l1)) / (l2 - l1);
}

double p_false_alarm(double theta, const DetectionScales& s) {
  const double x = theta - s.sigma2_w;
  if (x < 0.0) return 1.0;
  if (s.lambda1 <= 0.0) return 0.0;
  return std::exp(-x / s.lambda1);
}

double p_missed_detection(double theta, const DetectionScales& s) {
  const double x = theta - s.sigma2_w;
  if (x < 0.0) return 0.0;
  const double l1 = s.lambda1;
  const double l2 = s.lambda2;
  if (l1 <= 0.0) return -std::expm1(-x / l2);
  // 1 - [l2 e^{-x/l2} - l1 e^{-x/l1}] / (l2 - l1); near l1 = l2 the bracket is
  // rewritten as e^{-x/l1} (1 + (x/l1) expm1(u)/u) to avoid cancellation.
  const double u = x * (l2 - l1) / (l1 * l2);
  double survival;
  if (std::abs(u) <= 1.0) {
    survival = std::exp(-x / l1) * (1.0 + (x / l1) * expm1_ratio(u));
  } else {
    survival = (l2 * std::exp(-x / l2) - l1 * std::exp(-x / l1)) / (l2 - l1);
  }
  return std::clamp(1.0 - survival, 0.0, 1.0);
}

std::optional<double> optimal_threshold(const DetectionScales& s) {
  if (s.lambda1 <= 0.0) return std::nullopt;
  return s.lambda2 * log_ratio_slope(s.lambda1, s.lambda2) + s.sigma2_w;
}

double min_detection_error(const DetectionScales& s) {
  if (s.lambda1 <= 0.0) return 0.0;
  return -std::expm1(-log_ratio_slope(s.lambda1, s.lambda2));
}

bool covertness_satisfied(const DetectionScales& s, double epsilon) {
  return covertness_log_margin(s, epsilon) >= 0.0;
}

double covertness_log_margin(const DetectionScales& s, double epsilon) {
  if (s.lambda1 <= 0.0) return -std::numeric_limits<double>::infinity();
  // ln a = -ln(l2/l1) / (l2/l1 - 1)
  return std::log(epsilon) + log_ratio_slope(s.lambda1, s.lambda2);
}

DetectionOutcome evaluate_detection(const DetectionScales& s) {
  DetectionOutcome out;
  out.theta_op = optimal_threshold(s);
  if (!out.theta_op) return out;
  out.p_fa = p_false_alarm(*out.theta_op, s);
  out.p_md = p_missed_detection(*out.theta_op, s);
  out.min_error = min_detection_error(s);
  return out;
}

std::optional<double> min_jammer_fraction(const SystemParams& params, const Topology& topo,
                                          double epsilon, LocationModel model) {
  auto ok = [&](double p_j) {
    return covertness_satisfied(scales_for(params, topo, p_j, model), epsilon);
  };
  if (!ok(1.0)) return std::nullopt;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<EmpiricalDetection> simulate_detection(const DetectionScales& s,
                                                   std::span<const double> thetas,
                                                   std::uint64_t slots, std::uint64_t seed,
                                                   RadiometerMode mode,
                                                   std::uint64_t n_symbols) {
  if (slots == 0) throw ValidationError("slots", "must be >= 1");
  if (mode == RadiometerMode::finite_n && n_symbols == 0) {
    throw ValidationError("n_symbols", "must be >= 1");
  }
  constexpr std::uint64_t kBlock = 1 << 16;
  const std::uint64_t blocks = (slots + kBlock - 1) / kBlock;
  std::vector<double> idle(slots);
  std::vector<double> busy(slots);
  const double n = static_cast<double>(n_symbols);

  parallel_for(blocks, [&](std::size_t b) {
    RandomStream rng(seed, b);
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(slots, begin + kBlock);
    for (std::uint64_t i = begin; i < end; ++i) {
      const double g_aw = rng.exponential();
      const double g_jw = rng.exponential();
      const double jam = s.lambda1 * g_jw;
      double y0 = s.sigma2_w + jam;
      double y1 = s.sigma2_w + s.lambda2 * g_aw + jam;
      if (mode == RadiometerMode::finite_n) {
        // chi2(2n)/(2n) == Gamma(n, 1)/n
        y0 *= rng.gamma(n) / n;
        y1 *= rng.gamma(n) / n;
      }
      idle[i] = y0;
      busy[i] = y1;
    }
  });

  std::sort(idle.begin(), idle.end());
  std::sort(busy.begin(), busy.end());
  const double total = static_cast<double>(slots);
  std::vector<EmpiricalDetection> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    const auto alarms = idle.end() - std::upper_bound(idle.begin(), idle.end(), theta);
    const auto misses = std::lower_bound(busy.begin(), busy.end(), theta) - busy.begin();
    out.push_back({theta, static_cast<double>(alarms) / total,
                   static_cast<double>(misses) / total, slots});
  }
  return out;
}

EmpiricalDetection simulate_detection(const SystemParams& params, const Topology& topo,
                                      const PowerAllocation& alloc, double theta,
                                      std::uint64_t slots, std::uint64_t seed,
                                      RadiometerMode mode) {
  const double thetas[] = {theta};
  return simulate_detection(detection_scales(params, topo, alloc.p_j()), thetas, slots, seed,
                            mode, params.n_symbols)
      .front();
}

}  // namespace covertnet
