#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "covertnet/detection.hpp"
#include "covertnet/random.hpp"
#include "oracles.hpp"

namespace covertnet {
namespace {

constexpr double kLn2 = std::numbers::ln2;

DetectionScales random_scales(RandomStream& rng) {
  auto lu = [&](double lo, double hi) { return lo * std::pow(hi / lo, rng.uniform()); };
  return {lu(0.01, 10.0), lu(0.01, 10.0), lu(1e-4, 1e-1)};
}

TEST(Density, ErlangLimitAtEqualScales) {
  const DetectionScales s{1.0, 1.0, 0.0};
  EXPECT_NEAR(*pdf_gamma_w(1.0, s, Hypothesis::psi1), std::exp(-1.0), 1e-12);
  // Continuity across the switch between the two evaluation forms.
  for (double eps : {1e-6, -1e-6}) {
    const DetectionScales n{1.0, 1.0 + eps, 0.0};
    EXPECT_NEAR(*pdf_gamma_w(1.0, n, Hypothesis::psi1), std::exp(-1.0), 1e-6);
  }
}

TEST(Density, NoiseOnlyAtOrigin) {
  EXPECT_DOUBLE_EQ(*pdf_gamma_w(0.0, {1.0, 2.0, 0.0}, Hypothesis::psi0), 1.0);
  EXPECT_FALSE(pdf_gamma_w(0.0, {0.0, 2.0, 0.0}, Hypothesis::psi0).has_value());
}

TEST(Density, IntegratesToOne) {
  const DetectionScales s{1.0, 2.0, 0.0};
  const double total = oracle::simpson(
      [&](double x) { return *pdf_gamma_w(x, s, Hypothesis::psi1); }, 0.0, 200.0, 200000);
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(Density, MatchesConvolutionOfExponentials) {
  RandomStream rng(21);
  for (int k = 0; k < 30; ++k) {
    const DetectionScales s = random_scales(rng);
    const double x = 3.0 * std::max(s.lambda1, s.lambda2) * rng.uniform();
    const double want = oracle::hypoexp_pdf_by_convolution(x, s.lambda1, s.lambda2);
    EXPECT_NEAR(*pdf_gamma_w(x, s, Hypothesis::psi1), want, 1e-6 * std::max(1.0, want));
  }
}

TEST(FalseAlarm, Reference) {
  const DetectionScales s{1.0, 2.0, 0.5};
  EXPECT_EQ(p_false_alarm(0.4, s), 1.0);
  EXPECT_NEAR(p_false_alarm(0.5 + kLn2, s), 0.5, 1e-15);
  EXPECT_NEAR(p_false_alarm(2 * kLn2, {1.0, 2.0, 0.0}), 0.25, 1e-9);
}

TEST(MissedDetection, Reference) {
  const DetectionScales s{1.0, 2.0, 0.0};
  EXPECT_EQ(p_missed_detection(-0.1, s), 0.0);
  EXPECT_NEAR(p_missed_detection(2 * kLn2, s), 0.25, 1e-9);
  EXPECT_NEAR(p_missed_detection(100 * s.lambda2, s), 1.0, 1e-9);
}

TEST(MissedDetection, MatchesQuadratureIncludingNearEqualScales) {
  RandomStream rng(8);
  for (int k = 0; k < 40; ++k) {
    DetectionScales s = random_scales(rng);
    if (k % 4 == 0) s.lambda2 = s.lambda1 * (1.0 + 1e-7 * (rng.uniform() - 0.5));
    const double x = 4.0 * std::max(s.lambda1, s.lambda2) * rng.uniform();
    // P(J + S < x) = int_0^x f_J(u) P(S < x - u) du.
    const long n = static_cast<long>(
        std::clamp(400.0 * x / std::min(s.lambda1, s.lambda2), 2000.0, 2e6));
    const double want = oracle::simpson(
        [&](double u) {
          return std::exp(-u / s.lambda1) / s.lambda1 * -std::expm1(-(x - u) / s.lambda2);
        },
        0.0, x, n);
    EXPECT_NEAR(p_missed_detection(s.sigma2_w + x, s), want, 1e-6);
  }
}

TEST(Threshold, Reference) {
  EXPECT_NEAR(*optimal_threshold({1.0, 2.0, 0.0}), 2 * kLn2, 1e-12);
  EXPECT_NEAR(*optimal_threshold({3.0, 3.0, 0.001}), 3.001, 1e-12);
  const DetectionScales s{0.7, 2.3, 0.01};
  EXPECT_NEAR(*optimal_threshold(s), *optimal_threshold({2.3, 0.7, 0.01}), 1e-12);
  EXPECT_FALSE(optimal_threshold({0.0, 1.0, 0.0}).has_value());
}

TEST(Threshold, GridSearchAgrees) {
  const auto [theta, value] = oracle::grid_minimize(
      [](double t) {
        const DetectionScales s{1.0, 2.0, 0.0};
        return p_false_alarm(t, s) + p_missed_detection(t, s);
      },
      0.0, 20.0, 1e-5);
  EXPECT_NEAR(theta, 2 * kLn2, 2e-5);
  EXPECT_NEAR(value, 0.5, 1e-9);
}

TEST(MinError, Reference) {
  EXPECT_NEAR(min_detection_error({1.0, 2.0, 0.0}), 0.5, 1e-15);
  EXPECT_NEAR(min_detection_error({2.0, 2.0, 0.0}), 1.0 - std::exp(-1.0), 1e-15);
  for (double eps : {1e-6, -1e-6}) {
    EXPECT_NEAR(min_detection_error({2.0 * (1 + eps), 2.0, 0.0}), 1.0 - std::exp(-1.0), 1e-6);
  }
  EXPECT_LT(min_detection_error({10.0, 1.0, 0.0}), min_detection_error({100.0, 1.0, 0.0}));
  EXPECT_EQ(min_detection_error({0.0, 1.0, 0.0}), 0.0);
}

TEST(MinError, EqualsErrorAtOptimalThreshold) {
  RandomStream rng(17);
  for (int k = 0; k < 1000; ++k) {
    const DetectionScales s = random_scales(rng);
    const DetectionOutcome o = evaluate_detection(s);
    ASSERT_TRUE(o.theta_op.has_value());
    EXPECT_NEAR(o.p_fa + o.p_md, o.min_error, 1e-12);
    EXPECT_NEAR(o.min_error,
                1.0 - std::pow(s.lambda1 / s.lambda2, s.lambda1 / (s.lambda2 - s.lambda1)),
                1e-9);
  }
}

TEST(Covertness, Reference) {
  EXPECT_TRUE(covertness_satisfied({10.0, 1.0, 0.0}, 0.1));
  EXPECT_FALSE(covertness_satisfied({5.0, 1.0, 0.0}, 0.1));
  const DetectionScales t = detection_scales(SystemParams::reference(), Topology::reference(), 1.0);
  EXPECT_NEAR(t.lambda1, 0.04382, 1e-5);
  EXPECT_NEAR(t.lambda2, 0.01585, 1e-5);
  EXPECT_NEAR(1.0 - min_detection_error(t), 0.203, 1e-3);
  EXPECT_FALSE(covertness_satisfied(t, 0.1));
}

TEST(Covertness, LogMarginSignMatchesVerdict) {
  RandomStream rng(2);
  for (int k = 0; k < 1000; ++k) {
    const DetectionScales s = random_scales(rng);
    const double eps = 0.01 + 0.9 * rng.uniform();
    EXPECT_EQ(covertness_log_margin(s, eps) >= 0.0, covertness_satisfied(s, eps));
    const double err = min_detection_error(s);
    if (std::abs(err - (1.0 - eps)) > 1e-12) {
      EXPECT_EQ(covertness_satisfied(s, eps), err >= 1.0 - eps);
    }
  }
}

SystemParams loud_jammer() {
  SystemParams p = SystemParams::reference();
  p.p_jmax = PowerLevel::from_dbw(20.0);
  return p;
}

TEST(JammerFraction, Reference) {
  const auto pj = min_jammer_fraction(loud_jammer(), Topology::reference(), 0.1);
  ASSERT_TRUE(pj.has_value());
  EXPECT_NEAR(*pj, 0.1665, 0.002);
  // Jamming power the warden must see: p_j P_jmax / d_jw^2.
  EXPECT_NEAR(*pj * loud_jammer().p_jmax.watts() / 144.0, 0.1156, 1.5e-3);
  EXPECT_FALSE(min_jammer_fraction(SystemParams::reference(), Topology::reference(), 0.1));
}

TEST(JammerFraction, VanishesAsBudgetLoosens) {
  // The covertness budget needs p_j of order -1/ln(1 - eps) * lambda2/lambda1.
  const auto pj = min_jammer_fraction(loud_jammer(), Topology::reference(), 1.0 - 1e-5);
  ASSERT_TRUE(pj.has_value());
  EXPECT_LE(*pj, 1e-3);
  double prev = 1.0;
  for (double eps : {0.1, 0.3, 0.6, 0.9, 0.99, 0.999}) {
    const double v = *min_jammer_fraction(loud_jammer(), Topology::reference(), eps);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(JammerFraction, IsTheBoundary) {
  const SystemParams p = loud_jammer();
  const double pj = *min_jammer_fraction(p, Topology::reference(), 0.1);
  EXPECT_TRUE(covertness_satisfied(detection_scales(p, Topology::reference(), pj), 0.1));
  EXPECT_FALSE(covertness_satisfied(detection_scales(p, Topology::reference(), pj - 1e-9), 0.1));
}

TEST(Robust, ZeroRadiusIsNominal) {
  const SystemParams p = loud_jammer();
  const DetectionScales a = detection_scales(p, Topology::reference(), 0.4);
  const DetectionScales b = robust_scales(p, Topology::reference(), 0.4);
  EXPECT_EQ(a.lambda1, b.lambda1);
  EXPECT_EQ(a.lambda2, b.lambda2);
  EXPECT_EQ(a.sigma2_w, b.sigma2_w);
}

TEST(Robust, FartherJammerScalesDown) {
  SystemParams p = loud_jammer();
  p.tau_jw = 2.0;
  const DetectionScales a = detection_scales(p, Topology::reference(), 1.0);
  const DetectionScales b = robust_scales(p, Topology::reference(), 1.0);
  EXPECT_NEAR(b.lambda1 / a.lambda1, (12.0 / 14.0) * (12.0 / 14.0), 1e-12);
  EXPECT_NEAR(b.lambda1 / a.lambda1, 0.7347, 1e-4);
}

TEST(Robust, NeverHelpsTheTransmitter) {
  RandomStream rng(4);
  for (int k = 0; k < 100; ++k) {
    SystemParams p = loud_jammer();
    p.tau_aw = 5.0 * rng.uniform();
    p.tau_jw = 5.0 * rng.uniform();
    const double pj = rng.uniform();
    const Topology t = Topology::reference();
    EXPECT_LE(min_detection_error(robust_scales(p, t, pj)),
              min_detection_error(detection_scales(p, t, pj)));
  }
  SystemParams p = loud_jammer();
  p.tau_aw = 10.0;
  EXPECT_THROW(robust_scales(p, Topology::reference(), 1.0), ValidationError);
}

TEST(MonteCarlo, AsymptoticMatchesClosedForm) {
  const DetectionScales s{1.0, 2.0, 0.0};
  const std::vector<double> th = {2 * kLn2};
  const auto e = simulate_detection(s, th, 1000000, 99)[0];
  EXPECT_NEAR(e.p_fa, 0.25, 0.002);
  EXPECT_NEAR(e.p_md, 0.25, 0.002);
}

TEST(MonteCarlo, FiniteBlockMatchesClosedForm) {
  const DetectionScales s{1.0, 2.0, 0.0};
  const std::vector<double> th = {2 * kLn2};
  const auto e = simulate_detection(s, th, 200000, 5, RadiometerMode::finite_n, 100000)[0];
  EXPECT_NEAR(e.p_fa, 0.25, 0.01);
  EXPECT_NEAR(e.p_md, 0.25, 0.01);
}

TEST(MonteCarlo, ZeroThresholdAlwaysAlarms) {
  const DetectionScales s{1.0, 2.0, 0.0};
  const std::vector<double> th = {0.0};
  const auto e = simulate_detection(s, th, 10000, 1)[0];
  EXPECT_EQ(e.p_fa, 1.0);
  EXPECT_EQ(e.p_md, 0.0);
}

TEST(MonteCarlo, AgreesWithIndependentSampler) {
  const DetectionScales s{0.3, 0.8, 0.05};
  const double theta = *optimal_threshold(s);
  const std::vector<double> th = {theta};
  const auto e = simulate_detection(s, th, 400000, 12)[0];
  const auto [fa, md] = oracle::detector_monte_carlo(0.3, 0.8, 0.05, theta, 400000, 77);
  EXPECT_NEAR(e.p_fa, fa, 0.006);
  EXPECT_NEAR(e.p_md, md, 0.006);
}

TEST(MonteCarlo, Deterministic) {
  const DetectionScales s{1.0, 2.0, 0.0};
  const std::vector<double> th = {0.5, 1.0, 2.0};
  const auto a = simulate_detection(s, th, 50000, 3);
  const auto b = simulate_detection(s, th, 50000, 3);
  for (std::size_t i = 0; i < th.size(); ++i) {
    EXPECT_EQ(a[i].p_fa, b[i].p_fa);
    EXPECT_EQ(a[i].p_md, b[i].p_md);
  }
}

}  // namespace
}  // namespace covertnet
