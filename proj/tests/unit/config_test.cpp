#include <gtest/gtest.h>

#include "covertnet/config.hpp"

namespace covertnet {
namespace {

using nlohmann::json;

TEST(Config, EmptyObjectGivesReferenceSetting) {
  const RunConfig c = parse_config(json::object());
  const Positions& p = c.topo.positions();
  EXPECT_EQ(p.alice, (Point{0, 0}));
  EXPECT_EQ(p.bob, (Point{-10, 0}));
  EXPECT_EQ(p.carol, (Point{10, 0}));
  EXPECT_EQ(p.untrusted, (Point{0, 10}));
  EXPECT_EQ(p.willie, (Point{0, -10}));
  EXPECT_EQ(p.jammer, (Point{0, 2}));
  EXPECT_DOUBLE_EQ(c.params.p_max.dbw(), 2.0);
  EXPECT_DOUBLE_EQ(c.params.p_jmax.dbw(), 8.0);
  EXPECT_NEAR(c.params.noise.bob, 1e-3, 1e-15);
  EXPECT_NEAR(c.params.noise.willie, 1e-3, 1e-15);
  EXPECT_EQ(c.params.alpha, 2.0);
  EXPECT_EQ(c.params.r_bob_min, 0.2);
  EXPECT_EQ(c.params.r_carol_min, 0.1);
  EXPECT_EQ(c.params.epsilon, 0.1);
}

TEST(Config, RangeErrorNamesKey) {
  try {
    parse_config(json{{"epsilon", 1.5}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "epsilon");
  }
}

TEST(Config, UnknownKeysRejectedWithPath) {
  try {
    parse_config(json{{"sweep", {{"trails", 10}}}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "sweep.trails");
  }
  EXPECT_THROW(parse_config(json{{"bogus", 1}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"positions", {{"eve", {0, 1}}}}}), ConfigError);
}

TEST(Config, WrongTypesRejected) {
  EXPECT_THROW(parse_config(json{{"alpha", "two"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"seed", -1}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"positions", {{"bob", {1}}}}}), ConfigError);
  EXPECT_THROW(parse_config(json::array()), ConfigError);
  EXPECT_THROW(parse_config(json{{"sweep", {{"policy", "drop"}}}}), ConfigError);
}

TEST(Config, ExplicitDefaultEqualsOmitted) {
  const RunConfig a = parse_config(json::object());
  const RunConfig b = parse_config(json{{"alpha", 2}});
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(params_hash(a), params_hash(b));
}

TEST(Config, RoundTrip) {
  const json in = {{"p_jmax_dbw", 20},
                   {"noise_dbw", -35},
                   {"positions", {{"bob", {-5, 0}}}},
                   {"solver", {{"init", "carol_edge"}, {"outer_tol", 1e-7}}},
                   {"sweep", {{"parameter", "d_au"}, {"values", {5, 6, 7}}, {"bearing", {1, -1}}}},
                   {"seed", 9}};
  const RunConfig a = parse_config(in);
  EXPECT_NEAR(a.params.noise.carol, dbw_to_watts(-35), 1e-18);
  EXPECT_EQ(a.solver.init, InitStrategy::carol_edge);
  EXPECT_EQ(a.sweep.parameter, SweepParameter::d_au);
  const RunConfig b = parse_config(to_json(a));
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(params_hash(a), params_hash(b));
}

TEST(Config, HashTracksParametersNotOutput) {
  const RunConfig a = parse_config(json::object());
  EXPECT_EQ(params_hash(a), params_hash(parse_config(json{{"out", "elsewhere"}})));
  EXPECT_NE(params_hash(a), params_hash(parse_config(json{{"epsilon", 0.2}})));
  EXPECT_NE(params_hash(a), params_hash(parse_config(json{{"seed", 1}})));
}

TEST(Config, MissingFile) {
  EXPECT_THROW(parse_config(std::filesystem::path("/nonexistent/cfg.json")), ConfigError);
}

}  // namespace
}  // namespace covertnet
