#include "covertnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "covertnet/random.hpp"

namespace covertnet {

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string_view node_name(Node node) {
  switch (node) {
    case Node::alice: return "alice";
    case Node::bob: return "bob";
    case Node::carol: return "carol";
    case Node::untrusted: return "untrusted";
    case Node::willie: return "willie";
    case Node::jammer: return "jammer";
  }
  return "?";
}

Node parse_node(std::string_view name) {
  for (Node n : kAllNodes) {
    if (node_name(n) == name) return n;
  }
  throw ValidationError("node", "unknown node '" + std::string(name) + "'");
}

const Point& Positions::at(Node node) const {
  switch (node) {
    case Node::alice: return alice;
    case Node::bob: return bob;
    case Node::carol: return carol;
    case Node::untrusted: return untrusted;
    case Node::willie: return willie;
    case Node::jammer: return jammer;
  }
  return alice;
}

Point& Positions::at(Node node) {
  return const_cast<Point&>(static_cast<const Positions&>(*this).at(node));
}

Topology Topology::from_positions(const Positions& p) {
  for (std::size_t i = 0; i < kAllNodes.size(); ++i) {
    const Point& a = p.at(kAllNodes[i]);
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      throw ValidationError("positions." + std::string(node_name(kAllNodes[i])),
                            "coordinates must be finite");
    }
    for (std::size_t j = i + 1; j < kAllNodes.size(); ++j) {
      if (distance(a, p.at(kAllNodes[j])) <= 0.0) {
        throw ValidationError("positions." + std::string(node_name(kAllNodes[j])),
                              "coincides with " + std::string(node_name(kAllNodes[i])));
      }
    }
  }
  LinkDistances d;
  d.ab = distance(p.alice, p.bob);
  d.ac = distance(p.alice, p.carol);
  d.au = distance(p.alice, p.untrusted);
  d.aw = distance(p.alice, p.willie);
  d.jw = distance(p.jammer, p.willie);
  d.ju = distance(p.jammer, p.untrusted);
  return Topology(p, d);
}

Topology Topology::with_node(Node node, Point where) const {
  Positions p = positions_;
  p.at(node) = where;
  return from_positions(p);
}

PowerLevel PowerLevel::from_dbw(double dbw) {
  if (!std::isfinite(dbw)) throw ValidationError("power", "dBW value must be finite");
  return PowerLevel(dbw, dbw_to_watts(dbw));
}

void SystemParams::validate(const Topology& topo) const {
  auto positive = [](const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be > 0");
  };
  auto nonnegative = [](const char* field, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be >= 0");
  };
  positive("noise_dbw.bob", noise.bob);
  positive("noise_dbw.carol", noise.carol);
  positive("noise_dbw.untrusted", noise.untrusted);
  positive("noise_dbw.willie", noise.willie);
  positive("alpha", alpha);
  nonnegative("r_bob_min", r_bob_min);
  nonnegative("r_carol_min", r_carol_min);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon", "must lie in (0, 1)");
  nonnegative("tau_aw", tau_aw);
  nonnegative("tau_jw", tau_jw);
  if (!(tau_aw < topo.distances().aw)) {
    throw ValidationError("tau_aw", "must be smaller than the Alice-Willie distance");
  }
  if (n_symbols < 1) throw ValidationError("n_symbols", "must be >= 1");
}

ChannelRealization sample_channels(RandomStream& rng) {
  ChannelRealization ch;
  ch.g_ab = rng.exponential();
  ch.g_ac = rng.exponential();
  ch.g_au = rng.exponential();
  ch.g_aw = rng.exponential();
  ch.g_jw = rng.exponential();
  ch.g_ju = rng.exponential();
  return ch;
}

EffectiveGains effective_gains(const SystemParams& params, const Topology& topo,
                               const ChannelRealization& ch) {
  const LinkDistances& d = topo.distances();
  const double pmax = params.p_max.watts();
  const double a = params.alpha;
  EffectiveGains g;
  g.gamma_b = pmax * ch.g_ab / (params.noise.bob * std::pow(d.ab, a));
  g.gamma_c = pmax * ch.g_ac / (params.noise.carol * std::pow(d.ac, a));
  g.gamma_u = pmax * ch.g_au / (params.noise.untrusted * std::pow(d.au, a));
  g.gamma_j = params.p_jmax.watts() * ch.g_ju / (params.noise.untrusted * std::pow(d.ju, a));
  return g;
}

PowerAllocation::PowerAllocation(double p_ab, double p_j) : p_ab_(p_ab), p_j_(p_j) {
  if (!(p_ab >= 0.0 && p_ab <= 1.0)) throw ValidationError("p_ab", "must lie in [0, 1]");
  if (!(p_j >= 0.0 && p_j <= 1.0)) throw ValidationError("p_j", "must lie in [0, 1]");
}

double sinr_bob(const PowerAllocation& alloc, const EffectiveGains& g, Hypothesis h) {
  if (h == Hypothesis::psi0) return 0.0;
  return alloc.p_ab() * g.gamma_b / (alloc.p_ac() * g.gamma_b + 1.0);
}

double sinr_carol(const PowerAllocation& alloc, const EffectiveGains& g, Hypothesis h) {
  if (h == Hypothesis::psi0) return 0.0;
  return alloc.p_ac() * g.gamma_c / (alloc.p_ab() * g.gamma_c + 1.0);
}

double sinr_untrusted(const PowerAllocation& alloc, const EffectiveGains& g) {
  return alloc.p_ab() * g.gamma_u / (alloc.p_ac() * g.gamma_u + alloc.p_j() * g.gamma_j + 1.0);
}

double secrecy_margin(const PowerAllocation& alloc, const EffectiveGains& g) {
  return std::log2(1.0 + sinr_bob(alloc, g)) - std::log2(1.0 + sinr_untrusted(alloc, g));
}

double secrecy_rate(const PowerAllocation& alloc, const EffectiveGains& g, Hypothesis h) {
  if (h == Hypothesis::psi0) return 0.0;
  return std::max(0.0, secrecy_margin(alloc, g));
}

double carol_rate(const PowerAllocation& alloc, const EffectiveGains& g, Hypothesis h) {
  return std::log2(1.0 + sinr_carol(alloc, g, h));
}

double total_rate(const PowerAllocation& alloc, const EffectiveGains& g, Hypothesis h) {
  return carol_rate(alloc, g, h) + secrecy_rate(alloc, g, h);
}

}  // namespace covertnet
