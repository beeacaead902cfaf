#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace covertnet {

class RandomStream;

/// Raised when a configuration or a domain object violates its invariants.
/// The message always starts with the offending field name.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

double dbw_to_watts(double dbw);

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

enum class Node { alice, bob, carol, untrusted, willie, jammer };

inline constexpr std::array<Node, 6> kAllNodes = {Node::alice,  Node::bob,    Node::carol,
                                                  Node::untrusted, Node::willie, Node::jammer};

std::string_view node_name(Node node);
Node parse_node(std::string_view name);

struct Positions {
  Point alice{0.0, 0.0};
  Point bob{-10.0, 0.0};
  Point carol{10.0, 0.0};
  Point untrusted{0.0, 10.0};
  Point willie{0.0, -10.0};
  Point jammer{0.0, 2.0};

  const Point& at(Node node) const;
  Point& at(Node node);
};

/// Link distances in meters, derived from node positions.
struct LinkDistances {
  double ab = 0.0;
  double ac = 0.0;
  double au = 0.0;
  double aw = 0.0;
  double jw = 0.0;
  double ju = 0.0;
};

/// Node placement plus the six link distances used by the model. Every pair
/// of nodes must be distinct.
class Topology {
 public:
  static Topology from_positions(const Positions& positions);
  static Topology reference() { return from_positions(Positions{}); }

  const Positions& positions() const noexcept { return positions_; }
  const LinkDistances& distances() const noexcept { return distances_; }

  /// Copy with one node moved. Revalidates.
  Topology with_node(Node node, Point where) const;

 private:
  Topology(const Positions& p, const LinkDistances& d) : positions_(p), distances_(d) {}

  Positions positions_;
  LinkDistances distances_;
};

/// Topology::from_positions under its operation name.
inline Topology derive_distances(const Positions& positions) {
  return Topology::from_positions(positions);
}

/// A power level kept in both dBW and linear watts.
class PowerLevel {
 public:
  static PowerLevel from_dbw(double dbw);

  double dbw() const noexcept { return dbw_; }
  double watts() const noexcept { return watts_; }

 private:
  PowerLevel(double dbw, double watts) : dbw_(dbw), watts_(watts) {}
  double dbw_;
  double watts_;
};

/// Receiver noise powers in watts.
struct NoisePowers {
  double bob = 1e-3;
  double carol = 1e-3;
  double untrusted = 1e-3;
  double willie = 1e-3;
};

struct SystemParams {
  PowerLevel p_max = PowerLevel::from_dbw(2.0);
  PowerLevel p_jmax = PowerLevel::from_dbw(8.0);
  NoisePowers noise;
  double alpha = 2.0;
  double r_bob_min = 0.2;
  double r_carol_min = 0.1;
  double epsilon = 0.1;
  double tau_aw = 0.0;
  double tau_jw = 0.0;
  std::uint64_t n_symbols = 100000;

  /// The reference simulation setting (2 dBW / 8 dBW, -30 dBW noise, alpha 2).
  static SystemParams reference() { return SystemParams{}; }

  /// Throws ValidationError naming the first offending field.
  void validate(const Topology& topo) const;
};

/// Squared fading magnitudes |h|^2 for the six links of one slot.
struct ChannelRealization {
  double g_ab = 1.0;
  double g_ac = 1.0;
  double g_au = 1.0;
  double g_aw = 1.0;
  double g_jw = 1.0;
  double g_ju = 1.0;

  friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

/// Six independent unit-mean exponential draws (Rayleigh amplitudes).
ChannelRealization sample_channels(RandomStream& rng);

/// Normalized link SNRs of one realization.
struct EffectiveGains {
  double gamma_b = 0.0;
  double gamma_c = 0.0;
  double gamma_u = 0.0;
  double gamma_j = 0.0;
};

EffectiveGains effective_gains(const SystemParams& params, const Topology& topo,
                               const ChannelRealization& ch);

/// Fractions of P_max sent to Bob and of P_jmax used by the jammer. Carol gets
/// the remainder of P_max.
class PowerAllocation {
 public:
  PowerAllocation(double p_ab, double p_j);

  double p_ab() const noexcept { return p_ab_; }
  double p_ac() const noexcept { return 1.0 - p_ab_; }
  double p_j() const noexcept { return p_j_; }

  friend bool operator==(const PowerAllocation&, const PowerAllocation&) = default;

 private:
  double p_ab_;
  double p_j_;
};

enum class Hypothesis { psi0, psi1 };

double sinr_bob(const PowerAllocation& alloc, const EffectiveGains& g,
                Hypothesis h = Hypothesis::psi1);
double sinr_carol(const PowerAllocation& alloc, const EffectiveGains& g,
                  Hypothesis h = Hypothesis::psi1);
/// Only the transmission slot is modeled; there is no signal to measure under psi0.
double sinr_untrusted(const PowerAllocation& alloc, const EffectiveGains& g);

/// Bob's secrecy rate in bits/s/Hz, clamped at zero.
double secrecy_rate(const PowerAllocation& alloc, const EffectiveGains& g,
                    Hypothesis h = Hypothesis::psi1);
/// Same difference of logs without the clamp.
double secrecy_margin(const PowerAllocation& alloc, const EffectiveGains& g);
double carol_rate(const PowerAllocation& alloc, const EffectiveGains& g,
                  Hypothesis h = Hypothesis::psi1);
/// carol_rate + secrecy_rate.
double total_rate(const PowerAllocation& alloc, const EffectiveGains& g,
                  Hypothesis h = Hypothesis::psi1);

}  // namespace covertnet
