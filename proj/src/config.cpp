#include "covertnet/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace covertnet {

using nlohmann::json;

SweepSpec default_sweep() {
  SweepSpec s;
  s.values = {5, 6, 7, 8, 9, 10, 11, 12};
  return s;
}

namespace {

// Reads one JSON object, remembering which keys were used so leftovers can
// be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(display(), "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& at(const std::string& key) const { return obj_.at(key); }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw ConfigError(key_path(key), "expected a finite number");
    }
    out = v.get<double>();
  }

  void unsigned_integer(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(key_path(key), "expected a nonnegative integer");
    }
    out = v.get<std::uint64_t>();
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    if (!at(key).is_boolean()) throw ConfigError(key_path(key), "expected true or false");
    out = at(key).get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    if (!at(key).is_string()) throw ConfigError(key_path(key), "expected a string");
    out = at(key).get<std::string>();
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(key_path(key), "expected an array of numbers");
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(key_path(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
  }

  Point point(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(key_path(key), "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(key_path(item.key()), "unknown key");
    }
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

// Rethrows a ValidationError from domain code under the config key path.
template <typename F>
auto with_key(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    if (e.field().rfind(key, 0) == 0) throw;
    throw ConfigError(key, e.what());
  }
}

json point_json(Point p) { return json::array({p.x, p.y}); }

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  ObjectReader root(doc, "");

  Positions positions;
  if (root.has("positions")) {
    ObjectReader pos(root.at("positions"), "positions");
    for (Node n : kAllNodes) {
      const std::string name(node_name(n));
      if (pos.has(name)) positions.at(n) = pos.point(name);
    }
    pos.finish();
  }

  double p_max_dbw = 2.0;
  double p_jmax_dbw = 8.0;
  root.number("p_max_dbw", p_max_dbw);
  root.number("p_jmax_dbw", p_jmax_dbw);
  cfg.params.p_max = PowerLevel::from_dbw(p_max_dbw);
  cfg.params.p_jmax = PowerLevel::from_dbw(p_jmax_dbw);

  if (root.has("noise_dbw")) {
    const json& v = root.at("noise_dbw");
    if (v.is_number()) {
      const double x = v.get<double>();
      cfg.noise_dbw = {x, x, x, x};
    } else {
      ObjectReader noise(v, "noise_dbw");
      noise.number("bob", cfg.noise_dbw.bob);
      noise.number("carol", cfg.noise_dbw.carol);
      noise.number("untrusted", cfg.noise_dbw.untrusted);
      noise.number("willie", cfg.noise_dbw.willie);
      noise.finish();
    }
  }
  cfg.params.noise = {dbw_to_watts(cfg.noise_dbw.bob), dbw_to_watts(cfg.noise_dbw.carol),
                      dbw_to_watts(cfg.noise_dbw.untrusted), dbw_to_watts(cfg.noise_dbw.willie)};

  root.number("alpha", cfg.params.alpha);
  root.number("r_bob_min", cfg.params.r_bob_min);
  root.number("r_carol_min", cfg.params.r_carol_min);
  root.number("epsilon", cfg.params.epsilon);
  root.number("tau_aw", cfg.params.tau_aw);
  root.number("tau_jw", cfg.params.tau_jw);
  root.unsigned_integer("n_symbols", cfg.params.n_symbols);
  root.unsigned_integer("seed", cfg.seed);
  root.string("out", cfg.out_dir);

  if (root.has("solver")) {
    ObjectReader s(root.at("solver"), "solver");
    s.number("outer_tol", cfg.solver.outer_tol);
    std::uint64_t iters = static_cast<std::uint64_t>(cfg.solver.max_outer_iters);
    s.unsigned_integer("max_outer_iters", iters);
    if (iters > 100000) throw ConfigError("solver.max_outer_iters", "must be <= 100000");
    cfg.solver.max_outer_iters = static_cast<int>(iters);
    s.number("inner_tol", cfg.solver.inner_tol);
    s.number("grid_resolution", cfg.solver.grid_resolution);
    std::string init(to_string(cfg.solver.init));
    s.string("init", init);
    cfg.solver.init = with_key("solver.init", [&] { return parse_init(init); });
    s.boolean("epigraph_diagnostic", cfg.solver.epigraph_diagnostic);
    s.finish();
  }

  if (root.has("sweep")) {
    ObjectReader s(root.at("sweep"), "sweep");
    std::string name(to_string(cfg.sweep.parameter));
    s.string("parameter", name);
    cfg.sweep.parameter = with_key("sweep.parameter", [&] { return parse_sweep_parameter(name); });
    s.numbers("values", cfg.sweep.values);
    s.unsigned_integer("trials", cfg.sweep.trials);
    std::string policy(to_string(cfg.sweep.policy));
    s.string("policy", policy);
    cfg.sweep.policy = with_key("sweep.policy", [&] { return parse_policy(policy); });
    s.boolean("robust", cfg.sweep.robust);
    s.boolean("common_random_numbers", cfg.sweep.common_random_numbers);
    if (s.has("bearing")) {
      if (s.at("bearing").is_null()) {
        cfg.sweep.bearing.reset();
      } else {
        cfg.sweep.bearing = s.point("bearing");
      }
    }
    std::string node(node_name(cfg.sweep.node));
    s.string("node", node);
    cfg.sweep.node = with_key("sweep.node", [&] { return parse_node(node); });
    std::string axis = cfg.sweep.axis == Axis::x ? "x" : "y";
    s.string("axis", axis);
    if (axis != "x" && axis != "y") throw ConfigError("sweep.axis", "expected 'x' or 'y'");
    cfg.sweep.axis = axis == "x" ? Axis::x : Axis::y;
    s.finish();
  }

  if (root.has("detect")) {
    ObjectReader d(root.at("detect"), "detect");
    d.numbers("d_aw", cfg.detect.d_aw);
    d.numbers("d_jw", cfg.detect.d_jw);
    d.number("p_j", cfg.detect.p_j);
    d.finish();
    if (cfg.detect.d_aw.empty() || cfg.detect.d_jw.empty()) {
      throw ConfigError("detect", "distance grids must not be empty");
    }
    if (!(cfg.detect.p_j >= 0.0 && cfg.detect.p_j <= 1.0)) {
      throw ConfigError("detect.p_j", "must lie in [0, 1]");
    }
  }
  root.finish();

  cfg.topo = Topology::from_positions(positions);
  cfg.params.validate(cfg.topo);
  cfg.solver.validate();
  with_key("sweep", [&] { cfg.sweep.validate(); });
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  json positions = json::object();
  for (Node n : kAllNodes) {
    positions[std::string(node_name(n))] = point_json(cfg.topo.positions().at(n));
  }
  const SweepSpec& sw = cfg.sweep;
  json sweep = {
      {"parameter", to_string(sw.parameter)},
      {"values", sw.values},
      {"trials", sw.trials},
      {"policy", to_string(sw.policy)},
      {"robust", sw.robust},
      {"common_random_numbers", sw.common_random_numbers},
      {"bearing", sw.bearing ? point_json(*sw.bearing) : json(nullptr)},
      {"node", node_name(sw.node)},
      {"axis", sw.axis == Axis::x ? "x" : "y"},
  };
  return {
      {"positions", positions},
      {"p_max_dbw", cfg.params.p_max.dbw()},
      {"p_jmax_dbw", cfg.params.p_jmax.dbw()},
      {"noise_dbw",
       {{"bob", cfg.noise_dbw.bob},
        {"carol", cfg.noise_dbw.carol},
        {"untrusted", cfg.noise_dbw.untrusted},
        {"willie", cfg.noise_dbw.willie}}},
      {"alpha", cfg.params.alpha},
      {"r_bob_min", cfg.params.r_bob_min},
      {"r_carol_min", cfg.params.r_carol_min},
      {"epsilon", cfg.params.epsilon},
      {"tau_aw", cfg.params.tau_aw},
      {"tau_jw", cfg.params.tau_jw},
      {"n_symbols", cfg.params.n_symbols},
      {"seed", cfg.seed},
      {"out", cfg.out_dir},
      {"solver",
       {{"outer_tol", cfg.solver.outer_tol},
        {"max_outer_iters", cfg.solver.max_outer_iters},
        {"inner_tol", cfg.solver.inner_tol},
        {"grid_resolution", cfg.solver.grid_resolution},
        {"init", to_string(cfg.solver.init)},
        {"epigraph_diagnostic", cfg.solver.epigraph_diagnostic}}},
      {"sweep", sweep},
      {"detect", {{"d_aw", cfg.detect.d_aw}, {"d_jw", cfg.detect.d_jw}, {"p_j", cfg.detect.p_j}}},
  };
}

std::uint64_t params_hash(const RunConfig& cfg) {
  json j = to_json(cfg);
  j.erase("out");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace covertnet
