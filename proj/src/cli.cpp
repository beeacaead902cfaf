#include "covertnet/cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "covertnet/config.hpp"
#include "covertnet/experiments.hpp"
#include "covertnet/validation.hpp"

#ifndef COVERTNET_VERSION
#define COVERTNET_VERSION "0.0.0"
#endif

namespace covertnet {
namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::uint64_t> trials;
  bool robust = false;
  std::optional<std::string> policy;
  std::string figure;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

// CSV under construction: metadata comment lines, then a header row.
class Csv {
 public:
  Csv(const RunConfig& cfg, const std::string& command) {
    comment("covertnet " COVERTNET_VERSION);
    comment("command=" + command);
    comment("seed=" + std::to_string(cfg.seed));
    comment("params_hash=" + hex(params_hash(cfg)));
  }

  void comment(const std::string& line) { text_ += "# " + line + "\n"; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw ConfigError("out", "cannot write '" + path.string() + "'");
}

// Writes `stem`.csv and the resolved configuration beside it.
void emit(const RunConfig& cfg, const std::string& stem, const std::string& command,
          const Csv& csv, std::ostream& out) {
  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("out", "cannot create '" + dir.string() + "': " + ec.message());

  nlohmann::json echo = to_json(cfg);
  echo["_meta"] = {{"version", COVERTNET_VERSION},
                   {"command", command},
                   {"seed", cfg.seed},
                   {"params_hash", hex(params_hash(cfg))}};
  write_file(dir / (stem + ".csv"), csv.text());
  write_file(dir / (stem + ".config.json"), echo.dump(2) + "\n");
  out << "wrote " << (dir / (stem + ".csv")).string() << "\n";
}

void sweep_metadata(Csv& csv, const SweepSpec& spec) {
  csv.comment("parameter=" + std::string(to_string(spec.parameter)) +
              " trials=" + std::to_string(spec.trials) + " policy=" +
              std::string(to_string(spec.policy)) + " robust=" + (spec.robust ? "1" : "0") +
              " common_random_numbers=" + (spec.common_random_numbers ? "1" : "0"));
  if (spec.bearing) {
    csv.comment("bearing=" + num(spec.bearing->x) + "," + num(spec.bearing->y));
  }
  csv.comment("rates in bits/s/Hz per transmission slot");
}

int sweep_table(const std::vector<SweepRow>& rows, const SweepSpec& spec, Csv& csv) {
  csv.row({std::string(to_string(spec.parameter)), "mean_rate", "se", "outage", "mean_bob_rate",
           "mean_carol_rate", "trials", "feasible"});
  bool any_feasible = false;
  for (const auto& r : rows) {
    any_feasible = any_feasible || r.feasible > 0;
    csv.row({num(r.value), num(r.mean_total), num(r.se_total), num(r.outage), num(r.mean_secrecy),
             num(r.mean_carol), std::to_string(r.trials), std::to_string(r.feasible)});
  }
  return any_feasible ? kExitOk : kExitInfeasible;
}

void surface_table(const std::vector<SurfaceCell>& cells, Csv& csv) {
  csv.row({"d_aw", "d_jw", "min_error", "covert", "robust_min_error", "robust_covert"});
  for (const auto& c : cells) {
    csv.row({num(c.d_aw), num(c.d_jw), num(c.min_error), c.covert ? "1" : "0",
             num(c.robust_min_error), c.robust_covert ? "1" : "0"});
  }
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const SlotResult s = run_slot(cfg.params, cfg.topo, cfg.seed, 0, cfg.sweep.robust, cfg.solver);
  const SolveResult& r = s.solution;
  Csv csv(cfg, "solve");
  csv.comment(std::string("location_model=") + (cfg.sweep.robust ? "robust" : "nominal"));
  csv.row({"g_ab", "g_ac", "g_au", "g_aw", "g_jw", "g_ju", "p_ab", "p_ac", "p_j", "objective",
           "secrecy_rate", "carol_rate", "status", "infeasible_by", "iterations", "p_j_min",
           "p_ab_max"});
  const ChannelRealization& c = s.channel;
  csv.row({num(c.g_ab), num(c.g_ac), num(c.g_au), num(c.g_aw), num(c.g_jw), num(c.g_ju),
           num(r.allocation.p_ab()), num(r.allocation.p_ac()), num(r.allocation.p_j()),
           num(r.objective), num(r.secrecy_rate), num(r.carol_rate),
           std::string(to_string(r.status)), std::string(to_string(r.infeasible_by)),
           std::to_string(r.iterations), num(r.p_j_min), num(r.p_ab_max)});
  emit(cfg, "solve", "solve", csv, out);
  return r.feasible() ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  SweepSpec spec = cfg.sweep;
  spec.seed = cfg.seed;
  const auto rows = sweep(spec, cfg.params, cfg.topo, cfg.solver);
  Csv csv(cfg, "sweep");
  sweep_metadata(csv, spec);
  const int code = sweep_table(rows, spec, csv);
  emit(cfg, "sweep", "sweep", csv, out);
  return code;
}

int cmd_detect(const RunConfig& cfg, std::ostream& out) {
  const auto cells = detection_surface(cfg.params, cfg.detect.d_aw, cfg.detect.d_jw, cfg.detect.p_j);
  Csv csv(cfg, "detect");
  csv.comment("p_j=" + num(cfg.detect.p_j) + " tau_aw=" + num(cfg.params.tau_aw) +
              " tau_jw=" + num(cfg.params.tau_jw));
  surface_table(cells, csv);
  emit(cfg, "detect", "detect", csv, out);
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const auto checks = run_validation(cfg.seed);
  Csv csv(cfg, "validate");
  csv.row({"check", "passed", "detail"});
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    csv.row({c.name, c.passed ? "1" : "0", "\"" + c.detail + "\""});
  }
  emit(cfg, "validate", "validate", csv, out);
  return ok ? kExitOk : kExitValidationFailed;
}

int cmd_reproduce(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
  const Figure figure = parse_figure(flags.figure);
  FigureSetup f = figure_setup(figure, cfg.params, cfg.topo, flags.trials, cfg.seed);
  f.spec.policy = cfg.sweep.policy;
  f.spec.robust = cfg.sweep.robust;
  const std::string name(to_string(figure));
  Csv csv(cfg, "reproduce " + name);
  csv.comment("p_jmax_dbw=" + num(f.params.p_jmax.dbw()));
  int code = kExitOk;
  if (figure == Figure::fig2) {
    csv.comment("p_j=1 tau_aw=" + num(f.params.tau_aw) + " tau_jw=" + num(f.params.tau_jw));
    surface_table(detection_surface(f.params, f.d_aw_grid, f.d_jw_grid, 1.0), csv);
  } else {
    sweep_metadata(csv, f.spec);
    code = sweep_table(sweep(f.spec, f.params, f.topo, cfg.solver), f.spec, csv);
  }
  emit(cfg, name, "reproduce " + name, csv, out);
  return code;
}

RunConfig load(const Flags& flags) {
  RunConfig cfg = flags.config.empty() ? parse_config(nlohmann::json::object())
                                       : parse_config(std::filesystem::path(flags.config));
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out) cfg.out_dir = *flags.out;
  if (flags.trials) {
    if (*flags.trials < 1) throw ConfigError("trials", "must be >= 1");
    cfg.sweep.trials = *flags.trials;
  }
  if (flags.robust) cfg.sweep.robust = true;
  if (flags.policy) cfg.sweep.policy = parse_policy(*flags.policy);
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covert, secure two-user downlink with a friendly jammer", "covertnet"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "Master random seed");
  app.add_option("--out", flags.out, "Output directory");
  app.add_option("--trials", flags.trials, "Fading realizations per sweep point");
  app.add_flag("--robust", flags.robust, "Enforce covertness at the worst-case warden location");
  app.add_option("--policy", flags.policy, "Infeasible slots: zero or exclude")
      ->check(CLI::IsMember({"zero", "exclude"}));

  auto* solve = app.add_subcommand("solve", "Solve one fading slot");
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the configured parameter sweep");
  auto* detect = app.add_subcommand("detect", "Tabulate the warden's minimum error");
  auto* validate = app.add_subcommand("validate", "Cross-check against numerical oracles");
  auto* reproduce = app.add_subcommand("reproduce", "Run a reference experiment preset");
  reproduce->add_option("figure", flags.figure, "fig2 .. fig7")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}));
  for (auto* sub : {solve, sweep_cmd, detect, validate, reproduce}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfigError;
  }

  try {
    const RunConfig cfg = load(flags);
    if (*solve) return cmd_solve(cfg, out);
    if (*sweep_cmd) return cmd_sweep(cfg, out);
    if (*detect) return cmd_detect(cfg, out);
    if (*validate) return cmd_validate(cfg, out);
    return cmd_reproduce(cfg, flags, out);
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace covertnet
