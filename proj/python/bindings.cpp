#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "covertnet/cli.hpp"
#include "covertnet/config.hpp"
#include "covertnet/detection.hpp"
#include "covertnet/experiments.hpp"

namespace py = pybind11;
namespace cn = covertnet;

namespace {

cn::RunConfig config_from(const std::string& text) {
  return cn::parse_config(nlohmann::json::parse(text));
}

py::dict solve_dict(const cn::SlotResult& s) {
  const cn::SolveResult& r = s.solution;
  py::dict d;
  d["p_ab"] = r.allocation.p_ab();
  d["p_ac"] = r.allocation.p_ac();
  d["p_j"] = r.allocation.p_j();
  d["objective"] = r.objective;
  d["secrecy_rate"] = r.secrecy_rate;
  d["carol_rate"] = r.carol_rate;
  d["status"] = std::string(cn::to_string(r.status));
  d["infeasible_by"] = std::string(cn::to_string(r.infeasible_by));
  d["iterations"] = r.iterations;
  d["trajectory"] = r.trajectory;
  d["p_j_min"] = r.p_j_min;
  d["p_ab_max"] = r.p_ab_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Covert, secure two-user downlink with a friendly jammer";
  m.attr("__version__") = COVERTNET_VERSION;

  py::register_exception<cn::ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("min_detection_error",
        [](double lambda1, double lambda2, double sigma2_w) {
          return cn::min_detection_error({lambda1, lambda2, sigma2_w});
        },
        py::arg("lambda1"), py::arg("lambda2"), py::arg("sigma2_w") = 0.0);
  m.def("optimal_threshold",
        [](double lambda1, double lambda2, double sigma2_w) {
          return cn::optimal_threshold({lambda1, lambda2, sigma2_w});
        },
        py::arg("lambda1"), py::arg("lambda2"), py::arg("sigma2_w") = 0.0,
        "Warden's error-minimizing threshold, or None when never detecting is optimal.");
  m.def("false_alarm",
        [](double theta, double lambda1, double lambda2, double sigma2_w) {
          return cn::p_false_alarm(theta, {lambda1, lambda2, sigma2_w});
        },
        py::arg("theta"), py::arg("lambda1"), py::arg("lambda2"), py::arg("sigma2_w") = 0.0);
  m.def("missed_detection",
        [](double theta, double lambda1, double lambda2, double sigma2_w) {
          return cn::p_missed_detection(theta, {lambda1, lambda2, sigma2_w});
        },
        py::arg("theta"), py::arg("lambda1"), py::arg("lambda2"), py::arg("sigma2_w") = 0.0);

  m.def("resolved_config",
        [](const std::string& text) { return cn::to_json(config_from(text)).dump(); },
        py::arg("config_json"), "Validated configuration with every default filled in.");
  m.def("solve_slot",
        [](const std::string& text, std::uint64_t trial) {
          const cn::RunConfig cfg = config_from(text);
          return solve_dict(cn::run_slot(cfg.params, cfg.topo, cfg.seed, trial, cfg.sweep.robust,
                                         cfg.solver));
        },
        py::arg("config_json"), py::arg("trial") = 0);
  m.def("sweep",
        [](const std::string& text) {
          const cn::RunConfig cfg = config_from(text);
          cn::SweepSpec spec = cfg.sweep;
          spec.seed = cfg.seed;
          std::vector<cn::SweepRow> result;
          {
            py::gil_scoped_release release;
            result = cn::sweep(spec, cfg.params, cfg.topo, cfg.solver);
          }
          py::list rows;
          for (const auto& r : result) {
            py::dict d;
            d["value"] = r.value;
            d["mean_rate"] = r.mean_total;
            d["se"] = r.se_total;
            d["outage"] = r.outage;
            d["mean_bob_rate"] = r.mean_secrecy;
            d["mean_carol_rate"] = r.mean_carol;
            d["trials"] = r.trials;
            d["feasible"] = r.feasible;
            rows.append(d);
          }
          return rows;
        },
        py::arg("config_json"));
  m.def("spearman", [](std::vector<double> x, std::vector<double> y) {
    return cn::spearman(x, y);
  });
  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = cn::run_cli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
