#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcequil/io.hpp"
#include "lcequil/selfcheck.hpp"
#include "lcequil/sweeps.hpp"

namespace py = pybind11;
using namespace lc;

namespace {

RunOptions options_from(const std::string& precond) {
  RunOptions opts;
  if (precond == "direct") opts.linear.preconditioner = Preconditioner::Direct;
  else if (precond == "none") opts.linear.preconditioner = Preconditioner::None;
  else if (precond == "multigrid") opts.linear.preconditioner = Preconditioner::Multigrid;
  else throw std::invalid_argument("precond must be multigrid, direct or none");
  return opts;
}

ExperimentPreset preset_from(const std::string& name,
                             const std::map<std::string, double>& overrides) {
  ExperimentPreset preset = make_preset(name);
  for (const auto& [k, v] : overrides) apply_override(preset, k, v);
  return preset;
}

py::object json_to_py(const Json& j) {
  py::module_ pyjson = py::module_::import("json");
  return pyjson.attr("loads")(j.dump());
}

} // namespace

PYBIND11_MODULE(lcequil, m) {
  m.doc() = "Deflated Newton solver for nematic and cholesteric liquid crystal "
            "equilibria on the unit square";

  m.def("presets", &preset_names, "Names of the built-in experiment presets");

  m.def(
      "run",
      [](const std::string& preset_name, int levels,
         const std::map<std::string, double>& overrides, const std::string& precond,
         const std::string& out_dir) {
        ExperimentPreset preset = preset_from(preset_name, overrides);
        const int L = levels >= 0 ? levels : preset.default_levels;
        const RunOptions opts = options_from(precond);
        const RunReport report = run_experiment(preset, L, opts);
        if (!out_dir.empty()) {
          write_report(report, preset, opts, out_dir + "/report.json");
          for (const auto& rec : report.solutions)
            export_solution(rec.state, out_dir + "/solution_" + rec.id + ".csv");
        }
        return json_to_py(report_to_json(report, preset, opts));
      },
      py::arg("preset"), py::arg("levels") = -1,
      py::arg("overrides") = std::map<std::string, double>{},
      py::arg("precond") = "multigrid", py::arg("out_dir") = "",
      "Run one experiment preset through the nested-iteration deflation "
      "driver; returns the run report as a dict");

  m.def(
      "sweep",
      [](const std::string& preset_name, const std::string& param, double lo,
         double hi, int steps, int depth,
         const std::map<std::string, double>& overrides, const std::string& precond) {
        SweepSpec spec;
        spec.preset = preset_from(preset_name, overrides);
        if (param == "K2") spec.parameter = SweepParameter::K2;
        else if (param == "V") spec.parameter = SweepParameter::V;
        else throw std::invalid_argument("param must be K2 or V");
        spec.lo = lo;
        spec.hi = hi;
        spec.steps = steps;
        if (depth >= 0) spec.depth = depth;
        const SweepResult res = sweep(spec, options_from(precond));
        py::dict out;
        py::list pts;
        for (const auto& bp : res.points) {
          py::dict d;
          d["parameter"] = bp.parameter;
          d["solution_id"] = bp.solution_id;
          d["theta_m"] = bp.theta_m;
          d["energy"] = bp.energy;
          pts.append(d);
        }
        out["points"] = pts;
        py::list counts;
        for (const auto& [v, c] : res.branch_counts)
          counts.append(py::make_tuple(v, c));
        out["branch_counts"] = counts;
        if (res.bifurcation_bracket) {
          out["bracket"] = py::make_tuple(res.bifurcation_bracket->first,
                                          res.bifurcation_bracket->second);
          out["estimate"] = *res.bifurcation_estimate;
        } else {
          out["bracket"] = py::none();
          out["estimate"] = py::none();
        }
        return out;
      },
      py::arg("preset"), py::arg("param"), py::arg("lo"), py::arg("hi"),
      py::arg("steps"), py::arg("depth") = -1,
      py::arg("overrides") = std::map<std::string, double>{},
      py::arg("precond") = "multigrid",
      "Parameter sweep tracing the bifurcation diagram; returns branch points "
      "and the bracket");

  m.def(
      "check",
      [](const std::string& preset_name, int level) {
        const ExperimentPreset preset = make_preset(preset_name);
        const auto g = check_gradient(preset.problem, level, 2, 4, 31);
        const auto h = check_hessian(preset.problem, level, 2, 4, 32);
        const double sm = check_sherman_morrison(preset.problem, level, 2, 33);
        py::dict out;
        out["gradient_max_rel_err"] = g.max_rel_err;
        out["gradient_fd_order"] = g.worst_order;
        out["hessian_max_rel_err"] = h.max_rel_err;
        out["sherman_morrison_rel_err"] = sm;
        return out;
      },
      py::arg("preset") = "tilt_twist", py::arg("level") = 0,
      "Finite-difference and Sherman-Morrison self-tests");

  m.def(
      "free_energy_of_file",
      [](const std::string& path, const std::string& preset_name) {
        const ExperimentPreset preset = make_preset(preset_name);
        const State s = import_solution(path, preset.problem);
        return free_energy(s, preset.problem.params, preset.problem.model);
      },
      py::arg("path"), py::arg("preset"),
      "Reported free energy of an exported solution file");
}
