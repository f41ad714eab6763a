#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "lcequil/io.hpp"
#include "lcequil/selfcheck.hpp"
#include "lcequil/sweeps.hpp"

namespace fs = std::filesystem;
using namespace lc;

namespace {

struct CommonArgs {
  std::string preset;
  int levels = -1;
  double alpha = -1.0, p = -1.0;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::string precond = "multigrid";
};

int parse_overrides(ExperimentPreset& preset, const CommonArgs& args) {
  try {
    if (args.alpha >= 0.0) apply_override(preset, "deflation.alpha", args.alpha);
    if (args.p >= 0.0) apply_override(preset, "deflation.p", args.p);
    for (const auto& kv : args.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
        return 2;
      }
      apply_override(preset, kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
    }
  } catch (const UnknownKeyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: bad override value: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

RunOptions make_options(const std::string& precond) {
  RunOptions opts;
  if (precond == "direct") opts.linear.preconditioner = Preconditioner::Direct;
  else if (precond == "none") opts.linear.preconditioner = Preconditioner::None;
  else opts.linear.preconditioner = Preconditioner::Multigrid;
  return opts;
}

int cmd_run(const CommonArgs& args) {
  ExperimentPreset preset;
  try {
    preset = make_preset(args.preset);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (int rc = parse_overrides(preset, args)) return rc;
  const int levels = args.levels >= 0 ? args.levels : preset.default_levels;
  const RunOptions opts = make_options(args.precond);

  fs::create_directories(args.out_dir);
  RunReport report;
  try {
    report = run_experiment(preset, levels, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: run failed: " << e.what() << '\n';
    return 1;
  }

  write_report(report, preset, opts, args.out_dir + "/report.json");
  for (const auto& rec : report.solutions)
    export_solution(rec.state, args.out_dir + "/solution_" + rec.id + ".csv");

  std::cout << "preset " << preset.name << ", levels 0.." << levels << ": "
            << report.solutions.size() << " solution(s)\n";
  for (const auto& rec : report.solutions)
    std::printf("  %-4s energy % .6f  (origin %s, level %d, guess %s)\n",
                rec.id.c_str(), rec.per_level.rbegin()->second.energy,
                to_string(rec.origin), rec.discovery_level,
                rec.discovered_from.c_str());
  std::printf("  total WUs %.1f, newton iterations %ld\n",
              report.meter.work_units(), report.total_newton_iters);

  const bool failed = report.solutions.empty() || report.any_continuation_warning;
  if (failed) std::cerr << "warning: numerical failure recorded in report\n";
  return failed ? 1 : 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& param, double from,
              double to, int steps) {
  SweepSpec spec;
  try {
    spec.preset = make_preset(args.preset);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (param == "K2") spec.parameter = SweepParameter::K2;
  else if (param == "V") spec.parameter = SweepParameter::V;
  else {
    std::cerr << "error: --param must be K2 or V\n";
    return 2;
  }
  if (int rc = parse_overrides(spec.preset, args)) return rc;
  spec.lo = from;
  spec.hi = to;
  spec.steps = steps;
  if (args.levels >= 0) spec.depth = args.levels;

  fs::create_directories(args.out_dir);
  SweepResult result;
  try {
    result = sweep(spec, make_options(args.precond));
  } catch (const std::exception& e) {
    std::cerr << "error: sweep failed: " << e.what() << '\n';
    return 1;
  }

  {
    std::FILE* f = std::fopen((args.out_dir + "/sweep.csv").c_str(), "w");
    std::fprintf(f, "parameter,solution_id,theta_m,energy\n");
    for (const auto& bp : result.points)
      std::fprintf(f, "%.17g,%s,%.17g,%.17g\n", bp.parameter,
                   bp.solution_id.c_str(), bp.theta_m, bp.energy);
    std::fclose(f);
  }
  Json j;
  j["parameter"] = param;
  Json counts = Json::array();
  for (const auto& [v, c] : result.branch_counts)
    counts.push_back({{"value", v}, {"branches", c}});
  j["branch_counts"] = counts;
  if (result.bifurcation_bracket) {
    j["bracket"] = {result.bifurcation_bracket->first,
                    result.bifurcation_bracket->second};
    j["estimate"] = *result.bifurcation_estimate;
  }
  {
    std::ofstream out(args.out_dir + "/sweep_report.json");
    out << j.dump(2) << '\n';
  }

  std::cout << "sweep " << param << " in [" << from << ", " << to << "], "
            << steps << " points\n";
  if (result.bifurcation_bracket)
    std::cout << "  bifurcation bracket [" << result.bifurcation_bracket->first
              << ", " << result.bifurcation_bracket->second << "], estimate "
              << *result.bifurcation_estimate << "\n";
  else
    std::cout << "  no bifurcation bracket detected\n";
  return 0;
}

int cmd_check() {
  int failures = 0;
  auto line = [&](const std::string& name, bool ok, double value) {
    std::printf("%-44s %s  (%.3g)\n", name.c_str(), ok ? "PASS" : "FAIL", value);
    if (!ok) ++failures;
  };

  {
    const auto preset = make_preset("tilt_twist");
    const auto g = check_gradient(preset.problem, 0, 2, 4, 42);
    line("gradient oracle (nematic)", g.max_rel_err <= 1e-6, g.max_rel_err);
    const auto h = check_hessian(preset.problem, 0, 2, 4, 42);
    line("hessian oracle (nematic)", h.max_rel_err <= 1e-5, h.max_rel_err);
  }
  {
    const auto preset = make_preset("freedericksz");
    const auto g = check_gradient(preset.problem, 0, 2, 4, 43);
    line("gradient oracle (electric)", g.max_rel_err <= 1e-6, g.max_rel_err);
    const auto h = check_hessian(preset.problem, 0, 2, 4, 43);
    line("hessian oracle (electric)", h.max_rel_err <= 1e-5, h.max_rel_err);
  }
  {
    const auto preset = make_preset("cholesteric");
    const auto g = check_gradient(preset.problem, 0, 2, 4, 44);
    line("gradient oracle (cholesteric)", g.max_rel_err <= 1e-6, g.max_rel_err);
    const auto h = check_hessian(preset.problem, 0, 2, 4, 44);
    line("hessian oracle (cholesteric)", h.max_rel_err <= 1e-5, h.max_rel_err);
  }
  {
    const auto preset = make_preset("tilt_twist");
    const double e = check_sherman_morrison(preset.problem, 0, 2, 45);
    line("sherman-morrison vs dense solve", e <= 1e-8, e);
  }
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deflated Newton solver for nematic and cholesteric equilibria"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string param;
  double from = 0, to = 0;
  int steps = 0;

  auto add_common = [&](CLI::App* cmd, bool need_preset) {
    auto* p = cmd->add_option("--preset", args.preset, "experiment preset name");
    if (need_preset) p->required();
    cmd->add_option("--levels", args.levels, "finest refinement level (default preset)");
    cmd->add_option("--alpha", args.alpha, "deflation shift");
    cmd->add_option("--p", args.p, "deflation exponent");
    cmd->add_option("--set", args.overrides, "override preset field, key=value");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--precond", args.precond, "multigrid|direct|none");
  };

  auto* run = app.add_subcommand("run", "run one experiment preset");
  add_common(run, true);

  auto* sw = app.add_subcommand("sweep", "trace a bifurcation sweep");
  add_common(sw, true);
  sw->add_option("--param", param, "K2 or V")->required();
  sw->add_option("--from", from)->required();
  sw->add_option("--to", to)->required();
  sw->add_option("--steps", steps)->required();

  app.add_subcommand("check", "run the derivative and Sherman-Morrison self-tests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (app.got_subcommand("run")) return cmd_run(args);
  if (app.got_subcommand("sweep")) return cmd_sweep(args, param, from, to, steps);
  return cmd_check();
}
