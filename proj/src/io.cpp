#include "lcequil/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lc {
namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

void export_solution(const State& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_solution: cannot open " + path);
  const auto& sp = *state.space;
  const int side = sp.mesh.q2_side();
  const int N = sp.mesh.cells_per_side;

  out << "x,y,n1,n2,n3,phi,lambda_cell\n";
  for (int ix = 0; ix < side; ++ix) {
    for (int iy = 0; iy < side; ++iy) {
      const int node = sp.node_index(ix, iy);
      const int cx = std::min(ix / 2, N - 1);
      const int cy = std::min(iy / 2, N - 1);
      out << fmt17(sp.mesh.node_x(ix)) << ',' << fmt17(sp.mesh.node_y(iy));
      for (int c = 0; c < 3; ++c)
        out << ',' << fmt17(state.u[sp.field_offset(c) + node]);
      out << ',';
      if (sp.has_phi) out << fmt17(state.u[sp.phi_offset() + node]);
      out << ','
          << fmt17(state.u[sp.lambda_offset() + sp.cell_index(cx, cy)]) << '\n';
    }
  }
  if (!out) throw std::runtime_error("export_solution: write failed for " + path);
}

State import_solution(const std::string& path, const Problem& problem) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_solution: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y,", 0) != 0)
    throw std::runtime_error("import_solution: bad header in " + path);

  std::vector<std::array<double, 6>> rows; // n1,n2,n3,phi,lambda + phi flag
  std::vector<bool> has_phi_col;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<std::string, 7> cells;
    std::stringstream ss(line);
    for (auto& c : cells) std::getline(ss, c, ',');
    std::array<double, 6> r{};
    r[0] = std::stod(cells[2]);
    r[1] = std::stod(cells[3]);
    r[2] = std::stod(cells[4]);
    r[3] = cells[5].empty() ? 0.0 : std::stod(cells[5]);
    r[4] = std::stod(cells[6]);
    rows.push_back(r);
    has_phi_col.push_back(!cells[5].empty());
  }

  const int side = static_cast<int>(std::lround(std::sqrt(double(rows.size()))));
  if (static_cast<std::size_t>(side) * side != rows.size() || side % 2 == 0)
    throw std::runtime_error("import_solution: row count is not a Q2 grid");
  const int N = (side - 1) / 2;
  int level = -1;
  for (int l = 0; l <= kMaxLevel; ++l)
    if ((kCoarseCellsPerSide << l) == N) level = l;
  if (level < 0) throw std::runtime_error("import_solution: unsupported mesh size");

  State s(make_space(problem, level));
  const auto& sp = *s.space;
  if (sp.has_phi != has_phi_col.front())
    throw std::runtime_error("import_solution: phi column does not match problem");
  std::size_t row = 0;
  for (int ix = 0; ix < side; ++ix)
    for (int iy = 0; iy < side; ++iy, ++row) {
      const int node = sp.node_index(ix, iy);
      for (int c = 0; c < 3; ++c) s.u[sp.field_offset(c) + node] = rows[row][c];
      if (sp.has_phi) s.u[sp.phi_offset() + node] = rows[row][3];
      const int cx = std::min(ix / 2, N - 1);
      const int cy = std::min(iy / 2, N - 1);
      s.u[sp.lambda_offset() + sp.cell_index(cx, cy)] = rows[row][4];
    }
  return s;
}

Json report_to_json(const RunReport& report, const ExperimentPreset& preset,
                    const RunOptions& opts) {
  Json j;
  j["preset"] = report.preset_name;
  j["levels"] = report.levels;

  Json cfg;
  cfg["params"] = {{"K1", preset.problem.params.K1},
                   {"K2", preset.problem.params.K2},
                   {"K3", preset.problem.params.K3},
                   {"eps0", preset.problem.params.eps0},
                   {"eps_perp", preset.problem.params.eps_perp},
                   {"eps_a", preset.problem.params.eps_a},
                   {"t0", preset.problem.params.t0},
                   {"V", preset.problem.params.V}};
  cfg["model"] = preset.problem.model == Model::Cholesteric ? "cholesteric" : "nematic";
  cfg["electric"] = preset.problem.electric;
  cfg["periodic_x"] = preset.problem.periodic_x;
  cfg["deflation"] = {{"p", preset.deflation.p}, {"alpha", preset.deflation.alpha}};
  cfg["damping"] = {{"omega1", preset.undeflated.omega0},
                    {"delta1", preset.undeflated.delta},
                    {"omega2", preset.deflated.omega0},
                    {"delta2", preset.deflated.delta}};
  cfg["newton"] = {{"fooc_tol", opts.newton.fooc_tol},
                   {"max_iters", opts.newton.max_iters},
                   {"blowup_mean_length", opts.newton.blowup_mean_length}};
  cfg["linear"] = {{"rel_tol", opts.linear.rel_tol},
                   {"max_krylov", opts.linear.max_krylov},
                   {"preconditioner",
                    opts.linear.preconditioner == Preconditioner::Multigrid ? "multigrid"
                    : opts.linear.preconditioner == Preconditioner::Direct ? "direct"
                                                                           : "none"}};
  j["config"] = cfg;

  Json sols = Json::array();
  for (const auto& rec : report.solutions) {
    Json s;
    s["id"] = rec.id;
    s["origin"] = to_string(rec.origin);
    s["discovery_level"] = rec.discovery_level;
    s["discovered_from"] = rec.discovered_from;
    s["continuation_warning"] = rec.continuation_warning;
    Json lv = Json::array();
    for (const auto& [level, st] : rec.per_level) {
      lv.push_back({{"level", level},
                    {"energy", st.energy},
                    {"newton_iters", st.newton_iters},
                    {"status", to_string(st.status)},
                    {"avg_krylov", st.avg_krylov},
                    {"max_krylov", st.max_krylov},
                    {"work_units", st.work_units},
                    {"provenance", to_string(st.provenance)}});
    }
    s["levels"] = lv;
    s["final_energy"] = rec.per_level.rbegin()->second.energy;
    sols.push_back(std::move(s));
  }
  j["solutions"] = sols;

  Json anon = Json::array();
  for (const auto& [level, a] : report.anonymous)
    anon.push_back({{"level", level},
                    {"newton_iters", a.newton_iters},
                    {"work_units", a.work_units},
                    {"attempts", a.attempts}});
  j["anonymous"] = anon;
  j["total_newton_iters"] = report.total_newton_iters;
  j["total_work_units"] = report.meter.work_units();
  j["max_krylov_overall"] = report.max_krylov_overall;
  return j;
}

void write_report(const RunReport& report, const ExperimentPreset& preset,
                  const RunOptions& opts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open " + path);
  out << report_to_json(report, preset, opts).dump(2) << '\n';
}

} // namespace lc
