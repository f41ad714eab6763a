#include "lcequil/forms.hpp"

#include <cmath>
#include <stdexcept>

#include "lcequil/quadrature.hpp"

namespace lc {
namespace {

void check_model(const Space& sp, const MaterialParams& p, Model model) {
  if (model == Model::Nematic && p.t0 != 0.0)
    throw std::logic_error("forms: nematic model with nonzero twist t0");
  if (sp.has_phi && (p.eps0 <= 0.0 || p.eps_perp <= 0.0))
    throw std::logic_error("forms: potential field present but electric constants unset");
}

struct CellCtx {
  const Space& sp;
  const ShapeTable& tab;
  double h, inv_h, jac_w; // jac_w = h^2
  int nf;                 // Q2 fields
  int nloc;               // local dofs: 9*nf + 1

  std::array<int, 9> nodes{}; // Q2 node indices of the current cell
  int cell = 0;

  explicit CellCtx(const Space& s)
      : sp(s), tab(q2_shape_table_3x3()), h(s.mesh.cell_width()),
        inv_h(1.0 / h), jac_w(h * h), nf(s.n_fields()), nloc(9 * nf + 1) {}

  void bind(int cx, int cy) {
    cell = sp.cell_index(cx, cy);
    for (int l = 0; l < 9; ++l)
      nodes[l] = sp.node_index(2 * cx + l / 3, 2 * cy + l % 3);
  }

  int stored_dof(int k) const { // local dof -> stored dof
    return k < 9 * nf ? sp.field_offset(k / 9) + nodes[k % 9]
                      : sp.lambda_offset() + cell;
  }
};

/// Field values and physical gradients at one quadrature point.
struct PointVals {
  double n[3], nx[3], ny[3];
  double phi_x = 0.0, phi_y = 0.0;
  double lam = 0.0;
  double div = 0.0;
  double curl[3] = {0.0, 0.0, 0.0};
  double ncurl = 0.0; // n . curl n
  double ngphi = 0.0; // n . grad phi
  double B[9], Bx[9], By[9];
};

void eval_point(const CellCtx& ctx, const VecX& u, int q, PointVals& v) {
  const auto& val = ctx.tab.val[q];
  const auto& dx = ctx.tab.dx[q];
  const auto& dy = ctx.tab.dy[q];
  for (int l = 0; l < 9; ++l) {
    v.B[l] = val[l];
    v.Bx[l] = dx[l] * ctx.inv_h;
    v.By[l] = dy[l] * ctx.inv_h;
  }
  for (int c = 0; c < 3; ++c) {
    const int off = ctx.sp.field_offset(c);
    double s = 0, sx = 0, sy = 0;
    for (int l = 0; l < 9; ++l) {
      const double cl = u[off + ctx.nodes[l]];
      s += v.B[l] * cl;
      sx += v.Bx[l] * cl;
      sy += v.By[l] * cl;
    }
    v.n[c] = s;
    v.nx[c] = sx;
    v.ny[c] = sy;
  }
  if (ctx.sp.has_phi) {
    const int off = ctx.sp.phi_offset();
    double sx = 0, sy = 0;
    for (int l = 0; l < 9; ++l) {
      const double cl = u[off + ctx.nodes[l]];
      sx += v.Bx[l] * cl;
      sy += v.By[l] * cl;
    }
    v.phi_x = sx;
    v.phi_y = sy;
  }
  v.lam = u[ctx.sp.lambda_offset() + ctx.cell];
  // Slab reductions: fields depend on (x, y) only, n keeps 3 components.
  v.div = v.nx[0] + v.ny[1];
  v.curl[0] = v.ny[2];
  v.curl[1] = -v.nx[2];
  v.curl[2] = v.nx[1] - v.ny[0];
  v.ncurl = v.n[0] * v.curl[0] + v.n[1] * v.curl[1] + v.n[2] * v.curl[2];
  v.ngphi = v.n[0] * v.phi_x + v.n[1] * v.phi_y;
}

/// Rescaled energy density (without the constraint or constant terms).
double density(const PointVals& v, const MaterialParams& p, Model model) {
  const double curl2 =
      v.curl[0] * v.curl[0] + v.curl[1] * v.curl[1] + v.curl[2] * v.curl[2];
  double e = p.K1 * v.div * v.div + p.K3 * curl2 -
             (p.K3 - p.K2) * v.ncurl * v.ncurl;
  e -= p.eps0 * p.eps_perp * (v.phi_x * v.phi_x + v.phi_y * v.phi_y);
  e -= p.eps0 * p.eps_a * v.ngphi * v.ngphi;
  if (model == Model::Cholesteric) e += 2.0 * p.K2 * p.t0 * v.ncurl;
  return e;
}

// Director test/trial function geometry, component a with scalar basis l:
//   div  v = {Bx, By, 0}[a]
//   curl v = a==0: (0,0,-By); a==1: (0,0,Bx); a==2: (By,-Bx,0)
inline double div_v(const PointVals& v, int a, int l) {
  return a == 0 ? v.Bx[l] : (a == 1 ? v.By[l] : 0.0);
}
inline double curl_dot(const PointVals& v, int a, int l, int b, int m) {
  // curl v_(a,l) . curl v_(b,m)
  if (a == 0) {
    if (b == 0) return v.By[l] * v.By[m];
    if (b == 1) return -v.By[l] * v.Bx[m];
    return 0.0;
  }
  if (a == 1) {
    if (b == 0) return -v.Bx[l] * v.By[m];
    if (b == 1) return v.Bx[l] * v.Bx[m];
    return 0.0;
  }
  if (b == 2) return v.By[l] * v.By[m] + v.Bx[l] * v.Bx[m];
  return 0.0;
}
inline double curl_comp(const PointVals& v, int b, int m, int a) {
  // component a of curl v_(b,m)
  if (b == 0) return a == 2 ? -v.By[m] : 0.0;
  if (b == 1) return a == 2 ? v.Bx[m] : 0.0;
  return a == 0 ? v.By[m] : (a == 1 ? -v.Bx[m] : 0.0);
}
inline double S_term(const PointVals& v, int a, int l) {
  // v . curl n + n . curl v     (first variation of n . curl n)
  double s = v.B[l] * v.curl[a];
  if (a == 0) s += -v.n[2] * v.By[l];
  else if (a == 1) s += v.n[2] * v.Bx[l];
  else s += v.n[0] * v.By[l] - v.n[1] * v.Bx[l];
  return s;
}
inline double v_gphi(const PointVals& v, int a, int l) {
  return a == 0 ? v.B[l] * v.phi_x : (a == 1 ? v.B[l] * v.phi_y : 0.0);
}

int find_slot(const SparseMat& m, int row, int col) {
  const int* outer = m.outerIndexPtr();
  const int* inner = m.innerIndexPtr();
  const int* lo = inner + outer[col];
  const int* hi = inner + outer[col + 1];
  const int* it = std::lower_bound(lo, hi, row);
  return (it != hi && *it == row) ? static_cast<int>(it - inner) : -1;
}

/// Per-cell positions into the compressed value array, so repeated
/// assemblies write straight into the skeleton.
void build_slot_cache(const Space& sp, const SparseMat& skeleton, int nloc) {
  CellCtx ctx(sp);
  const int N = sp.mesh.cells_per_side;
  auto slots = std::make_shared<std::vector<int>>(
      static_cast<std::size_t>(sp.ncells) * nloc * nloc, -1);
  std::array<int, 37> amap{};
  for (int cx = 0; cx < N; ++cx)
    for (int cy = 0; cy < N; ++cy) {
      ctx.bind(cx, cy);
      for (int k = 0; k < nloc; ++k) amap[k] = sp.active_of[ctx.stored_dof(k)];
      const std::size_t base = static_cast<std::size_t>(ctx.cell) * nloc * nloc;
      for (int i = 0; i < nloc; ++i) {
        if (amap[i] < 0) continue;
        for (int j = 0; j < nloc; ++j)
          if (amap[j] >= 0)
            (*slots)[base + static_cast<std::size_t>(i) * nloc + j] =
                find_slot(skeleton, amap[i], amap[j]);
      }
    }
  sp.jac_slots = std::move(slots);
}

} // namespace

double free_energy(const State& state, const MaterialParams& params, Model model) {
  const auto& sp = *state.space;
  check_model(sp, params, model);
  CellCtx ctx(sp);
  const int N = sp.mesh.cells_per_side;
  double total = 0.0;
  PointVals v;
  for (int cx = 0; cx < N; ++cx)
    for (int cy = 0; cy < N; ++cy) {
      ctx.bind(cx, cy);
      for (std::size_t q = 0; q < ctx.tab.rule.points.size(); ++q) {
        eval_point(ctx, state.u, static_cast<int>(q), v);
        total += ctx.tab.rule.points[q].w * ctx.jac_w * density(v, params, model);
      }
    }
  if (model == Model::Cholesteric)
    total += params.K2 * params.t0 * params.t0; // * |Omega| = 1
  return 0.5 * total;
}

double lagrangian_value(const State& state, const MaterialParams& params, Model model) {
  const auto& sp = *state.space;
  check_model(sp, params, model);
  CellCtx ctx(sp);
  const int N = sp.mesh.cells_per_side;
  double total = 0.0;
  PointVals v;
  for (int cx = 0; cx < N; ++cx)
    for (int cy = 0; cy < N; ++cy) {
      ctx.bind(cx, cy);
      for (std::size_t q = 0; q < ctx.tab.rule.points.size(); ++q) {
        eval_point(ctx, state.u, static_cast<int>(q), v);
        const double nn =
            v.n[0] * v.n[0] + v.n[1] * v.n[1] + v.n[2] * v.n[2] - 1.0;
        total += ctx.tab.rule.points[q].w * ctx.jac_w *
                 (density(v, params, model) + v.lam * nn);
      }
    }
  return total;
}

VecX assemble_residual(const State& state, const MaterialParams& params, Model model) {
  const auto& sp = *state.space;
  check_model(sp, params, model);
  CellCtx ctx(sp);
  const int N = sp.mesh.cells_per_side;
  const double K1x2 = 2.0 * params.K1, K3x2 = 2.0 * params.K3;
  const double k32x2 = 2.0 * (params.K3 - params.K2);
  const double eea = 2.0 * params.eps0 * params.eps_a;
  const double eep = 2.0 * params.eps0 * params.eps_perp;
  const double cholx2 =
      model == Model::Cholesteric ? 2.0 * params.K2 * params.t0 : 0.0;

  VecX r = VecX::Zero(sp.n_active);
  PointVals v;
  std::array<double, 37> rloc{};
  for (int cx = 0; cx < N; ++cx)
    for (int cy = 0; cy < N; ++cy) {
      ctx.bind(cx, cy);
      rloc.fill(0.0);
      for (std::size_t q = 0; q < ctx.tab.rule.points.size(); ++q) {
        eval_point(ctx, state.u, static_cast<int>(q), v);
        const double w = ctx.tab.rule.points[q].w * ctx.jac_w;
        for (int a = 0; a < 3; ++a)
          for (int l = 0; l < 9; ++l) {
            double t = K1x2 * v.div * div_v(v, a, l);
            t += K3x2 * (v.curl[0] * curl_comp(v, a, l, 0) +
                         v.curl[1] * curl_comp(v, a, l, 1) +
                         v.curl[2] * curl_comp(v, a, l, 2));
            const double s = S_term(v, a, l);
            t -= k32x2 * v.ncurl * s;
            t += cholx2 * s;
            t -= eea * v.ngphi * v_gphi(v, a, l);
            t += 2.0 * v.lam * v.n[a] * v.B[l];
            rloc[9 * a + l] += w * t;
          }
        if (sp.has_phi)
          for (int l = 0; l < 9; ++l) {
            double t = -eep * (v.phi_x * v.Bx[l] + v.phi_y * v.By[l]);
            t -= eea * v.ngphi * (v.n[0] * v.Bx[l] + v.n[1] * v.By[l]);
            rloc[27 + l] += w * t;
          }
        const double nn =
            v.n[0] * v.n[0] + v.n[1] * v.n[1] + v.n[2] * v.n[2] - 1.0;
        rloc[9 * ctx.nf] += w * nn;
      }
      // Local rows: n at 0..26, phi at 27..35 (when present), lambda last.
      for (int k = 0; k < ctx.nloc; ++k) {
        const int ai = sp.active_of[ctx.stored_dof(k)];
        if (ai >= 0) r[ai] += rloc[k];
      }
    }
  return r;
}

AssembledSystem assemble_system(const State& state, const MaterialParams& params,
                                Model model) {
  const auto& sp = *state.space;
  check_model(sp, params, model);
  CellCtx ctx(sp);
  const int N = sp.mesh.cells_per_side;
  const int nloc = ctx.nloc;

  const double K1x2 = 2.0 * params.K1, K3x2 = 2.0 * params.K3;
  const double k32x2 = 2.0 * (params.K3 - params.K2);
  const double eea = 2.0 * params.eps0 * params.eps_a;
  const double eep = 2.0 * params.eps0 * params.eps_perp;
  const double cholx2 =
      model == Model::Cholesteric ? 2.0 * params.K2 * params.t0 : 0.0;

  AssembledSystem sys;
  sys.space = state.space;
  sys.residual = VecX::Zero(sp.n_active);

  const bool first = !sp.jac_skeleton;
  std::vector<Triplet> trips;
  if (first) {
    trips.reserve(static_cast<std::size_t>(N) * N * nloc * nloc);
  } else {
    sys.jacobian = *sp.jac_skeleton;
    double* vals = sys.jacobian.valuePtr();
    std::fill(vals, vals + sys.jacobian.nonZeros(), 0.0);
    if (!sp.jac_slots && sp.mesh.level <= 4) build_slot_cache(sp, sys.jacobian, nloc);
  }
  const int* slots = sp.jac_slots ? sp.jac_slots->data() : nullptr;

  PointVals v;
  std::vector<double> Ke(static_cast<std::size_t>(nloc) * nloc);
  std::array<double, 37> rloc{};
  std::array<int, 37> amap{};
  std::array<double, 27> S{}, vg{};

  for (int cx = 0; cx < N; ++cx)
    for (int cy = 0; cy < N; ++cy) {
      ctx.bind(cx, cy);
      std::fill(Ke.begin(), Ke.end(), 0.0);
      rloc.fill(0.0);
      for (std::size_t q = 0; q < ctx.tab.rule.points.size(); ++q) {
        eval_point(ctx, state.u, static_cast<int>(q), v);
        const double w = ctx.tab.rule.points[q].w * ctx.jac_w;

        for (int a = 0; a < 3; ++a)
          for (int l = 0; l < 9; ++l) {
            S[9 * a + l] = S_term(v, a, l);
            vg[9 * a + l] = v_gphi(v, a, l);
          }

        // Residual rows.
        for (int a = 0; a < 3; ++a)
          for (int l = 0; l < 9; ++l) {
            const int k = 9 * a + l;
            double t = K1x2 * v.div * div_v(v, a, l);
            t += K3x2 * (v.curl[0] * curl_comp(v, a, l, 0) +
                         v.curl[1] * curl_comp(v, a, l, 1) +
                         v.curl[2] * curl_comp(v, a, l, 2));
            t += (cholx2 - k32x2 * v.ncurl) * S[k];
            t -= eea * v.ngphi * vg[k];
            t += 2.0 * v.lam * v.n[a] * v.B[l];
            rloc[k] += w * t;
          }
        if (sp.has_phi)
          for (int l = 0; l < 9; ++l) {
            double t = -eep * (v.phi_x * v.Bx[l] + v.phi_y * v.By[l]);
            t -= eea * v.ngphi * (v.n[0] * v.Bx[l] + v.n[1] * v.By[l]);
            rloc[27 + l] += w * t;
          }
        {
          const double nn =
              v.n[0] * v.n[0] + v.n[1] * v.n[1] + v.n[2] * v.n[2] - 1.0;
          rloc[9 * ctx.nf] += w * nn;
        }

        // n-n block (symmetric; fill upper pairs and mirror).
        for (int ka = 0; ka < 27; ++ka) {
          const int a = ka / 9, l = ka % 9;
          const double dva = div_v(v, a, l);
          for (int kb = ka; kb < 27; ++kb) {
            const int b = kb / 9, m = kb % 9;
            double t = K1x2 * dva * div_v(v, b, m);
            t += K3x2 * curl_dot(v, a, l, b, m);
            const double cross = v.B[l] * curl_comp(v, b, m, a) +
                                 v.B[m] * curl_comp(v, a, l, b);
            t += (cholx2 - k32x2 * v.ncurl) * cross;
            t -= k32x2 * S[ka] * S[kb];
            t -= eea * vg[ka] * vg[kb];
            if (a == b) t += 2.0 * v.lam * v.B[l] * v.B[m];
            const double wt = w * t;
            Ke[ka * nloc + kb] += wt;
            if (kb != ka) Ke[kb * nloc + ka] += wt;
          }
        }

        if (sp.has_phi) {
          // n-phi and phi-phi blocks.
          for (int m = 0; m < 9; ++m) {
            const double ngm = v.n[0] * v.Bx[m] + v.n[1] * v.By[m];
            for (int ka = 0; ka < 27; ++ka) {
              const int a = ka / 9, l = ka % 9;
              const double vdg =
                  a == 0 ? v.B[l] * v.Bx[m] : (a == 1 ? v.B[l] * v.By[m] : 0.0);
              const double t = -eea * (ngm * vg[ka] + v.ngphi * vdg);
              const double wt = w * t;
              Ke[ka * nloc + 27 + m] += wt;
              Ke[(27 + m) * nloc + ka] += wt;
            }
            for (int l = m; l < 9; ++l) {
              const double ngl = v.n[0] * v.Bx[l] + v.n[1] * v.By[l];
              double t = -eep * (v.Bx[l] * v.Bx[m] + v.By[l] * v.By[m]);
              t -= eea * ngl * ngm;
              const double wt = w * t;
              Ke[(27 + l) * nloc + 27 + m] += wt;
              if (l != m) Ke[(27 + m) * nloc + 27 + l] += wt;
            }
          }
        }

        // n-lambda coupling.
        const int klam = nloc - 1;
        for (int ka = 0; ka < 27; ++ka) {
          const double wt = w * 2.0 * v.n[ka / 9] * v.B[ka % 9];
          Ke[ka * nloc + klam] += wt;
          Ke[klam * nloc + ka] += wt;
        }
      }

      for (int k = 0; k < nloc; ++k)
        amap[k] = sp.active_of[ctx.stored_dof(k)];

      for (int i = 0; i < nloc; ++i)
        if (amap[i] >= 0) sys.residual[amap[i]] += rloc[i];
      if (first) {
        for (int i = 0; i < nloc; ++i) {
          if (amap[i] < 0) continue;
          for (int j = 0; j < nloc; ++j)
            if (amap[j] >= 0)
              trips.emplace_back(amap[i], amap[j], Ke[i * nloc + j]);
        }
      } else if (slots) {
        double* vals = sys.jacobian.valuePtr();
        const int* cell_slots =
            slots + static_cast<std::size_t>(ctx.cell) * nloc * nloc;
        for (int i = 0; i < nloc * nloc; ++i)
          if (cell_slots[i] >= 0) vals[cell_slots[i]] += Ke[i];
      } else {
        for (int j = 0; j < nloc; ++j) {
          if (amap[j] < 0) continue;
          for (int i = 0; i < nloc; ++i)
            if (amap[i] >= 0)
              sys.jacobian.coeffRef(amap[i], amap[j]) += Ke[i * nloc + j];
        }
      }
    }

  if (first) {
    sys.jacobian.resize(sp.n_active, sp.n_active);
    sys.jacobian.setFromTriplets(trips.begin(), trips.end());
    sys.jacobian.makeCompressed();
    sp.jac_skeleton = std::make_shared<const SparseMat>(sys.jacobian);
  }
  return sys;
}

double unit_length_violation(const State& state) {
  const auto& sp = *state.space;
  double sum = 0.0;
  for (int node = 0; node < sp.q2n; ++node) {
    const double a = state.u[sp.field_offset(0) + node];
    const double b = state.u[sp.field_offset(1) + node];
    const double c = state.u[sp.field_offset(2) + node];
    sum += std::sqrt(a * a + b * b + c * c);
  }
  return sum / sp.q2n;
}

} // namespace lc
