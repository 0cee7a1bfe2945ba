#include "translab/linearized.hpp"

#include "translab/detail/stencils.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>

namespace translab {

using detail::d1_stencil;
using detail::dr_stencil;
using detail::face_flux;
using detail::FaceEval;
using detail::has_value;
using detail::Stencil;

namespace {

// Smallest eigenvalue of the 2x2 tensor [[a11,a1r],[a1r,arr]].
inline double lambda_min(double a11, double a1r, double arr) {
  double m = 0.5 * (a11 + arr);
  double d = std::sqrt(0.25 * (a11 - arr) * (a11 - arr) + a1r * a1r);
  return m - d;
}

}  // namespace

LinearOperator assemble(const GraphFunction& g, AssembleMode mode) {
  const auto& gr = g.grid;
  LinearOperator op;
  op.grid = &g.grid;
  op.mode = mode;
  const int n = gr.n_interior;
  std::vector<Eigen::Triplet<double>> ta, tb, tdiv;
  ta.reserve(size_t(12) * n);
  bool track_div = false;  // duplicate div-part triplets in UpwindGated mode

  const int N = gr.nx * gr.nr;
  op.a11 = Eigen::ArrayXd::Zero(N);
  op.a1r = op.a11;
  op.arr = op.a11;
  op.b1 = op.a11;
  op.br = op.a11;
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      if (gr.kind[nd] == NodeKind::Exterior) continue;
      double p1 = d1_stencil(gr, i, j).eval(gr, g.phi);
      double pr = (j == 0) ? 0.0 : dr_stencil(gr, i, j).eval(gr, g.phi);
      double W2 = 1 + p1 * p1 + pr * pr, W = std::sqrt(W2), W3 = W2 * W;
      op.a11[nd] = (1 + pr * pr) / W3;
      op.arr[nd] = (1 + p1 * p1) / W3;
      op.a1r[nd] = -p1 * pr / W3;
      op.b1[nd] = p1 / W3;
      op.br[nd] = pr / W3;
    }

  // row scatter: interior columns to A, boundary columns to B
  auto col = [&](int i, int j, double w, int row) {
    if (j < 0) j = -j;
    int nd = gr.node(i, j);
    if (gr.kind[nd] == NodeKind::Interior) {
      ta.emplace_back(row, gr.interior_id[nd], w);
      if (track_div) tdiv.emplace_back(row, gr.interior_id[nd], w);
    } else {
      tb.emplace_back(row, nd, w);
    }
  };

  double max_pe = 0;
  int upwinded = 0;

  for (int j = 0; j < gr.nr; ++j) {
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      if (gr.kind[nd] != NodeKind::Interior) continue;
      const int row = gr.interior_id[nd];
      const auto& fr = gr.frac[nd];
      const double rj = gr.r(j);
      const double hx = 0.5 * (fr[0] + fr[1]) * gr.h1;
      const double hrr = 0.5 * (fr[2] + fr[3]) * gr.hr;

      if (mode == AssembleMode::ExactJacobian) {
        auto add_face = [&](int arm, double scale) {
          FaceEval fe = face_flux(gr, g.phi, i, j, arm, fr[arm], 0.0);
          if (!fe.live) return;
          for (int k = 0; k < fe.d1_st.n; ++k)
            col(fe.d1_st.ii[k], fe.d1_st.jj[k], scale * fe.dF_dd1 * fe.d1_st.w[k], row);
          for (int k = 0; k < fe.dt_st.n; ++k)
            col(fe.dt_st.ii[k], fe.dt_st.jj[k], scale * fe.dF_ddt * fe.dt_st.w[k], row);
        };
        add_face(0, 1.0 / hx);
        add_face(1, 1.0 / hx);
        if (j == 0) {
          add_face(2, 4.0 / gr.hr);
        } else {
          double rp = rj + 0.5 * fr[2] * gr.hr, rm = rj - 0.5 * fr[3] * gr.hr;
          add_face(2, rp / (rj * hrr));
          add_face(3, rm / (rj * hrr));
        }
        // derivative of -1/W: b . Du with centered differences
        Stencil d1c = d1_stencil(gr, i, j), drc = dr_stencil(gr, i, j);
        for (int k = 0; k < d1c.n; ++k) col(d1c.ii[k], d1c.jj[k], op.b1[nd] * d1c.w[k], row);
        if (j > 0)
          for (int k = 0; k < drc.n; ++k) col(drc.ii[k], drc.jj[k], op.br[nd] * drc.w[k], row);
        continue;
      }

      // --- frozen-coefficient flux form -------------------------------------
      track_div = true;
      auto a_face = [&](int arm, const Eigen::ArrayXd& field) {
        int ni = i + kArmDI[arm], nj = std::abs(j + kArmDJ[arm]);
        if (fr[arm] < 1.0f || !has_value(gr, ni, nj)) return field[nd];
        return 0.5 * (field[nd] + field[gr.node(ni, nj)]);
      };
      auto add_direct = [&](int arm, double scale, const Eigen::ArrayXd& afield) {
        const int di = kArmDI[arm], dj = kArmDJ[arm];
        const double h = (dj != 0) ? gr.hr : gr.h1;
        double th = fr[arm];
        double af = a_face(arm, afield);
        if (th >= 1.0f) {
          if (!has_value(gr, i + di, j + dj)) return;
          col(i + di, j + dj, scale * af / h, row);
          col(i, j, -scale * af / h, row);
        } else {
          col(i, j, -scale * af / (th * h), row);  // Dirichlet end carries 0
        }
      };
      add_direct(0, 1.0 / hx, op.a11);
      add_direct(1, 1.0 / hx, op.a11);
      if (j == 0) {
        add_direct(2, 4.0 / gr.hr, op.arr);
      } else {
        double rp = rj + 0.5 * fr[2] * gr.hr, rm = rj - 0.5 * fr[3] * gr.hr;
        add_direct(2, rp / (rj * hrr), op.arr);
        add_direct(3, rm / (rj * hrr), op.arr);
      }

      // drift b . Du, Peclet-gated; the off-diagonal sign stays admissible by
      // differencing along the drift direction
      track_div = false;
      double lam = std::max(lambda_min(op.a11[nd], op.a1r[nd], op.arr[nd]), 1e-300);
      double pe = std::hypot(op.b1[nd], op.br[nd]) * std::max(gr.h1, gr.hr) / (2.0 * lam);
      max_pe = std::max(max_pe, pe);
      bool upwind = pe >= 1.0;
      if (upwind) ++upwinded;
      auto add_drift = [&](double bc, bool rdir) {
        if (bc == 0.0) return;
        const double h = rdir ? gr.hr : gr.h1;
        const int di = rdir ? 0 : 1, dj = rdir ? 1 : 0;
        if (!upwind) {
          Stencil s = detail::u_deriv_stencil(gr, i, j, rdir);
          for (int k = 0; k < s.n; ++k) col(s.ii[k], s.jj[k], bc * s.w[k], row);
        } else if (bc > 0) {
          double th = fr[rdir ? 2 : 0];
          if (th >= 1.0f) {
            if (!has_value(gr, i + di, j + dj)) return;
            col(i + di, j + dj, bc / h, row);
            col(i, j, -bc / h, row);
          } else {
            col(i, j, -bc / (th * h), row);  // curve value is 0
          }
        } else {
          double th = fr[rdir ? 3 : 1];
          if (th >= 1.0f) {
            if (!has_value(gr, i - di, j - dj)) return;
            col(i, j, bc / h, row);
            col(i - di, j - dj, -bc / h, row);
          } else {
            col(i, j, bc / (th * h), row);
          }
        }
      };
      add_drift(op.b1[nd], false);
      if (j > 0) add_drift(op.br[nd], true);

      // axis rows: the mixed second-order term vanishes by symmetry and only
      // (d_r a1r) u_1 survives; assemble it as extra drift
      if (j == 0) {
        double dr_a1r = dr_stencil(gr, i, j).eval(gr, op.a1r);
        add_drift(2.0 * dr_a1r, false);  // a1r/r -> d_r a1r as r -> 0
      }
    }
  }

  // Mixed term for the frozen-coefficient modes.  UpwindGated assembles the
  // r-weighted symmetric bilinear form
  //   B(u,w) = - sum_Q r_Q a1r_Q [d1(u) dr(w) + dr(u) d1(w)](Q) h1 hr,
  // row-scaled by 1/(r_row h1 hr); axis nodes carry weight r_Q = 0.
  if (mode == AssembleMode::UpwindGated) {
    track_div = true;
    for (int j = 1; j < gr.nr; ++j)
      for (int i = 0; i < gr.nx; ++i) {
        int nd = gr.node(i, j);
        // the form integrates over the domain: interior cells only
        if (gr.kind[nd] != NodeKind::Interior) continue;
        double cq = gr.r(j) * op.a1r[nd];
        if (cq == 0.0) continue;
        Stencil s1 = detail::u_deriv_stencil(gr, i, j, false);
        Stencil sr = detail::u_deriv_stencil(gr, i, j, true);
        auto emit = [&](const Stencil& sw, const Stencil& su) {
          for (int a = 0; a < sw.n; ++a) {
            int rnd = gr.node(sw.ii[a], sw.jj[a]);
            if (gr.kind[rnd] != NodeKind::Interior) continue;  // test rows only
            double rrow = gr.r(sw.jj[a]);
            if (rrow <= 0.0) continue;  // axis rows handled separately
            int row = gr.interior_id[rnd];
            for (int b = 0; b < su.n; ++b)
              col(su.ii[b], su.jj[b], -cq * sw.w[a] * su.w[b] / rrow, row);
          }
        };
        emit(s1, sr);
        emit(sr, s1);
      }
  }

  // Comparison variant: 2 a1r u_{x r} by the sign-matched corner stencil plus
  // the first-order coefficient leftovers folded into the drift direction of
  // each node (centered; their size is O(|Da1r|), well under the Peclet gate).
  if (mode == AssembleMode::UpwindGatedComparison) {
    track_div = true;
    for (int j = 1; j < gr.nr; ++j)
      for (int i = 0; i < gr.nx; ++i) {
        int nd = gr.node(i, j);
        if (gr.kind[nd] != NodeKind::Interior) continue;
        int row = gr.interior_id[nd];
        double c2 = op.a1r[nd];
        const double hh = gr.h1 * gr.hr;
        if (c2 != 0.0) {
          bool have = has_value(gr, i + 1, j + 1) && has_value(gr, i - 1, j - 1) &&
                      has_value(gr, i + 1, j - 1) && has_value(gr, i - 1, j + 1) &&
                      has_value(gr, i + 1, j) && has_value(gr, i - 1, j) &&
                      has_value(gr, i, j + 1) && has_value(gr, i, j - 1);
          if (have) {
            double w = std::abs(c2) / hh;
            if (c2 > 0) {
              col(i + 1, j + 1, w, row);
              col(i - 1, j - 1, w, row);
            } else {
              col(i + 1, j - 1, w, row);
              col(i - 1, j + 1, w, row);
            }
            col(i, j, 2.0 * w, row);
            col(i + 1, j, -w, row);
            col(i - 1, j, -w, row);
            col(i, j + 1, -w, row);
            col(i, j - 1, -w, row);
          }
        }
        // first-order leftovers of the r-weighted mixed divergence
        Stencil sd1 = d1_stencil(gr, i, j), sdr = dr_stencil(gr, i, j);
        double d1_a1r = sd1.eval(gr, op.a1r), dr_a1r = sdr.eval(gr, op.a1r);
        double rot = op.a1r[nd] / gr.r(j);
        Stencil u1 = detail::u_deriv_stencil(gr, i, j, false);
        Stencil ur = detail::u_deriv_stencil(gr, i, j, true);
        for (int k = 0; k < u1.n; ++k) col(u1.ii[k], u1.jj[k], (dr_a1r + rot) * u1.w[k], row);
        for (int k = 0; k < ur.n; ++k) col(ur.ii[k], ur.jj[k], d1_a1r * ur.w[k], row);
      }
  }

  track_div = false;
  op.A.resize(n, n);
  op.A.setFromTriplets(ta.begin(), ta.end());
  if (mode == AssembleMode::UpwindGated) {
    op.A_div.resize(n, n);
    op.A_div.setFromTriplets(tdiv.begin(), tdiv.end());
  }
  op.B.resize(n, N);
  op.B.setFromTriplets(tb.begin(), tb.end());
  op.max_peclet = max_pe;
  op.upwinded_nodes = upwinded;

  int viol = 0;
  for (int k = 0; k < op.A.outerSize(); ++k) {
    bool bad = false;
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.A, k); it; ++it)
      if (it.row() != it.col() && it.value() < -1e-12) bad = true;
    if (bad) ++viol;
  }
  op.m_matrix_violations = viol;
  return op;
}

Eigen::VectorXd LinearOperator::restrict_interior(const Eigen::ArrayXd& full) const {
  Eigen::VectorXd out(grid->n_interior);
  for (int nd = 0; nd < int(full.size()); ++nd)
    if (grid->interior_id[nd] >= 0) out[grid->interior_id[nd]] = full[nd];
  return out;
}

Eigen::ArrayXd LinearOperator::extend(const Eigen::VectorXd& u_int, double bval) const {
  Eigen::ArrayXd out = Eigen::ArrayXd::Constant(grid->nx * grid->nr, bval);
  for (int nd = 0; nd < int(out.size()); ++nd)
    if (grid->interior_id[nd] >= 0) out[nd] = u_int[grid->interior_id[nd]];
  return out;
}

Eigen::VectorXd LinearOperator::apply(const Eigen::ArrayXd& full) const {
  return A * restrict_interior(full) + B * full.matrix();
}

DirichletSolver::DirichletSolver(const LinearOperator& op) : op_(op) {
  lu_.analyzePattern(op.A);
  lu_.factorize(op.A);
  lu_ok_ = (lu_.info() == Eigen::Success);
}

DirichletSolution DirichletSolver::solve(double height, const Eigen::ArrayXd& f) const {
  DirichletSolution sol;
  sol.height = height;
  sol.f = f;
  Eigen::VectorXd rhs = op_.restrict_interior(f);
  Eigen::VectorXd u;
  if (lu_ok_) {
    u = lu_.solve(rhs);
  }
  if (!lu_ok_ || !u.allFinite()) {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> it;
    it.setTolerance(1e-13);
    it.setMaxIterations(20000);
    it.compute(op_.A);
    u = it.solve(rhs);
    if (it.info() != Eigen::Success)
      throw std::runtime_error("dirichlet_solve: singular system (mesh-Peclet violation?)");
    sol.used_iterative_fallback = true;
  }
  double rnorm = (op_.A * u - rhs).cwiseAbs().maxCoeff();
  double fscale = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
  sol.linear_residual = rnorm / fscale;
  sol.u = op_.extend(u, 0.0);
  return sol;
}

DirichletSolution dirichlet_solve(const LinearOperator& op, double height, const Eigen::ArrayXd& f) {
  return DirichletSolver(op).solve(height, f);
}

double sup_on_level_curve(const GraphFunction& phi, const Eigen::ArrayXd& u, double h_prime) {
  const auto& gr = phi.grid;
  double best = 0.0;
  auto check_pair = [&](int n0, int n1) {
    double p0 = phi.phi[n0], p1 = phi.phi[n1];
    if ((p0 - h_prime) * (p1 - h_prime) > 0) return;
    double t = (h_prime - p0) / (p1 - p0 + 1e-300);
    if (t < 0 || t > 1) return;
    double uu = (1 - t) * u[n0] + t * u[n1];
    best = std::max(best, std::abs(uu));
  };
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      if (gr.kind[nd] == NodeKind::Exterior) continue;
      if (detail::has_value(gr, i + 1, j)) check_pair(nd, gr.node(i + 1, j));
      if (detail::has_value(gr, i, j + 1)) check_pair(nd, gr.node(i, j + 1));
    }
  return best;
}

double sup_on_sublevel(const GraphFunction& phi, const Eigen::ArrayXd& u, double h_prime,
                       double h0) {
  const auto& gr = phi.grid;
  double best = 0.0;
  for (int nd = 0; nd < gr.nx * gr.nr; ++nd) {
    if (gr.kind[nd] != NodeKind::Interior) continue;
    if (phi.phi[nd] >= h_prime) continue;
    if (h0 > 0 && phi.phi[nd] < h0) continue;
    if (std::isfinite(u[nd])) best = std::max(best, std::abs(u[nd]));
  }
  return best;
}

VerificationReport check_upper_lower(const GraphFunction& phi, const GeometryFields& geom,
                                     const DirichletSolution& sol, double h_prime, double h0,
                                     double eps_sub) {
  VerificationReport rep;
  rep.id = "upper_lower_estimate";
  rep.region = "Omega_h' \\ Omega_h0";
  const auto& gr = phi.grid;
  double lhs = sup_on_sublevel(phi, sol.u, h_prime, h0);
  double bnd = sup_on_level_curve(phi, sol.u, h_prime);
  double fH = 0.0;
  for (int nd = 0; nd < gr.nx * gr.nr; ++nd) {
    if (gr.kind[nd] != NodeKind::Interior || phi.phi[nd] >= h_prime) continue;
    if (geom.valid[nd] && geom.H[nd] > 0) fH = std::max(fH, std::abs(sol.f[nd]) / geom.H[nd]);
  }
  double C = 1.0 / eps_sub;
  double rhs = bnd + C * h_prime * fH;
  rep.worst_value = lhs;
  rep.budget = rhs;
  rep.margin = rhs - lhs;
  rep.pass = rep.margin >= 0;
  rep.details["sup_boundary"] = bnd;
  rep.details["sup_f_over_H"] = fH;
  rep.details["C"] = C;
  rep.details["h_prime"] = h_prime;
  return rep;
}

VerificationReport check_boundary_estimate(const GraphFunction& phi, const GeometryFields& geom,
                                           const DirichletSolution& sol, double h_prime,
                                           double eps_sub) {
  VerificationReport rep;
  rep.id = "level_set_estimate";
  rep.region = "boundary of Omega_h'";
  const auto& gr = phi.grid;
  double lhs = sup_on_level_curve(phi, sol.u, h_prime);
  double fH = 0.0;
  for (int nd = 0; nd < gr.nx * gr.nr; ++nd) {
    if (gr.kind[nd] != NodeKind::Interior) continue;
    if (geom.valid[nd] && geom.H[nd] > 0) fH = std::max(fH, std::abs(sol.f[nd]) / geom.H[nd]);
  }
  double C = 2.0 / eps_sub;  // the proof's constant: 2 max{h-h', log h} / eps
  double rhs = C * std::max(sol.height - h_prime, std::log(sol.height)) * fH;
  rep.worst_value = lhs;
  rep.budget = rhs;
  rep.margin = rhs - lhs;
  rep.pass = rep.margin >= 0;
  rep.details["sup_f_over_H"] = fH;
  return rep;
}

}  // namespace translab
