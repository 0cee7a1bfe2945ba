#include "translab/translator.hpp"

#include "translab/linearized.hpp"

#include "translab/detail/stencils.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>

namespace translab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

using detail::d1_stencil;
using detail::dr_stencil;
using detail::face_flux;
using detail::FaceEval;
using detail::has_value;
using detail::Stencil;
using detail::val;

double GraphFunction::interp(double x, double r) const {
  const auto& g = grid;
  if (r < 0) r = -r;
  double si = (x - g.x1_min) / g.h1, sj = r / g.hr;
  int i = std::clamp(int(std::floor(si)), 0, g.nx - 2);
  int j = std::clamp(int(std::floor(sj)), 0, g.nr - 2);
  double u = si - i, v = sj - j;
  return (1 - u) * (1 - v) * phi[g.node(i, j)] + u * (1 - v) * phi[g.node(i + 1, j)] +
         (1 - u) * v * phi[g.node(i, j + 1)] + u * v * phi[g.node(i + 1, j + 1)];
}

void GraphFunction::interp_grad(double x, double r, double& dx, double& dr) const {
  const double h = 0.5 * std::min(grid.h1, grid.hr);
  dx = (interp(x + h, r) - interp(x - h, r)) / (2 * h);
  dr = (interp(x, r + h) - interp(x, r - h)) / (2 * h);
}

Eigen::ArrayXd residual(const GraphFunction& g) {
  const auto& gr = g.grid;
  Eigen::ArrayXd out = Eigen::ArrayXd::Constant(gr.nx * gr.nr, kNaN);
  for (int j = 0; j < gr.nr; ++j) {
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      if (gr.kind[nd] != NodeKind::Interior) continue;
      const auto& fr = gr.frac[nd];

      FaceEval fxp = face_flux(gr, g.phi, i, j, 0, fr[0], 0.0);
      FaceEval fxm = face_flux(gr, g.phi, i, j, 1, fr[1], 0.0);
      FaceEval frp = face_flux(gr, g.phi, i, j, 2, fr[2], 0.0);
      FaceEval frm = face_flux(gr, g.phi, i, j, 3, fr[3], 0.0);

      double hx = 0.5 * (fr[0] + fr[1]) * gr.h1;
      double acc = (fxp.flux + fxm.flux) / hx;  // fxm.flux carries the - sign via d1

      const double rj = gr.r(j);
      if (j == 0) {
        // axis row: (1/r) d_r(r F) + F/r -> 2 phi_rr/W -> 4 F_{+1/2}/hr
        acc += 4.0 * frp.flux / gr.hr;
      } else {
        double hrr = 0.5 * (fr[2] + fr[3]) * gr.hr;
        double rp = rj + 0.5 * fr[2] * gr.hr, rm = rj - 0.5 * fr[3] * gr.hr;
        acc += (rp * frp.flux + rm * frm.flux) / (rj * hrr);
      }

      // zeroth term -1/W with node-centered gradient
      Stencil d1c = d1_stencil(gr, i, j), drc = dr_stencil(gr, i, j);
      double p1 = d1c.eval(gr, g.phi), pr = drc.eval(gr, g.phi);
      double W = std::sqrt(1.0 + p1 * p1 + pr * pr);
      out[nd] = acc - 1.0 / W;
    }
  }
  return out;
}

NewtonResult newton_solve(const ReducedGrid& grid,
                          const std::function<double(double, double)>& boundary_data,
                          const std::function<double(double, double)>& init, NewtonOptions opt) {
  NewtonResult res;
  GraphFunction g;
  g.grid = grid;
  g.phi = Eigen::ArrayXd::Zero(grid.nx * grid.nr);
  for (int j = 0; j < grid.nr; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      int nd = grid.node(i, j);
      if (grid.kind[nd] == NodeKind::Boundary)
        g.phi[nd] = boundary_data(grid.x1(i), grid.r(j));
      else if (grid.kind[nd] == NodeKind::Interior)
        g.phi[nd] = init(grid.x1(i), grid.r(j));
    }

  auto res_norms = [&](const Eigen::ArrayXd& r, double& l2, double& linf) {
    l2 = 0;
    linf = 0;
    for (int nd = 0; nd < int(r.size()); ++nd)
      if (std::isfinite(r[nd])) {
        l2 += r[nd] * r[nd];
        linf = std::max(linf, std::abs(r[nd]));
      }
    l2 = std::sqrt(l2);
  };

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;

  Eigen::ArrayXd th = residual(g);
  double l2, linf;
  res_norms(th, l2, linf);
  res.residual_history.push_back(linf);

  for (int it = 0; it < opt.max_iter && linf > opt.tol; ++it) {
    LinearOperator J = assemble(g, AssembleMode::ExactJacobian);
    if (!analyzed) {
      lu.analyzePattern(J.A);
      analyzed = true;
    }
    lu.factorize(J.A);
    if (lu.info() != Eigen::Success) throw std::runtime_error("newton_solve: Jacobian solve failure");
    Eigen::VectorXd rhs = -J.restrict_interior(th.isFinite().select(th, 0.0));
    Eigen::VectorXd delta = lu.solve(rhs);

    double lambda = 1.0;
    Eigen::ArrayXd phi0 = g.phi;
    double new_l2 = 0, new_linf = 0;
    while (true) {
      g.phi = phi0;
      for (int nd = 0; nd < int(g.phi.size()); ++nd)
        if (grid.interior_id[nd] >= 0) g.phi[nd] += lambda * delta[grid.interior_id[nd]];
      Eigen::ArrayXd th_new = residual(g);
      res_norms(th_new, new_l2, new_linf);
      if (new_l2 <= (1.0 - opt.armijo_c * lambda) * l2 || lambda <= opt.damping_floor) {
        th = th_new;
        break;
      }
      lambda *= 0.5;
    }
    l2 = new_l2;
    linf = new_linf;
    res.residual_history.push_back(linf);
    ++res.iterations;
  }
  if (linf > opt.tol) throw std::runtime_error("newton_solve: max_iter exceeded");
  res.converged = true;
  res.convexity_warning = !reduced_hessian_psd(g);
  g.normalized = false;
  res.solution = std::move(g);
  return res;
}

bool reduced_hessian_psd(const GraphFunction& g, double tol) {
  const auto& gr = g.grid;
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 1; i + 1 < gr.nx; ++i) {
      int nd = gr.node(i, j);
      if (gr.kind[nd] != NodeKind::Interior) continue;
      if (!has_value(gr, i + 1, j) || !has_value(gr, i - 1, j) || !has_value(gr, i, j + 1) ||
          !has_value(gr, i, j - 1) || !has_value(gr, i + 1, j + 1) || !has_value(gr, i - 1, j - 1) ||
          !has_value(gr, i + 1, j - 1) || !has_value(gr, i - 1, j + 1))
        continue;
      double h11 = (val(gr, g.phi, i + 1, j) - 2 * g.phi[nd] + val(gr, g.phi, i - 1, j)) / (gr.h1 * gr.h1);
      double hrr = (val(gr, g.phi, i, j + 1) - 2 * g.phi[nd] + val(gr, g.phi, i, j - 1)) / (gr.hr * gr.hr);
      double h1r = (val(gr, g.phi, i + 1, j + 1) - val(gr, g.phi, i + 1, j - 1) -
                    val(gr, g.phi, i - 1, j + 1) + val(gr, g.phi, i - 1, j - 1)) /
                   (4 * gr.h1 * gr.hr);
      if (h11 < -tol || hrr < -tol || h11 * hrr - h1r * h1r < -tol) return false;
    }
  return true;
}

GeometryFields geometry(const GraphFunction& g) {
  const auto& gr = g.grid;
  const int N = gr.nx * gr.nr;
  GeometryFields out;
  out.W = Eigen::ArrayXd::Constant(N, kNaN);
  out.H = out.W;
  out.A2 = out.W;
  out.Ae4 = out.W;
  out.k1 = out.W;
  out.k2 = out.W;
  out.k3 = out.W;
  out.valid.assign(N, false);

  Eigen::ArrayXd theta = residual(g);  // H via divergence: H = Theta + 1/W ... see below

  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      if (gr.kind[nd] != NodeKind::Interior) continue;
      bool full = has_value(gr, i + 1, j) && has_value(gr, i - 1, j) && has_value(gr, i, j + 1) &&
                  has_value(gr, i, j - 1) && has_value(gr, i + 1, j + 1) &&
                  has_value(gr, i - 1, j - 1) && has_value(gr, i + 1, j - 1) &&
                  has_value(gr, i - 1, j + 1);
      if (!full) continue;
      double p1 = (val(gr, g.phi, i + 1, j) - val(gr, g.phi, i - 1, j)) / (2 * gr.h1);
      double pr = (j == 0) ? 0.0
                           : (val(gr, g.phi, i, j + 1) - val(gr, g.phi, i, j - 1)) / (2 * gr.hr);
      double h11 = (val(gr, g.phi, i + 1, j) - 2 * g.phi[nd] + val(gr, g.phi, i - 1, j)) / (gr.h1 * gr.h1);
      double hrr = (val(gr, g.phi, i, j + 1) - 2 * g.phi[nd] + val(gr, g.phi, i, j - 1)) / (gr.hr * gr.hr);
      double h1r = (j == 0) ? 0.0
                            : (val(gr, g.phi, i + 1, j + 1) - val(gr, g.phi, i + 1, j - 1) -
                               val(gr, g.phi, i - 1, j + 1) + val(gr, g.phi, i - 1, j - 1)) /
                                  (4 * gr.h1 * gr.hr);
      double W2 = 1 + p1 * p1 + pr * pr, W = std::sqrt(W2);
      double rot = (j == 0) ? hrr : pr / gr.r(j);  // phi_r / r with axis limit

      out.W[nd] = W;
      // H from the divergence expression: Theta = H - 1/W
      out.H[nd] = theta[nd] + 1.0 / W;

      // |A|^2 via the trace formula with the 3-D Hessian blocks
      double hess_sq = h11 * h11 + 2 * h1r * h1r + hrr * hrr + rot * rot;
      double hd1 = h11 * p1 + h1r * pr, hdr = h1r * p1 + hrr * pr;  // Hess . Dphi
      double hd_sq = hd1 * hd1 + hdr * hdr;
      double hdd = hd1 * p1 + hdr * pr;  // Hess(Dphi,Dphi)
      out.A2[nd] = hess_sq / W2 - 2 * hd_sq / (W2 * W2) + hdd * hdd / (W2 * W2 * W2);
      out.Ae4[nd] = hdd / (W2 * W2 * W);  // (1+|Dphi|^2)^{5/2}

      // principal curvatures: rotational + eigenvalues of g2^{-1} Hess2 / W
      out.k3[nd] = rot / W;
      // g2^{-1} = I - Dphi (x) Dphi / W^2
      double m11 = (h11 - p1 * (hd1) / W2) / W;
      double m12 = (h1r - p1 * (hdr) / W2) / W;
      double m21 = (h1r - pr * (hd1) / W2) / W;
      double m22 = (hrr - pr * (hdr) / W2) / W;
      double tr = m11 + m22, det = m11 * m22 - m12 * m21;
      double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
      out.k1[nd] = 0.5 * tr - disc;
      out.k2[nd] = 0.5 * tr + disc;
      out.valid[nd] = true;
    }
  return out;
}

}  // namespace translab
