#pragma once

// Rotationally symmetric translator ODE (n-dimensional bowl solitons):
//   u''/(1+u'^2) + (n-1) u'/r = 1,  u(0)=u'(0)=0, unit speed.
// Supplies the 1-D oracle for the 2-D solver and the 2d-bowl profile Z_0.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace translab {

struct BowlProfile {
  int n = 3;
  Eigen::ArrayXd r, u, up;  // radial nodes, height, slope
  double max_residual = 0;  // ODE residual with FD second derivative

  /// Cubic Hermite interpolation of u (C^1, uses the stored slopes).
  double u_at(double rho) const {
    if (rho <= r[0]) return rho * rho * u[0] / (r[0] * r[0]);  // quadratic through 0
    int i = locate(rho);
    double h = r[i + 1] - r[i], s = (rho - r[i]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * u[i] + h10 * h * up[i] + h01 * u[i + 1] + h11 * h * up[i + 1];
  }

  double up_at(double rho) const {
    if (rho <= r[0]) return up[0] * rho / r[0];
    int i = locate(rho);
    double h = r[i + 1] - r[i], s = (rho - r[i]) / h;
    // derivative of the cubic Hermite basis
    double d00 = 6 * s * (s - 1) / h, d10 = (1 - s) * (1 - 3 * s);
    double d01 = -6 * s * (s - 1) / h, d11 = s * (3 * s - 2);
    return d00 * u[i] + d10 * up[i] + d01 * u[i + 1] + d11 * up[i + 1];
  }

  double r_max() const { return r[r.size() - 1]; }

 private:
  int locate(double rho) const {
    double h = r[1] - r[0];
    int i = int((rho - r[0]) / h);
    return std::clamp(i, 0, int(r.size()) - 2);
  }
};

inline double bowl_upp(int n, double r, double up) {
  return (1.0 + up * up) * (1.0 - (n - 1) * up / r);
}

/// Taylor coefficient of the r^4 term in u = r^2/(2n) + c4 r^4 + O(r^6),
/// obtained by matching the next order of the ODE.
inline double bowl_c4(int n) { return 1.0 / (double(n) * n * n * (4.0 * n + 8.0)); }

struct BowlOptions {
  double seed_eps = 1e-3;
  double residual_tol = 1e-6;
  bool coarse_step_probe = false;  // test hook: lift the h <= 0.01 gate and
                                   // the substep floor to expose the order
};

/// RK4 integration from the two-term Taylor seed at r = eps.
inline BowlProfile solve_bowl(int n, double r_max, double h_step, double tol = 1e-8,
                              BowlOptions opt = {}) {
  if (n != 2 && n != 3) throw std::invalid_argument("solve_bowl: n must be 2 or 3");
  if (!(r_max >= 1.0)) throw std::invalid_argument("solve_bowl: r_max >= 1 required");
  if (!(h_step <= 0.01) && !opt.coarse_step_probe)
    throw std::invalid_argument("solve_bowl: h_step <= 0.01 required");
  (void)tol;

  const double eps = opt.seed_eps;
  const double c4 = bowl_c4(n);
  const int steps = int(std::ceil((r_max - eps) / h_step));
  const double h = (r_max - eps) / steps;

  BowlProfile p;
  p.n = n;
  p.r.resize(steps + 1);
  p.u.resize(steps + 1);
  p.up.resize(steps + 1);

  double r = eps;
  double u = r * r / (2.0 * n) + c4 * r * r * r * r;
  double up = r / n + 4.0 * c4 * r * r * r;
  p.r[0] = r;
  p.u[0] = u;
  p.up[0] = up;

  auto rk4_step = [&](double& rr, double& uu, double& vv, double hh) {
    double k1u = vv, k1v = bowl_upp(n, rr, vv);
    double k2u = vv + 0.5 * hh * k1v, k2v = bowl_upp(n, rr + 0.5 * hh, vv + 0.5 * hh * k1v);
    double k3u = vv + 0.5 * hh * k2v, k3v = bowl_upp(n, rr + 0.5 * hh, vv + 0.5 * hh * k2v);
    double k4u = vv + hh * k3v, k4v = bowl_upp(n, rr + hh, vv + hh * k3v);
    uu += hh / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    vv += hh / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    rr += hh;
  };

  for (int i = 0; i < steps; ++i) {
    // the 1/r coefficient varies on scale r: substep until r resolves h
    int nsub = std::max(opt.coarse_step_probe ? 1 : 8, int(std::ceil(h / (0.01 * r))));
    double hh = h / nsub;
    for (int s = 0; s < nsub; ++s) rk4_step(r, u, up, hh);
    r = eps + (i + 1) * h;  // pin against drift
    if (!(up > 0.0)) throw std::runtime_error("solve_bowl: step rejection (lost monotonicity)");
    p.r[i + 1] = r;
    p.u[i + 1] = u;
    p.up[i + 1] = up;
  }

  // ODE residual of the stored trajectory in first-order form, measured with
  // fourth-order FD first derivatives (stays truncation-dominated, so the
  // residual tracks the integrator's own order)
  double worst = 0.0;
  for (int i = 2; i + 2 <= steps; ++i) {
    auto d5 = [&](const Eigen::ArrayXd& f) {
      return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    };
    double r1 = d5(p.u) - p.up[i];
    double r2 = d5(p.up) - bowl_upp(n, p.r[i], p.up[i]);
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  p.max_residual = worst;
  if (worst > std::max(opt.residual_tol, 2.0 * h * h))
    throw std::runtime_error("solve_bowl: seed-window mismatch (residual above tolerance)");
  return p;
}

/// Principal curvatures at the tip: all equal u''(0) = 1/n (quadratic fit near 0).
inline Eigen::ArrayXd tip_curvatures_bowl(const BowlProfile& p) {
  // fit u - c4 r^4 = a r^2 on the first few nodes (odd terms vanish by
  // symmetry; removing the known quartic term keeps the fit bias below 1e-6)
  double num = 0, den = 0;
  const double c4 = bowl_c4(p.n);
  for (int i = 0; i < 8 && i < p.r.size(); ++i) {
    double r2 = p.r[i] * p.r[i];
    num += (p.u[i] - c4 * r2 * r2) * r2;
    den += r2 * r2;
  }
  double a = num / den;  // u''(0)/2
  Eigen::ArrayXd k(p.n);
  k.setConstant(2.0 * a);
  return k;
}

}  // namespace translab
