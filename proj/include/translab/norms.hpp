#pragma once

// Gaussian norms (h, D, D*), the tip weight mu_bar and tip norms, H-weighted
// parabolic Holder norms on cubes, the rho weights, the X/Y norm assembly and
// the energy-decay diagnostics.

#include "translab/gauges.hpp"
#include "translab/hermite.hpp"
#include "translab/profiles.hpp"
#include "translab/report.hpp"

#include <random>

namespace translab {

struct GaussianNorms {
  double h = 0, d = 0, dstar = 0;
};

/// h by weighted quadrature, D with the spectral derivative of the samples,
/// D* by the Riesz route: solve the discrete weighted Helmholtz problem
/// <q, phi>_D = <p, phi>_h for all grid test functions and return ||q||_D.
GaussianNorms gaussian_norms(const GaussianQuadrature& q, const Eigen::ArrayXd& p);

/// Best constants in ||(1+|y|) f||_h <= C ||f||_D and ||(1+|y|) f||_D* <= C ||f||_h
/// over a seeded random polynomial family.
VerificationReport weighted_sobolev_check(const GaussianQuadrature& q, unsigned seed = 7,
                                          int trials = 40, int max_deg = 8);

/// Tip weight mu_bar(v,tau) = -Y(theta)^2/4 + int_v^theta [zeta (Y^2/4)' -
/// (1-zeta)(1+Y_v^2)/s] ds, tabulated on a fixed v-grid.
struct TipWeight {
  Eigen::ArrayXd vgrid;   // ascending, (0, 2 theta]
  Eigen::ArrayXd mu_bar;  // at vgrid for the bound tau
  double tau = 0, theta = 0;

  double at(double v) const;  // linear interpolation
};

TipWeight make_tip_weight(const ProfileFamily& p, double tau, double theta, int n = 400);

struct TipNorms {
  double l2 = 0;      // (int_0^{2theta} F^2 e^{mu_bar} dv)^{1/2}
  double sup_24 = 0;  // |tau|^{-1/4}-weighted unit-interval version
};

/// F sampled on w.vgrid.
double tip_norm_l2(const TipWeight& w, const Eigen::ArrayXd& F);

// ---------------------------------------------------------------------------
// H-weighted parabolic Holder norms
// ---------------------------------------------------------------------------

struct HolderCube {
  double x = 0, s = 0, t = 0;  // center (x, s, t); tip cubes use (x2, 0, t)
  double r = 0;
  bool tip = false;  // P_r (cylindrical) vs Q_r (tip)
  int k = 0;
  double alpha = 0.5;
  int l = 0;  // weight offset
};

using Field3 = std::function<double(double, double, double)>;  // (x, s, t)

/// Sum_m [f]^{m,(l)} + [f]^{k,alpha,(l)} with FD derivatives and seeded
/// stratified pair sampling (<= max_pairs) for the Holder seminorm.
double holder_norm(const Field3& f, const Field3& Hwt, const HolderCube& cube,
                   unsigned seed = 12345, int lattice = 7, int max_pairs = 10000,
                   double fd_step = -1.0);

// ---------------------------------------------------------------------------
// rho weights and the X/Y norms
// ---------------------------------------------------------------------------

struct RhoPair {
  double star = 0, bullet = 0;
};

/// Piecewise weights of the Fredholm norms; branch switches at V = theta
/// sqrt(|t|).
RhoPair rho_weights(double V, double t, double theta);

struct XYNormBreakdown {
  double cap = 0;           // C^{k,alpha}(Omega_{2h0}) of u (resp. f)
  double cylindrical = 0;   // sup over P_r cubes, rho-weighted
  double tip = 0;           // sup over Q_r cubes
  double total() const { return cap + cylindrical + tip; }
  bool cover_gap = false;   // region sample came up empty
  bool floored = false;     // inner height floor bound
};

struct XYOptions {
  double theta = 0.1, ell = 1.0;
  double h0 = 20.0;
  int k = 4;
  double alpha = 0.5;
  int tau_samples = 6;
  int x_samples = 4;
  unsigned seed = 99;
};

/// Domain norm of u: cap + rho_star-weighted cylindrical cubes + tip cubes.
XYNormBreakdown x_norm(const Field2& u, const GraphFunction& phi, const ProfileFamily& p,
                       double h, XYOptions opt = {});
/// Target norm of f: cap (k-2) + rho_bullet-weighted cubes with offset l = 2.
XYNormBreakdown y_norm(const Field2& f, const GraphFunction& phi, const ProfileFamily& p,
                       double h, XYOptions opt = {});

// ---------------------------------------------------------------------------
// energy diagnostics
// ---------------------------------------------------------------------------

struct EnergyDiagnostics {
  double tau_in = 0;          // -log(h - h^{gamma_k}), floored at -log(2 h0)
  bool floored = false;
  std::array<double, 3> obstruction{};  // p+0, p+1, p0 coefficients at tau0
  bool orthogonal = false;

  // left-hand quantities
  double p0_h_inf = 0;        // || |tau|^{1+mu} p0 w_C ||_{H,inf}
  double wmp0_d_inf = 0;      // || |tau|^{2+mu} (w_C - p0 w_C) ||_{D,inf}
  double WT_2_inf = 0;        // || |tau|^{2+mu} W_T ||_{2,inf}
  // right-hand quantities
  double w_c2_exp = 0, W_c2_exp = 0;
  double g_dstar_inf = 0;     // || |tau|^{2+mu} g_C ||_{D*,inf}
  double G_2_inf = 0;         // || |tau|^{1+mu} G_T ||_{2,inf}
  double f_over_H = 0;
  double implied_constant = 0;  // LHS / RHS
  double poincare_C0 = 0;       // measured weighted Poincare constant
  bool all_finite = false;
};

struct EnergyOptions {
  double mu = 1.0;
  int k = 4;
  double theta = 0.1;
  double h0 = 20.0;
  bool require_orthogonality = true;
};

EnergyDiagnostics energy_diagnostics(const Field2& u, const Field2& f, const ProfileFamily& p,
                                     const GraphFunction& phi, double h, double f_over_H_sup,
                                     EnergyOptions opt = {});

}  // namespace translab
