#pragma once

// Gauge transformations between graphical variations/inhomogeneities (u, f)
// and their renormalized cylindrical (w, g) and tip (W, G) counterparts, plus
// residual checks of the transformed equations with e^tau budgets.

#include "translab/profiles.hpp"
#include "translab/report.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace translab {

using Field2 = std::function<double(double, double)>;  // (x1, x2) on the graph

/// Prefactor v/2 - (y/2) v_y - v_tau of the cylindrical transformation.
double cyl_prefactor(const ProfileFamily& p, double y, double tau);
/// Prefactor Y/2 - (v/2) Y_v - Y_tau of the tip transformation.
double tip_prefactor(const ProfileFamily& p, double vv, double tau);

/// w(y,tau) = e^tau * pref * u(e^{-tau/2} y, e^{-tau/2} v).  Throws on a
/// nonpositive prefactor.
double to_cylindrical_w(const Field2& u, const ProfileFamily& p, double y, double tau);
/// g(y,tau) = e^{-tau/2} sqrt(1 + v_y^2 + e^tau (v_tau + (y/2)v_y - v/2)^2) * f(...).
double to_cylindrical_g(const Field2& f, const ProfileFamily& p, double y, double tau);

double to_tip_W(const Field2& u, const ProfileFamily& p, double vv, double tau);
double to_tip_G(const Field2& f, const ProfileFamily& p, double vv, double tau);

/// Inverse of the w-transformation at a cylindrical point.  Throws on
/// prefactor underflow.
double from_cylindrical_at(double w_value, const ProfileFamily& p, double y, double tau,
                           double floor = 1e-12);
double from_tip_at(double W_value, const ProfileFamily& p, double vv, double tau,
                   double floor = 1e-12);

/// Graphical field u(x1,x2) reconstructed from w through the level-set
/// coordinates of the background graph: tau = -log(phi), y = x1/sqrt(phi).
Field2 from_cylindrical(const std::function<double(double, double)>& w_fn,
                        const ProfileFamily& p, const GraphFunction& phi);

/// Sampled variation tables on the cylindrical window [y in ygrid] x taugrid
/// and tip window [v in vgrid] x taugrid.
struct VariationBundle {
  Eigen::ArrayXd ygrid, taugrid, vgrid;
  Eigen::MatrixXd w, g;  // ny x ntau
  Eigen::MatrixXd W, G;  // nv x ntau
};

VariationBundle make_bundle(const Field2& u, const Field2& f, const ProfileFamily& p,
                            const Eigen::ArrayXd& ygrid, const Eigen::ArrayXd& taugrid,
                            const Eigen::ArrayXd& vgrid);

struct ResidualBudget {
  // e^tau * C1 * ||.||_C2 covers the unspecified second-order remainder; the
  // constant absorbs its tau-derivative (alpha, beta) coefficients, which act
  // on W_tautau at the full C2 scale
  double C1 = 25.0;
  double C2 = 10.0;  // discretization term C2 * (h_y^2 + h_tau^2)
  bool use_footnote_coefficients = false;  // report the alpha/beta term separately
};

/// Residual of the truncated cylindrical equation -w_tau + L w + E w - g,
/// where E = -v_y^2/(1+v_y^2) d_yy - 2 v_y v_yy/(1+v_y^2)^2 d_y + (2-v^2)/(2v^2),
/// checked against the budget C1 e^tau ||w||_C2 + C2 h^2.
VerificationReport cyl_residual(const VariationBundle& b, const ProfileFamily& p,
                                ResidualBudget budget = {});

/// Residual of the truncated tip equation
/// -W_tau + W_vv/(1+Y_v^2) + (1/v - v/2 - 2 Y_vv Y_v/(1+Y_v^2)^2) W_v + W/2 - G.
/// The v = 0 axis enters by even reflection of W.
VerificationReport tip_residual(const VariationBundle& b, const ProfileFamily& p,
                                ResidualBudget budget = {});

/// Obstruction coefficients of the truncated cylindrical variation at tau0:
/// (<w_C,1>/||1||^2, <w_C,y>/||y||^2, <w_C,H2>/||H2||^2) with the cutoff
/// phi_C (0 below 5 theta/8, 1 above 7 theta/8) applied.
std::array<double, 3> obstruction(const Field2& u, const ProfileFamily& p, double tau0);

}  // namespace translab
