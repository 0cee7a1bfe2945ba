#pragma once

// Sub- and supersolution constructions and their pointwise verification:
// the global subsolution phi + log H, the cylindrical/tip barriers b and B
// with the kappa weight, the graphical-gauge certificate L u_A <= 0 on the
// region D, and the inner-outer experiment.

#include "translab/gauges.hpp"
#include "translab/linearized.hpp"
#include "translab/profiles.hpp"
#include "translab/report.hpp"

namespace translab {

struct BarrierSpec {
  double theta = 0.1;
  double ell = 1.0;
  double Gamma = 0;      // 1000/(1-gamma_est); filled by make_barrier_spec
  double Lambda = 0;     // transition constant; validated b1 <= Lambda b2
  double gamma_est = 0;  // measured curvature ratio, floored at 1/2
  double log_h = 5.0;    // Dirichlet height driving the kappa weight
  double mu = 0.0;

  // quintic cutoffs: chi ramps on [theta/2, theta], zeta on [theta/4, theta/2]
  double chi(double v) const;
  double zeta(double v) const;
  /// Smooth convex weight: |tau|/sqrt(log h) deep down, 2 above -sqrt(log h).
  double kappa(double tau) const;
  double kappa_prime(double tau) const;
};

/// Measured sup of |Y_v^2 Y_vv/(1+Y_v^2)^2| * v/|Y_v| over v <= 2 theta,
/// floored at 1/2.
double measure_gamma(const ProfileFamily& p, double tau, double theta);

/// Builds the spec from the profile: Gamma from the measured gamma, Lambda
/// from the transition-region ratio sup(b1/b2) * 1.1.  Throws if some given
/// Lambda is too small for b1 <= Lambda b2 on [theta/2, 2 theta].
BarrierSpec make_barrier_spec(const ProfileFamily& p, double tau, double theta, double ell,
                              double log_h, double mu = 0.0,
                              std::optional<double> lambda_override = std::nullopt);

double barrier_b1(double v);
/// b2 with the collar min-structure; `indicator_after_inversion` switches the
/// ambiguous indicator between v(y,tau) <= 2 ell |tau|^{-1/2} (false) and
/// y >= Y(2 ell |tau|^{-1/2}) (true) -- both are computed and reported.
double barrier_b2(const ProfileFamily& p, const BarrierSpec& s, double y, double tau,
                  bool indicator_after_inversion = false);
/// Force a smooth branch of the min/indicator structure (0: 1/v, 1: capped
/// with collar correction, 2: capped plain); the branchwise inequality is what
/// the min-of-supersolutions argument needs.
double barrier_b2_branch(const ProfileFamily& p, const BarrierSpec& s, double y, double tau,
                         int branch, bool indicator_after_inversion = false);
int barrier_b2_active_branch(const ProfileFamily& p, const BarrierSpec& s, double vv, double tau,
                             bool indicator_after_inversion = false);
double barrier_B_branch(const ProfileFamily& p, const BarrierSpec& s, double vv, double tau,
                        int branch, bool indicator_after_inversion = false);
double barrier_b(const ProfileFamily& p, const BarrierSpec& s, double y, double tau,
                 bool indicator_after_inversion = false);
/// B = -Y_v b(Y) on the tip window.
double barrier_B(const ProfileFamily& p, const BarrierSpec& s, double vv, double tau,
                 bool indicator_after_inversion = false);

struct SubsolutionResult {
  VerificationReport report;  // eps_sub > 0 and the mechanism ratio
  double eps_sub = 0;         // min L[phi + log H]/H over the certified region
  double field_min_lowH = 0;  // min of the field restricted to {H <= 1/8}
  double mechanism_min = 0;   // min of the B_sup2 quantity on {H <= 1/8}
  double C_measured = 0;      // measured constant in |A(e4,e4)| <= C H^2
  Eigen::ArrayXd field;       // L[phi + log H]/H at interior nodes (NaN outside)
};

/// Prop-4.2 certificate on a solved grid.
SubsolutionResult subsolution_field(const GraphFunction& g, const GeometryFields& geom);

/// Lemma 4.1 identity residual max |L phi - (H - 2 A(e4,e4))|.
double lemma41_residual(const GraphFunction& g, const GeometryFields& geom);

/// Truncated cylindrical inequality L_cyl b <= -b^2/4 (mu < 0 disables the
/// kappa weight) and the Cor-4.6 weighted version with the -b^2/8 target;
/// margins evaluated on y in [ell, Y(theta,tau)].
VerificationReport verify_cyl_supersolution(const ProfileFamily& p, const BarrierSpec& s,
                                            double tau, bool weighted,
                                            bool indicator_after_inversion = false);
/// Tip inequality L_tip B <= -(|tau|^{1/2} + v^{-3} min(1, v^2 |tau|/ell^2)) on
/// v <= 2 theta (weighted variant multiplies the target by kappa|tau|^-mu / 2).
VerificationReport verify_tip_supersolution(const ProfileFamily& p, const BarrierSpec& s,
                                            double tau, bool weighted);

/// Graphical-gauge certificate: u_A = kappa |tau|^{-mu} b / (e^tau pref) mapped
/// through the inverse gauge onto D = (Omega_h \ Omega_h0) cap {x1 >= ell
/// sqrt(phi)}; asserts L u_A <= margin at the interior nodes of D.
VerificationReport verify_supersolution_graphical(const GraphFunction& g, const ProfileFamily& p,
                                                  const BarrierSpec& s, double h, double h0,
                                                  double discretization_margin);

/// Discrete comparison mechanics: for the assembled operator, L(u_A - u) <= 0
/// in D and u_A - u >= 0 on the discrete boundary of D imply u_A - u >= 0 in D.
VerificationReport comparison_mechanics(const GraphFunction& g, const Eigen::ArrayXd& uA,
                                        const Eigen::ArrayXd& u, double h, double h0,
                                        const BarrierSpec& s);

struct InnerOuterResult {
  VerificationReport report;
  bool hypotheses_ok = false;
  std::string failed_term;
  double A_const = 0;
  double C_admissible = 0;  // smallest C making the conclusion hold
  bool window_floored = false;
};

/// Thm-4.7 experiment on a solved Dirichlet instance.  The conclusion window
/// [-sqrt(log h), tau0] is floored to [tau0 - 1, tau0] when degenerate (desk
/// heights) and flagged.
InnerOuterResult inner_outer_check(const GraphFunction& phi, const DirichletSolution& sol,
                                   const ProfileFamily& p, const BarrierSpec& s, double A_const);

}  // namespace translab
