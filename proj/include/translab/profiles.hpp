#pragma once

// Level-set profile families: the unrenormalized profile V(x1,t), the
// renormalized profile v(y,tau) with derivative tables, and the tip inverse
// Y(v,tau).  Extracted families are table+spline backed; synthetic families
// (sharp-asymptotics model, frozen cylinder) are closed-form.

#include "translab/bowl.hpp"
#include "translab/translator.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>

namespace translab {

struct ProfileFamily {
  using Fn = std::function<double(double, double)>;

  // cylindrical gauge: arguments (y, tau)
  Fn v, v_y, v_yy, v_tau;
  // tip gauge: arguments (vv, tau)
  Fn Y, Y_v, Y_vv, Y_tau;
  // largest y with a valid profile value at this tau (v -> 0 there)
  std::function<double(double)> y_max;

  double tau_lo = 0, tau_hi = 0;  // valid window, tau_lo < tau_hi < 0
  double theta = 0.1;
  double ell = 1.0;
  std::string kind;  // "extracted" | "synthetic" | "cylinder"

  bool has_tip = true;

  /// Consistency check Y(v(y,tau),tau) = y on y >= 0.
  double inversion_error(double tau, int samples = 50) const;
};

/// v == sqrt(2) frozen cylinder (no tip); for operator identity tests.
ProfileFamily frozen_cylinder(double tau_lo = -1e9, double tau_hi = -1.0);

/// Sharp-asymptotics model v^2 = 2 + (2 - y^2)/|tau| with closed-form
/// derivatives; valid for any tau <= tau_hi <= -10.  Satisfies the parabolic
/// expansion, the intermediate sqrt(2 - z^2) shape and the tip slope bounds.
ProfileFamily synthetic_asymptotic(double theta = 0.01, double ell = 25.0,
                                   double tau_lo = -1e9, double tau_hi = -100.0);

struct ExtractOptions {
  int n_tau = 9;        // tau rows (>= 5 for the tau-stencil)
  int n_y = 240;        // y samples per row
  double theta = 0.1;
  double ell = 1.0;
};

/// Extract V/v/Y tables from a solved graph on the window [tau_lo, tau_hi];
/// heights e^{-tau} must stay inside the graph's range.  Rows are
/// spline-differentiated in y; v_tau uses a 5-point stencil across rows.
ProfileFamily extract_profiles(const GraphFunction& g, double tau_lo, double tau_hi,
                               ExtractOptions opt = {});

/// Unrenormalized profile: the radius V with phi(x1, V) = height, by monotone
/// bisection along the r-column (throws if the column is not monotone or the
/// height is out of range).
double level_radius(const GraphFunction& g, double x1, double height);

/// Smooth profile family of the SO(3) round bowl from the 1-D oracle:
/// v(y,tau) = sqrt(rho~(tau)^2 - y^2) with rho~ = e^{tau/2} u^{-1}(e^{-tau}).
ProfileFamily bowl_profile_family(const BowlProfile& bowl, double theta, double ell,
                                  double tau_lo, double tau_hi);

/// Oval-bowl approximant: boundary data from the synthetic-asymptotics graph
/// on a rectangle, interior relaxed by the translator Newton solve.  Heights
/// spanned are roughly [e^{-tau_hi}, e^{-tau_lo}] at the rim.
GraphFunction oval_approximant(const ProfileFamily& p, double x1_max, double r_max, double h,
                               double tau_lo, double tau_hi);

/// Synthetic graph built from a profile family by inverting the level-set
/// relation phi(x1, V(x1,t)) = |t| over heights e^{-tau_hi}..e^{-tau_lo};
/// exercises the extraction pipeline against closed-form truth (node values
/// clamp to the height window, so compare only well inside it).
GraphFunction graph_from_profile(const ProfileFamily& p, double x1_max, double r_max, double h,
                                 double tau_lo, double tau_hi);

}  // namespace translab
