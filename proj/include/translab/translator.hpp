#pragma once

// Nonlinear graphical translator operator in reduced axisymmetric coordinates,
//   Theta[phi] = div(D phi / W) + phi_r/(r W) - 1/W,   W = sqrt(1 + |D phi|^2),
// discretized in r-weighted conservative (flux) form with second-order central
// differences; axis handled by even reflection, the singular term by its
// even-symmetry limit 2 phi_rr / W.

#include "translab/grid.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace translab {

struct GraphFunction {
  ReducedGrid grid;
  Eigen::ArrayXd phi;  // all nodes; meaningful at Interior and Boundary
  bool normalized = false;

  double at(int i, int j) const { return phi[grid.node(i, j)]; }
  /// Bilinear interpolation (caller keeps (x,r) inside the defined mask).
  double interp(double x, double r) const;
  /// Bilinear interpolation of the gradient.
  void interp_grad(double x, double r, double& dx, double& dr) const;
};

/// Theta[phi] at interior nodes (NaN elsewhere).
Eigen::ArrayXd residual(const GraphFunction& g);

struct GeometryFields {
  Eigen::ArrayXd W;        // sqrt(1+|Dphi|^2)
  Eigen::ArrayXd H;        // mean curvature via the divergence expression
  Eigen::ArrayXd A2;       // |A|^2_g via the trace formula
  Eigen::ArrayXd Ae4;      // A(e4^T, e4^T)
  Eigen::ArrayXd k1, k2, k3;  // principal curvatures (k3 rotational)
  std::vector<bool> valid;    // full centered stencil available
};

GeometryFields geometry(const GraphFunction& g);

struct NewtonOptions {
  double tol = 1e-10;        // on ||Theta||_inf
  int max_iter = 50;
  double damping_floor = 1.0 / 1024.0;  // 2^-10
  double armijo_c = 1e-4;
};

struct NewtonResult {
  GraphFunction solution;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // ||Theta||_inf after each accepted step
  bool convexity_warning = false;        // reduced Hessian lost PSD somewhere
};

/// Damped Newton with Armijo backtracking on ||Theta||_2; the Jacobian is the
/// exact derivative of the discrete residual (assembled in linearized.hpp).
NewtonResult newton_solve(const ReducedGrid& grid,
                          const std::function<double(double, double)>& boundary_data,
                          const std::function<double(double, double)>& init,
                          NewtonOptions opt = {});

/// Discrete convexity check: reduced 2x2 Hessian PSD at all interior nodes
/// with full stencils.  Warning-level invariant for accepted solutions.
bool reduced_hessian_psd(const GraphFunction& g, double tol = 1e-8);

}  // namespace translab
