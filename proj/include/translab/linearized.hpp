#pragma once

// Linearized translator operator L_phi u = div(a_phi D u) + b_phi . D u in
// r-weighted flux form, its sparse assembly, Dirichlet solves on level-set
// domains, the upper-lower verification and the obstruction coefficients.

#include "translab/grid.hpp"
#include "translab/report.hpp"
#include "translab/translator.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <memory>

namespace translab {

enum class AssembleMode {
  // Exact derivative of the discrete Theta (central b-term).  References to
  // boundary-node values go through B, so it applies to fields with arbitrary
  // boundary data.
  ExactJacobian,
  // Frozen-coefficient flux form, b upwinded when the mesh-Peclet gate trips.
  // Built for the homogeneous Dirichlet problem: stencil arms that cross the
  // domain curve assume the value 0 at the crossing.  The mixed term is the
  // r-weighted symmetric bilinear form (exact weighted adjointness).
  UpwindGated,
  // Comparison variant: the cross term uses the sign-matched corner stencil,
  // which keeps the off-diagonal signs admissible wherever |a1r| <=
  // min(a11, arr); used by the maximum-principle and barrier experiments.
  UpwindGatedComparison
};

struct LinearOperator {
  Eigen::SparseMatrix<double> A;      // interior x interior
  Eigen::SparseMatrix<double> B;      // interior x all-nodes, boundary columns only
  Eigen::SparseMatrix<double> A_div;  // UpwindGated only: the div(a D u) part
  const ReducedGrid* grid = nullptr;
  // node-centered coefficient fields (diagnostics; all-nodes arrays)
  Eigen::ArrayXd a11, a1r, arr, b1, br;
  AssembleMode mode = AssembleMode::ExactJacobian;
  double max_peclet = 0;      // max |b| h / (2 lambda_min(a)) over interior
  int upwinded_nodes = 0;     // rows where the gate switched to upwind
  int m_matrix_violations = 0;  // rows with a positive off-diagonal entry

  /// Apply to a full-grid field (boundary values participate through B).
  Eigen::VectorXd apply(const Eigen::ArrayXd& full) const;
  /// Gather a full-grid field into the interior enumeration.
  Eigen::VectorXd restrict_interior(const Eigen::ArrayXd& full) const;
  /// Scatter an interior vector into a full-grid array (zero elsewhere).
  Eigen::ArrayXd extend(const Eigen::VectorXd& u_int, double boundary_value = 0.0) const;
};

LinearOperator assemble(const GraphFunction& g, AssembleMode mode = AssembleMode::ExactJacobian);

struct DirichletSolution {
  Eigen::ArrayXd u;  // full grid, 0 on boundary nodes
  Eigen::ArrayXd f;  // inhomogeneity (full grid, used at interior)
  double height = 0;
  double linear_residual = 0;  // ||A u - f||_inf relative
  bool used_iterative_fallback = false;
};

/// Solve L u = f, u = 0 on the boundary of the operator's grid.  Sparse direct
/// factorization by default, BiCGSTAB with diagonal preconditioning as the
/// fallback; relative residual tolerance 1e-12.
DirichletSolution dirichlet_solve(const LinearOperator& op, double height, const Eigen::ArrayXd& f);

/// Reusable factorization for many right-hand sides on one operator.
class DirichletSolver {
 public:
  explicit DirichletSolver(const LinearOperator& op);
  DirichletSolution solve(double height, const Eigen::ArrayXd& f) const;

 private:
  const LinearOperator& op_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool lu_ok_ = false;
};

/// Thm-4.3-style check on a solved instance:
///   sup_{Omega_h' \ Omega_h0} |u| <= sup_{bd Omega_h'} |u| + C h' sup_{Omega_h'} |f|/H
/// with C = 1/eps_sub.  phi is the background graph (for the level sets).
VerificationReport check_upper_lower(const GraphFunction& phi, const GeometryFields& geom,
                                     const DirichletSolution& sol, double h_prime, double h0,
                                     double eps_sub);

/// Cor-4.4 variant: sup_{bd Omega_h'} |u| <= C max{h-h', log h} sup |f|/H.
VerificationReport check_boundary_estimate(const GraphFunction& phi, const GeometryFields& geom,
                                           const DirichletSolution& sol, double h_prime,
                                           double eps_sub);

/// Max |u| on the discrete level curve {phi = h'} (grid-line interpolation).
double sup_on_level_curve(const GraphFunction& phi, const Eigen::ArrayXd& u, double h_prime);

/// Max |u| over {phi < h'} interior nodes (optionally excluding {phi < h0}).
double sup_on_sublevel(const GraphFunction& phi, const Eigen::ArrayXd& u, double h_prime,
                       double h0 = -1.0);

}  // namespace translab
