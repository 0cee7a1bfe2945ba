#pragma once

// Shared stencil machinery for the reduced-coordinate discretizations: axis
// reflection, one-sided fallbacks near the mask edge, and the nonlinear face
// flux with its exact derivative.

#include "translab/grid.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace translab::detail {

inline bool has_value(const ReducedGrid& g, int i, int j) {
  if (j < 0) j = -j;  // even reflection across the axis
  if (!g.in_range(i, j)) return false;
  return g.kind[g.node(i, j)] != NodeKind::Exterior;
}

inline double val(const ReducedGrid& g, const Eigen::ArrayXd& phi, int i, int j) {
  if (j < 0) j = -j;
  return phi[g.node(i, j)];
}

/// Linear functional on phi: a short list of (i, j, weight) entries.  Negative
/// j folds onto positive j (even reflection), merging weights.
struct Stencil {
  int n = 0;
  int ii[6], jj[6];
  double w[6];
  void add(int i, int j, double wt) {
    if (j < 0) j = -j;
    for (int k = 0; k < n; ++k)
      if (ii[k] == i && jj[k] == j) {
        w[k] += wt;
        return;
      }
    ii[n] = i;
    jj[n] = j;
    w[n] = wt;
    ++n;
  }
  double eval(const ReducedGrid& g, const Eigen::ArrayXd& phi) const {
    double s = 0;
    for (int k = 0; k < n; ++k) s += w[k] * phi[g.node(ii[k], jj[k])];
    return s;
  }
};

// One-sided branches use the 3-point second-order stencil when the next node
// exists, else fall back to 2-point.
inline Stencil dr_stencil(const ReducedGrid& g, int i, int j) {
  Stencil s;
  bool up = has_value(g, i, j + 1), dn = has_value(g, i, j - 1);
  if (up && dn) {
    s.add(i, j + 1, 0.5 / g.hr);
    s.add(i, j - 1, -0.5 / g.hr);
  } else if (up) {
    if (has_value(g, i, j + 2)) {
      s.add(i, j, -1.5 / g.hr);
      s.add(i, j + 1, 2.0 / g.hr);
      s.add(i, j + 2, -0.5 / g.hr);
    } else {
      s.add(i, j + 1, 1.0 / g.hr);
      s.add(i, j, -1.0 / g.hr);
    }
  } else if (dn) {
    if (has_value(g, i, j - 2)) {
      s.add(i, j, 1.5 / g.hr);
      s.add(i, j - 1, -2.0 / g.hr);
      s.add(i, j - 2, 0.5 / g.hr);
    } else {
      s.add(i, j, 1.0 / g.hr);
      s.add(i, j - 1, -1.0 / g.hr);
    }
  }
  return s;
}

inline Stencil d1_stencil(const ReducedGrid& g, int i, int j) {
  Stencil s;
  bool e = has_value(g, i + 1, j), w = has_value(g, i - 1, j);
  if (e && w) {
    s.add(i + 1, j, 0.5 / g.h1);
    s.add(i - 1, j, -0.5 / g.h1);
  } else if (e) {
    if (has_value(g, i + 2, j)) {
      s.add(i, j, -1.5 / g.h1);
      s.add(i + 1, j, 2.0 / g.h1);
      s.add(i + 2, j, -0.5 / g.h1);
    } else {
      s.add(i + 1, j, 1.0 / g.h1);
      s.add(i, j, -1.0 / g.h1);
    }
  } else if (w) {
    if (has_value(g, i - 2, j)) {
      s.add(i, j, 1.5 / g.h1);
      s.add(i - 1, j, -2.0 / g.h1);
      s.add(i - 2, j, 0.5 / g.h1);
    } else {
      s.add(i, j, 1.0 / g.h1);
      s.add(i - 1, j, -1.0 / g.h1);
    }
  }
  return s;
}

inline Stencil face_transverse(const ReducedGrid& g, int i0, int j0, int i1, int j1,
                               bool r_derivative) {
  Stencil a = r_derivative ? dr_stencil(g, i0, j0) : d1_stencil(g, i0, j0);
  Stencil b = r_derivative ? dr_stencil(g, i1, j1) : d1_stencil(g, i1, j1);
  Stencil out;
  int sides = (a.n > 0) + (b.n > 0);
  if (sides == 0) return out;
  double f = 1.0 / sides;
  for (int k = 0; k < a.n; ++k) out.add(a.ii[k], a.jj[k], f * a.w[k]);
  for (int k = 0; k < b.n; ++k) out.add(b.ii[k], b.jj[k], f * b.w[k]);
  return out;
}

struct FaceEval {
  double flux = 0;    // d1 / W_f
  double dF_dd1 = 0;  // (1+dt^2)/W^3
  double dF_ddt = 0;  // -d1*dt/W^3
  double d1 = 0, dt = 0;
  Stencil d1_st, dt_st;
  bool live = false;
};

/// Nonlinear face flux along arm a from (i,j).  A cut arm (theta < 1) ends at
/// a Dirichlet point at distance theta*h carrying cut_value.
inline FaceEval face_flux(const ReducedGrid& g, const Eigen::ArrayXd& phi, int i, int j, int a,
                          double theta, double cut_value) {
  FaceEval fe;
  const int di = kArmDI[a], dj = kArmDJ[a];
  const bool is_r = (dj != 0);
  const double h = is_r ? g.hr : g.h1;
  if (theta >= 1.0) {
    if (!has_value(g, i + di, j + dj)) return fe;
    fe.d1_st.add(i + di, j + dj, 1.0 / h);
    fe.d1_st.add(i, j, -1.0 / h);
    fe.d1 = fe.d1_st.eval(g, phi);
    fe.dt_st = face_transverse(g, i, j, i + di, j + dj, !is_r);
  } else {
    fe.d1_st.add(i, j, -1.0 / (theta * h));
    fe.d1 = fe.d1_st.eval(g, phi) + cut_value / (theta * h);
    fe.dt_st = is_r ? d1_stencil(g, i, j) : dr_stencil(g, i, j);
  }
  fe.dt = fe.dt_st.eval(g, phi);
  double W2 = 1.0 + fe.d1 * fe.d1 + fe.dt * fe.dt;
  double W = std::sqrt(W2);
  fe.flux = fe.d1 / W;
  fe.dF_dd1 = (1.0 + fe.dt * fe.dt) / (W2 * W);
  fe.dF_ddt = -fe.d1 * fe.dt / (W2 * W);
  fe.live = true;
  return fe;
}

/// Derivative stencil for a homogeneous-Dirichlet unknown at an interior node
/// of a level-set grid: arms toward Boundary neighbors terminate at the curve
/// (distance frac*h, value 0), giving the unequal-arm three-point formula with
/// the curve point dropped.
inline Stencil u_deriv_stencil(const ReducedGrid& g, int i, int j, bool rdir) {
  Stencil s;
  const double h = rdir ? g.hr : g.h1;
  const int di = rdir ? 0 : 1, dj = rdir ? 1 : 0;
  int nd = g.node(i, j);
  auto kind_of = [&](int ii, int jj) {
    if (jj < 0) jj = -jj;
    return g.in_range(ii, jj) ? g.kind[g.node(ii, jj)] : NodeKind::Exterior;
  };
  NodeKind kp = kind_of(i + di, j + dj), km = kind_of(i - di, j - dj);
  const int arm_p = rdir ? 2 : 0, arm_m = rdir ? 3 : 1;
  double tp = g.frac[nd][arm_p], tm = g.frac[nd][arm_m];
  bool p_int = (kp == NodeKind::Interior), m_int = (km == NodeKind::Interior);
  bool p_cut = (kp == NodeKind::Boundary), m_cut = (km == NodeKind::Boundary);
  if (p_int && m_int) {
    s.add(i + di, j + dj, 0.5 / h);
    s.add(i - di, j - dj, -0.5 / h);
  } else if (p_cut && m_int) {
    // points: W at -h (unknown), Q at 0, curve at +tp*h (value 0)
    s.add(i - di, j - dj, -tp / (1.0 + tp) / h);
    s.add(i, j, (tp - 1.0) / tp / h);
  } else if (m_cut && p_int) {
    s.add(i + di, j + dj, tm / (1.0 + tm) / h);
    s.add(i, j, (1.0 - tm) / tm / h);
  } else if (p_cut && m_cut) {
    s.add(i, j, (tp - tm) / (tp * tm * h));
  } else if (p_int) {
    s.add(i + di, j + dj, 1.0 / h);
    s.add(i, j, -1.0 / h);
  } else if (m_int) {
    s.add(i, j, 1.0 / h);
    s.add(i - di, j - dj, -1.0 / h);
  }
  return s;
}

}  // namespace translab::detail

