#pragma once

// Masked uniform grid on the reduced axisymmetric half-plane (x1, r), r >= 0.
// Curved domains are handled by node classification plus per-arm cut fractions
// located by linear interpolation along grid lines.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace translab {

enum class NodeKind : std::uint8_t { Exterior = 0, Interior = 1, Boundary = 2 };

// arm order: +x1, -x1, +r, -r
inline constexpr int kArmDI[4] = {1, -1, 0, 0};
inline constexpr int kArmDJ[4] = {0, 0, 1, -1};

struct ReducedGrid {
  double x1_min = 0, x1_max = 0, r_max = 0;
  double h1 = 0, hr = 0;
  int nx = 0, nr = 0;

  std::vector<NodeKind> kind;      // nx*nr
  std::vector<int> interior_id;    // enumeration of interior nodes, -1 otherwise
  int n_interior = 0;
  // Cut fraction per interior node and arm: 1 means the full arm ends at the
  // neighbor node; theta < 1 means the Dirichlet location sits at distance
  // theta*h along the arm.
  std::vector<std::array<float, 4>> frac;

  int node(int i, int j) const { return j * nx + i; }
  double x1(int i) const { return x1_min + i * h1; }
  double r(int j) const { return j * hr; }
  bool in_range(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < nr; }
  NodeKind kind_at(int i, int j) const {
    return in_range(i, j) ? kind[node(i, j)] : NodeKind::Exterior;
  }
  bool interior(int i, int j) const { return kind_at(i, j) == NodeKind::Interior; }

  void finalize() {
    interior_id.assign(size_t(nx) * nr, -1);
    n_interior = 0;
    for (int j = 0; j < nr; ++j)
      for (int i = 0; i < nx; ++i)
        if (kind[node(i, j)] == NodeKind::Interior) interior_id[node(i, j)] = n_interior++;
    frac.assign(size_t(nx) * nr, {1.f, 1.f, 1.f, 1.f});
  }
};

/// Half-disk of radius R (the domain under a solid disk in R^3): interior
/// nodes strictly inside, boundary nodes are outside nodes touching the
/// interior (Dirichlet data is evaluated at the node itself).
inline ReducedGrid make_disk_grid(double R, double h) {
  ReducedGrid g;
  g.h1 = g.hr = h;
  g.x1_min = -R;
  g.x1_max = R;
  g.r_max = R;
  g.nx = 2 * int(std::round(R / h)) + 1;
  g.nr = int(std::round(R / h)) + 1;
  g.kind.assign(size_t(g.nx) * g.nr, NodeKind::Exterior);
  for (int j = 0; j < g.nr; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double x = g.x1(i), r = g.r(j);
      if (x * x + r * r < R * R - 1e-12) g.kind[g.node(i, j)] = NodeKind::Interior;
    }
  for (int j = 0; j < g.nr; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (g.kind[g.node(i, j)] != NodeKind::Exterior) continue;
      for (int a = 0; a < 4; ++a) {
        if (g.kind_at(i + kArmDI[a], j + kArmDJ[a]) == NodeKind::Interior) {
          g.kind[g.node(i, j)] = NodeKind::Boundary;
          break;
        }
      }
    }
  g.finalize();
  return g;
}

/// Rectangle [-x1_max, x1_max] x [0, r_max]: interior strictly inside, the
/// outermost ring is boundary.
inline ReducedGrid make_rect_grid(double x1_max, double r_max, double h) {
  ReducedGrid g;
  g.h1 = g.hr = h;
  g.x1_min = -x1_max;
  g.x1_max = x1_max;
  g.r_max = r_max;
  g.nx = 2 * int(std::round(x1_max / h)) + 1;
  g.nr = int(std::round(r_max / h)) + 1;
  g.kind.assign(size_t(g.nx) * g.nr, NodeKind::Interior);
  for (int j = 0; j < g.nr; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (i == 0 || i == g.nx - 1 || j == g.nr - 1) g.kind[g.node(i, j)] = NodeKind::Boundary;
  g.finalize();
  return g;
}

/// Level-set domain {phi < height} carved out of a parent grid carrying the
/// field phi (all-nodes array).  Cut fractions are located by linear
/// interpolation of phi - height along grid lines.
inline ReducedGrid make_levelset_grid(const ReducedGrid& parent, const Eigen::ArrayXd& phi,
                                      double height) {
  ReducedGrid g = parent;
  g.kind.assign(size_t(g.nx) * g.nr, NodeKind::Exterior);
  for (int j = 0; j < g.nr; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int nd = g.node(i, j);
      if (parent.kind[nd] == NodeKind::Exterior) continue;
      if (phi[nd] < height) g.kind[nd] = NodeKind::Interior;
    }
  // nodes outside the level set adjacent to the interior become boundary
  for (int j = 0; j < g.nr; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (g.kind[g.node(i, j)] != NodeKind::Exterior) continue;
      for (int a = 0; a < 4; ++a)
        if (g.kind_at(i + kArmDI[a], j + kArmDJ[a]) == NodeKind::Interior) {
          g.kind[g.node(i, j)] = NodeKind::Boundary;
          break;
        }
    }
  g.finalize();
  // cut fractions from the linear crossing of phi = height
  for (int j = 0; j < g.nr; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int nd = g.node(i, j);
      if (g.kind[nd] != NodeKind::Interior) continue;
      for (int a = 0; a < 4; ++a) {
        int ii = i + kArmDI[a], jj = j + kArmDJ[a];
        if (!g.in_range(ii, jj)) continue;
        int nb = g.node(ii, jj);
        if (g.kind[nb] != NodeKind::Boundary) continue;
        double p0 = phi[nd], p1 = phi[nb];
        double th = 1.0;
        if (p1 > height && p1 > p0) th = (height - p0) / (p1 - p0);
        g.frac[nd][a] = float(std::clamp(th, 0.3, 1.0));
      }
    }
  if (g.n_interior == 0) throw std::runtime_error("make_levelset_grid: empty domain");
  return g;
}

}  // namespace translab
