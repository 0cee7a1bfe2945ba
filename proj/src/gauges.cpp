#include "translab/gauges.hpp"

#include "translab/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace translab {

double cyl_prefactor(const ProfileFamily& p, double y, double tau) {
  return 0.5 * p.v(y, tau) - 0.5 * y * p.v_y(y, tau) - p.v_tau(y, tau);
}

double tip_prefactor(const ProfileFamily& p, double vv, double tau) {
  return 0.5 * p.Y(vv, tau) - 0.5 * vv * p.Y_v(vv, tau) - p.Y_tau(vv, tau);
}

double to_cylindrical_w(const Field2& u, const ProfileFamily& p, double y, double tau) {
  double pref = cyl_prefactor(p, y, tau);
  if (!(pref > 0)) throw std::runtime_error("to_cylindrical: nonpositive prefactor");
  double s = std::exp(-0.5 * tau);
  return std::exp(tau) * pref * u(s * y, s * p.v(y, tau));
}

double to_cylindrical_g(const Field2& f, const ProfileFamily& p, double y, double tau) {
  double vy = p.v_y(y, tau);
  double q = p.v_tau(y, tau) + 0.5 * y * vy - 0.5 * p.v(y, tau);
  double s = std::exp(-0.5 * tau);
  double pref = std::sqrt(1.0 + vy * vy + std::exp(tau) * q * q);
  return s * pref * f(s * y, s * p.v(y, tau));
}

double to_tip_W(const Field2& u, const ProfileFamily& p, double vv, double tau) {
  double pref = tip_prefactor(p, vv, tau);
  if (!(pref > 0)) throw std::runtime_error("to_tip: nonpositive prefactor");
  double s = std::exp(-0.5 * tau);
  return std::exp(tau) * pref * u(s * p.Y(vv, tau), s * vv);
}

double to_tip_G(const Field2& f, const ProfileFamily& p, double vv, double tau) {
  double Yv = p.Y_v(vv, tau);
  double q = p.Y_tau(vv, tau) + 0.5 * vv * Yv - 0.5 * p.Y(vv, tau);
  double s = std::exp(-0.5 * tau);
  double pref = std::sqrt(1.0 + Yv * Yv + std::exp(tau) * q * q);
  return s * pref * f(s * p.Y(vv, tau), s * vv);
}

double from_cylindrical_at(double w_value, const ProfileFamily& p, double y, double tau,
                           double floor) {
  double denom = std::exp(tau) * cyl_prefactor(p, y, tau);
  if (!(std::abs(denom) > floor * std::exp(tau)))
    throw std::runtime_error("from_cylindrical: prefactor underflow");
  return w_value / denom;
}

double from_tip_at(double W_value, const ProfileFamily& p, double vv, double tau, double floor) {
  double denom = std::exp(tau) * tip_prefactor(p, vv, tau);
  if (!(std::abs(denom) > floor * std::exp(tau)))
    throw std::runtime_error("from_tip: prefactor underflow");
  return W_value / denom;
}

Field2 from_cylindrical(const std::function<double(double, double)>& w_fn, const ProfileFamily& p,
                        const GraphFunction& phi) {
  const GraphFunction* g = &phi;
  const ProfileFamily* pp = &p;
  return [w_fn, g, pp](double x1, double x2) {
    (void)x2;
    double height = g->interp(x1, x2);
    double tau = -std::log(height);
    double y = x1 / std::sqrt(height);
    return from_cylindrical_at(w_fn(y, tau), *pp, y, tau);
  };
}

VariationBundle make_bundle(const Field2& u, const Field2& f, const ProfileFamily& p,
                            const Eigen::ArrayXd& ygrid, const Eigen::ArrayXd& taugrid,
                            const Eigen::ArrayXd& vgrid) {
  VariationBundle b;
  b.ygrid = ygrid;
  b.taugrid = taugrid;
  b.vgrid = vgrid;
  const int ny = int(ygrid.size()), nt = int(taugrid.size()), nv = int(vgrid.size());
  b.w.resize(ny, nt);
  b.g.resize(ny, nt);
  b.W.resize(nv, nt);
  b.G.resize(nv, nt);
  for (int j = 0; j < nt; ++j) {
    double tau = taugrid[j];
    for (int i = 0; i < ny; ++i) {
      b.w(i, j) = to_cylindrical_w(u, p, ygrid[i], tau);
      b.g(i, j) = to_cylindrical_g(f, p, ygrid[i], tau);
    }
    for (int i = 0; i < nv; ++i) {
      b.W(i, j) = to_tip_W(u, p, vgrid[i], tau);
      b.G(i, j) = to_tip_G(f, p, vgrid[i], tau);
    }
  }
  return b;
}

namespace {

// centered first/second derivative along a column of a table, one-sided at the
// edges (second order)
double d1_col(const Eigen::MatrixXd& m, int i, int j, double h) {
  const int n = int(m.rows());
  if (i > 0 && i + 1 < n) return (m(i + 1, j) - m(i - 1, j)) / (2 * h);
  if (i == 0) return (-1.5 * m(0, j) + 2.0 * m(1, j) - 0.5 * m(2, j)) / h;
  return (1.5 * m(n - 1, j) - 2.0 * m(n - 2, j) + 0.5 * m(n - 3, j)) / h;
}

double d2_col(const Eigen::MatrixXd& m, int i, int j, double h) {
  const int n = int(m.rows());
  int c = std::clamp(i, 1, n - 2);
  return (m(c + 1, j) - 2.0 * m(c, j) + m(c - 1, j)) / (h * h);
}

// 5-point tau-derivative along a row
double dtau_row(const Eigen::MatrixXd& m, int i, int j, double ht) {
  const int nt = int(m.cols());
  int c = std::clamp(j, 2, nt - 3);
  return (m(i, c - 2) - 8.0 * m(i, c - 1) + 8.0 * m(i, c + 1) - m(i, c + 2)) / (12.0 * ht);
}

double dtau2_row(const Eigen::MatrixXd& m, int i, int j, double ht) {
  const int nt = int(m.cols());
  int c = std::clamp(j, 1, nt - 2);
  return (m(i, c + 1) - 2.0 * m(i, c) + m(i, c - 1)) / (ht * ht);
}

}  // namespace

VerificationReport cyl_residual(const VariationBundle& b, const ProfileFamily& p,
                                ResidualBudget budget) {
  VerificationReport rep;
  rep.id = "cylindrical_equation_residual";
  rep.region = "cylindrical window";
  const int ny = int(b.ygrid.size()), nt = int(b.taugrid.size());
  if (ny < 5 || nt < 5) throw std::invalid_argument("cyl_residual: grid mismatch");
  const double hy = b.ygrid[1] - b.ygrid[0];
  const double ht = b.taugrid[1] - b.taugrid[0];
  double worst = 0, c2max = 0;
  int wi = 0, wj = 0;
  double sharp = 0;
  for (int j = 2; j + 2 < nt; ++j) {
    double tau = b.taugrid[j];
    for (int i = 1; i + 1 < ny; ++i) {
      double y = b.ygrid[i];
      double w = b.w(i, j);
      double wy = d1_col(b.w, i, j, hy);
      double wyy = d2_col(b.w, i, j, hy);
      double wt = dtau_row(b.w, i, j, ht);
      double vy = p.v_y(y, tau), vyy = p.v_yy(y, tau), vv = p.v(y, tau);
      double Lw = wyy - 0.5 * y * wy + w;
      double Ew = -vy * vy / (1 + vy * vy) * wyy - 2 * vy * vyy / std::pow(1 + vy * vy, 2) * wy +
                  (2 - vv * vv) / (2 * vv * vv) * w;
      double R = -wt + Lw + Ew - b.g(i, j);
      c2max = std::max({c2max, std::abs(w), std::abs(wy), std::abs(wt), std::abs(wyy)});
      if (std::abs(R) > worst) {
        worst = std::abs(R);
        wi = i;
        wj = j;
      }
      if (budget.use_footnote_coefficients) {
        double q = 0.5 * y * vy + p.v_tau(y, tau) - 0.5 * vv;
        double den = 1 + vy * vy + std::exp(tau) * q * q;
        double alpha = (1 + vy * vy) / den;
        double beta = -2 * (vy * (p.v_tau(y, tau) - 0.5 * vv) - 0.5 * y) / den;
        double wtt = dtau2_row(b.w, i, j, ht);
        double wty = dtau_row(b.w, std::min(i + 1, ny - 1), j, ht) -
                     dtau_row(b.w, std::max(i - 1, 0), j, ht);
        wty /= (2 * hy);
        sharp = std::max(sharp, std::abs(alpha * wtt) + std::abs(beta * wty));
      }
    }
  }
  double allowed = budget.C1 * std::exp(b.taugrid[nt - 1]) * c2max +
                   budget.C2 * (hy * hy + ht * ht);
  if (budget.use_footnote_coefficients)
    allowed += std::exp(b.taugrid[nt - 1]) * sharp;
  rep.worst_value = worst;
  rep.budget = allowed;
  rep.margin = allowed - worst;
  rep.pass = rep.margin >= 0;
  rep.worst_node = "(y=" + std::to_string(b.ygrid[wi]) + ", tau=" + std::to_string(b.taugrid[wj]) + ")";
  rep.details["C2_norm_w"] = c2max;
  rep.details["exp_tau"] = std::exp(b.taugrid[nt - 1]);
  return rep;
}

VerificationReport tip_residual(const VariationBundle& b, const ProfileFamily& p,
                                ResidualBudget budget) {
  VerificationReport rep;
  rep.id = "tip_equation_residual";
  rep.region = "tip window";
  const int nv = int(b.vgrid.size()), nt = int(b.taugrid.size());
  if (nv < 5 || nt < 5) throw std::invalid_argument("tip_residual: grid mismatch");
  const double hv = b.vgrid[1] - b.vgrid[0];
  const double ht = b.taugrid[1] - b.taugrid[0];
  double worst = 0, c2max = 0;
  int wi = 0, wj = 0;
  // even reflection of W across v = 0
  auto Wval = [&](int i, int j) { return b.W(std::abs(i), j); };
  for (int j = 2; j + 2 < nt; ++j) {
    double tau = b.taugrid[j];
    for (int i = 1; i + 1 < nv; ++i) {
      double vv = b.vgrid[i];
      if (!(vv > 0)) continue;
      double W = b.W(i, j);
      double Wv = (Wval(i + 1, j) - Wval(i - 1, j)) / (2 * hv);
      double Wvv = (Wval(i + 1, j) - 2 * W + Wval(i - 1, j)) / (hv * hv);
      double Wt = dtau_row(b.W, i, j, ht);
      double Yv = p.Y_v(vv, tau), Yvv = p.Y_vv(vv, tau);
      double R = -Wt + Wvv / (1 + Yv * Yv) +
                 (1.0 / vv - 0.5 * vv - 2 * Yvv * Yv / std::pow(1 + Yv * Yv, 2)) * Wv + 0.5 * W -
                 b.G(i, j);
      c2max = std::max({c2max, std::abs(W), std::abs(Wv), std::abs(Wt), std::abs(Wvv)});
      if (std::abs(R) > worst) {
        worst = std::abs(R);
        wi = i;
        wj = j;
      }
    }
  }
  double allowed = budget.C1 * std::exp(b.taugrid[nt - 1]) * c2max +
                   budget.C2 * (hv * hv + ht * ht);
  rep.worst_value = worst;
  rep.budget = allowed;
  rep.margin = allowed - worst;
  rep.pass = rep.margin >= 0;
  rep.worst_node = "(v=" + std::to_string(b.vgrid[wi]) + ", tau=" + std::to_string(b.taugrid[wj]) + ")";
  rep.details["C2_norm_W"] = c2max;
  return rep;
}

std::array<double, 3> obstruction(const Field2& u, const ProfileFamily& p, double tau0) {
  if (!(tau0 >= p.tau_lo && tau0 <= p.tau_hi))
    throw std::invalid_argument("obstruction: tau0 outside the profile window");
  auto q = GaussianQuadrature::make(std::min(20.0, p.y_max(tau0) * 0.999), 0.005);
  const double theta = p.theta;
  Eigen::ArrayXd wc(q.y.size());
  for (int i = 0; i < q.y.size(); ++i) {
    double y = q.y[i];
    double vv = p.v(y, tau0);
    // phi_C: 0 for v <= 5 theta/8, 1 for v >= 7 theta/8 (quintic ramp)
    double s = (vv - 5.0 * theta / 8.0) / (theta / 4.0);
    double cut = s <= 0 ? 0.0 : (s >= 1 ? 1.0 : ((6 * s - 15) * s + 10) * s * s * s);
    wc[i] = (cut > 0 && vv > 0) ? cut * to_cylindrical_w(u, p, y, tau0) : 0.0;
  }
  double c0 = q.inner(wc, hermite_values(0, q.y)) / 1.0;
  double c1 = q.inner(wc, hermite_values(1, q.y)) / 2.0;
  double c2 = q.inner(wc, hermite_values(2, q.y)) / 8.0;
  return {c0, c1, c2};
}

}  // namespace translab
