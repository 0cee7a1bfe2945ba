#include "translab/profiles.hpp"

#include "translab/bowl.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace translab {

namespace {

/// Natural cubic spline on a uniform grid (Thomas solve for the moments).
class UniformSpline {
 public:
  UniformSpline() = default;
  UniformSpline(double x0, double h, Eigen::ArrayXd y) : x0_(x0), h_(h), y_(std::move(y)) {
    const int n = int(y_.size());
    m_ = Eigen::ArrayXd::Zero(n);
    if (n < 3) return;
    Eigen::ArrayXd b(n), d(n);
    for (int i = 1; i + 1 < n; ++i) {
      b[i] = 4.0;
      d[i] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
    }
    for (int i = 2; i + 1 < n; ++i) {
      double m = 1.0 / b[i - 1];
      b[i] -= m;
      d[i] -= m * d[i - 1];
    }
    for (int i = n - 2; i >= 1; --i)
      m_[i] = (d[i] - (i + 1 <= n - 2 ? m_[i + 1] : 0.0)) / b[i];
  }

  int size() const { return int(y_.size()); }
  double x_max() const { return x0_ + h_ * (size() - 1); }

  double eval(double x, int deriv = 0) const {
    const int n = size();
    double s = (x - x0_) / h_;
    int i = std::clamp(int(std::floor(s)), 0, n - 2);
    double t = x - (x0_ + i * h_);
    double A = (h_ - t) / h_, B = t / h_;
    double mi = m_[i], mj = m_[i + 1];
    switch (deriv) {
      case 0:
        return A * y_[i] + B * y_[i + 1] +
               ((A * A * A - A) * mi + (B * B * B - B) * mj) * h_ * h_ / 6.0;
      case 1:
        return (y_[i + 1] - y_[i]) / h_ +
               ((1.0 - 3.0 * A * A) * mi + (3.0 * B * B - 1.0) * mj) * h_ / 6.0;
      default:
        return A * mi + B * mj;
    }
  }

 private:
  double x0_ = 0, h_ = 1;
  Eigen::ArrayXd y_, m_;
};

struct ExtractedData {
  Eigen::ArrayXd taus;
  std::vector<UniformSpline> rows;  // v(., tau_j)
  std::vector<double> ymaxs;
};

// 5-point first derivative in tau at fixed y
double tau_derivative(const ExtractedData& d, double y, double tau) {
  const int n = int(d.taus.size());
  const double ht = d.taus[1] - d.taus[0];
  int c = std::clamp(int(std::round((tau - d.taus[0]) / ht)), 2, n - 3);
  auto val = [&](int j) { return d.rows[j].eval(y); };
  return (val(c - 2) - 8.0 * val(c - 1) + 8.0 * val(c + 1) - val(c + 2)) / (12.0 * ht);
}

double row_interp(const ExtractedData& d, double y, double tau, int deriv) {
  const int n = int(d.taus.size());
  const double ht = d.taus[1] - d.taus[0];
  double s = (tau - d.taus[0]) / ht;
  int j = std::clamp(int(std::floor(s)), 0, n - 2);
  double w = std::clamp(s - j, 0.0, 1.0);
  return (1.0 - w) * d.rows[j].eval(y, deriv) + w * d.rows[j + 1].eval(y, deriv);
}

double invert_profile(const ProfileFamily& p, double vv, double tau) {
  double lo = 0.0, hi = p.y_max(tau);
  if (!(vv <= p.v(lo, tau)) || vv < 0.0)
    throw std::runtime_error("profile inversion: value out of range");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (p.v(mid, tau) > vv)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ProfileFamily::inversion_error(double tau, int samples) const {
  if (!has_tip) return 0.0;
  double worst = 0;
  for (int k = 1; k < samples; ++k) {
    double y = y_max(tau) * k / samples;
    double vv = v(y, tau);
    if (!(vv > 0)) continue;
    worst = std::max(worst, std::abs(Y(vv, tau) - y));
  }
  return worst;
}

ProfileFamily frozen_cylinder(double tau_lo, double tau_hi) {
  ProfileFamily p;
  p.kind = "cylinder";
  p.tau_lo = tau_lo;
  p.tau_hi = tau_hi;
  p.has_tip = false;
  const double s2 = std::sqrt(2.0);
  p.v = [s2](double, double) { return s2; };
  p.v_y = [](double, double) { return 0.0; };
  p.v_yy = [](double, double) { return 0.0; };
  p.v_tau = [](double, double) { return 0.0; };
  p.y_max = [](double) { return 1e9; };
  p.Y = p.Y_v = p.Y_vv = p.Y_tau = [](double, double) { return 0.0; };
  return p;
}

ProfileFamily synthetic_asymptotic(double theta, double ell, double tau_lo, double tau_hi) {
  ProfileFamily p;
  p.kind = "synthetic";
  p.theta = theta;
  p.ell = ell;
  p.tau_lo = tau_lo;
  p.tau_hi = tau_hi;
  auto vfun = [](double y, double tau) {
    double t = std::abs(tau);
    double s = 2.0 + (2.0 - y * y) / t;
    return s > 0 ? std::sqrt(s) : 0.0;
  };
  p.v = vfun;
  p.v_y = [vfun](double y, double tau) {
    double t = std::abs(tau);
    return -y / (t * vfun(y, tau));
  };
  p.v_yy = [vfun](double y, double tau) {
    double t = std::abs(tau), vv = vfun(y, tau);
    return -1.0 / (t * vv) - y * y / (t * t * vv * vv * vv);
  };
  p.v_tau = [vfun](double y, double tau) {
    double t = std::abs(tau);
    return (2.0 - y * y) / (2.0 * t * t * vfun(y, tau));
  };
  p.y_max = [](double tau) { return std::sqrt(2.0 * std::abs(tau) + 2.0); };
  auto Yfun = [](double vv, double tau) {
    double t = std::abs(tau);
    return std::sqrt(std::max(2.0 * t + 2.0 - t * vv * vv, 0.0));
  };
  p.Y = Yfun;
  p.Y_v = [Yfun](double vv, double tau) {
    double t = std::abs(tau);
    return -t * vv / Yfun(vv, tau);
  };
  p.Y_vv = [Yfun](double vv, double tau) {
    double t = std::abs(tau), YY = Yfun(vv, tau);
    return -t / YY - t * t * vv * vv / (YY * YY * YY);
  };
  p.Y_tau = [Yfun](double vv, double tau) { return -(2.0 - vv * vv) / (2.0 * Yfun(vv, tau)); };
  return p;
}

double level_radius(const GraphFunction& g, double x1, double height) {
  const auto& gr = g.grid;
  double rlo = 0.0, rhi = gr.r_max - gr.hr;
  if (g.interp(x1, rlo) > height)
    throw std::runtime_error("level_radius: height below the column minimum");
  // march outward to bracket, guarding monotonicity where it matters
  double phi_prev = g.interp(x1, rlo);
  double rr = rlo;
  bool bracketed = false;
  for (int k = 1; k <= 400; ++k) {
    double rn = rlo + (rhi - rlo) * k / 400.0;
    double pn = g.interp(x1, rn);
    if (pn < phi_prev - 1e-9 && phi_prev < height)
      throw std::runtime_error("level_radius: non-monotone column");
    if (pn >= height) {
      rhi = rn;
      rlo = rr;
      bracketed = true;
      break;
    }
    rr = rn;
    phi_prev = pn;
  }
  if (!bracketed) throw std::runtime_error("level_radius: height out of range");
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (rlo + rhi);
    if (g.interp(x1, mid) < height)
      rlo = mid;
    else
      rhi = mid;
  }
  return 0.5 * (rlo + rhi);
}

ProfileFamily extract_profiles(const GraphFunction& g, double tau_lo, double tau_hi,
                               ExtractOptions opt) {
  if (!(tau_lo < tau_hi && tau_hi < 0)) throw std::invalid_argument("extract_profiles: bad window");
  if (opt.n_tau < 5) throw std::invalid_argument("extract_profiles: need >= 5 tau rows");
  auto data = std::make_shared<ExtractedData>();
  data->taus = Eigen::ArrayXd::LinSpaced(opt.n_tau, tau_lo, tau_hi);
  data->rows.resize(opt.n_tau);
  data->ymaxs.resize(opt.n_tau);
  for (int j = 0; j < opt.n_tau; ++j) {
    double tau = data->taus[j];
    double t = std::exp(-tau);
    // the level-set tip: largest x1 on the axis with phi <= t
    double xlo = 0.0, xhi = g.grid.x1_max - 2 * g.grid.h1;
    if (g.interp(xhi, 0.0) < t) throw std::runtime_error("extract_profiles: height out of range");
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (xlo + xhi);
      if (g.interp(mid, 0.0) < t)
        xlo = mid;
      else
        xhi = mid;
    }
    double xtip = 0.5 * (xlo + xhi);
    double ymax = xtip / std::sqrt(t);
    data->ymaxs[j] = ymax;
    double hy = ymax / (opt.n_y - 1);
    // spline v^2, which stays smooth through the square-root tip closure
    Eigen::ArrayXd vrow(opt.n_y);
    for (int i = 0; i + 1 < opt.n_y; ++i) {
      double y = i * hy;
      double V = level_radius(g, y * std::sqrt(t), t) / std::sqrt(t);
      vrow[i] = V * V;
    }
    vrow[opt.n_y - 1] = 0.0;  // the level set closes at the tip
    data->rows[j] = UniformSpline(0.0, hy, std::move(vrow));
  }

  ProfileFamily p;
  p.kind = "extracted";
  p.theta = opt.theta;
  p.ell = opt.ell;
  p.tau_lo = tau_lo;
  p.tau_hi = tau_hi;
  // rows carry v^2; derive v and its derivatives through the square root
  p.v = [data](double y, double tau) {
    return std::sqrt(std::max(row_interp(*data, std::abs(y), tau, 0), 0.0));
  };
  p.v_y = [data](double y, double tau) {
    double w = std::max(row_interp(*data, std::abs(y), tau, 0), 1e-12);
    double s = row_interp(*data, std::abs(y), tau, 1) / (2.0 * std::sqrt(w));
    return y < 0 ? -s : s;
  };
  p.v_yy = [data](double y, double tau) {
    double w = std::max(row_interp(*data, std::abs(y), tau, 0), 1e-12);
    double w1 = row_interp(*data, std::abs(y), tau, 1);
    double w2 = row_interp(*data, std::abs(y), tau, 2);
    double v = std::sqrt(w);
    double vy = w1 / (2.0 * v);
    return (w2 - 2.0 * vy * vy) / (2.0 * v);
  };
  p.v_tau = [data](double y, double tau) {
    double w = std::max(row_interp(*data, std::abs(y), tau, 0), 1e-12);
    return tau_derivative(*data, std::abs(y), tau) / (2.0 * std::sqrt(w));
  };
  p.y_max = [data](double tau) {
    const int n = int(data->taus.size());
    const double ht = data->taus[1] - data->taus[0];
    double s = (tau - data->taus[0]) / ht;
    int j = std::clamp(int(std::floor(s)), 0, n - 2);
    double w = std::clamp(s - j, 0.0, 1.0);
    return (1.0 - w) * data->ymaxs[j] + w * data->ymaxs[j + 1];
  };
  // tip gauge by monotone inversion and implicit differentiation of the rows
  auto base = std::make_shared<ProfileFamily>(p);
  p.Y = [base](double vv, double tau) { return invert_profile(*base, vv, tau); };
  p.Y_v = [base](double vv, double tau) {
    double y = invert_profile(*base, vv, tau);
    return 1.0 / base->v_y(y, tau);
  };
  p.Y_vv = [base](double vv, double tau) {
    double y = invert_profile(*base, vv, tau);
    double vy = base->v_y(y, tau);
    return -base->v_yy(y, tau) / (vy * vy * vy);
  };
  p.Y_tau = [base](double vv, double tau) {
    double y = invert_profile(*base, vv, tau);
    return -base->v_tau(y, tau) / base->v_y(y, tau);
  };
  return p;
}

ProfileFamily bowl_profile_family(const BowlProfile& bowl, double theta, double ell,
                                  double tau_lo, double tau_hi) {
  ProfileFamily p;
  p.kind = "bowl";
  p.theta = theta;
  p.ell = ell;
  p.tau_lo = tau_lo;
  p.tau_hi = tau_hi;
  auto bptr = std::make_shared<BowlProfile>(bowl);
  // level radius rho(t): u(rho) = t by monotone bisection on the oracle
  auto rho_of = [bptr](double t) {
    double lo = 0.0, hi = bptr->r_max();
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (lo + hi);
      (bptr->u_at(mid) < t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto rho_tilde = [rho_of](double tau) {
    double t = std::exp(-tau);
    return std::exp(0.5 * tau) * rho_of(t);
  };
  auto drho_tilde = [rho_of, bptr](double tau) {
    // d/dtau [e^{tau/2} rho(e^{-tau})] = e^{tau/2} rho/2 - e^{-tau/2}/u'(rho)
    double t = std::exp(-tau);
    double rho = rho_of(t);
    return 0.5 * std::exp(0.5 * tau) * rho - std::exp(-0.5 * tau) / bptr->up_at(rho);
  };
  auto vfun = [rho_tilde](double y, double tau) {
    double R = rho_tilde(tau);
    double s = R * R - y * y;
    return s > 0 ? std::sqrt(s) : 0.0;
  };
  p.v = vfun;
  p.v_y = [vfun](double y, double tau) { return -y / vfun(y, tau); };
  p.v_yy = [vfun, rho_tilde](double y, double tau) {
    double v = vfun(y, tau), R = rho_tilde(tau);
    return -1.0 / v - y * y / (v * v * v) * 0 - (R * R - v * v) / (v * v * v);
  };
  p.v_tau = [vfun, rho_tilde, drho_tilde](double y, double tau) {
    return rho_tilde(tau) * drho_tilde(tau) / vfun(y, tau);
  };
  p.y_max = rho_tilde;
  auto Yfun = [rho_tilde](double vv, double tau) {
    double R = rho_tilde(tau);
    return std::sqrt(std::max(R * R - vv * vv, 0.0));
  };
  p.Y = Yfun;
  p.Y_v = [Yfun](double vv, double tau) { return -vv / Yfun(vv, tau); };
  p.Y_vv = [Yfun, rho_tilde](double vv, double tau) {
    double Y = Yfun(vv, tau), R = rho_tilde(tau);
    return -1.0 / Y - (R * R - Y * Y) / (Y * Y * Y);
  };
  p.Y_tau = [Yfun, rho_tilde, drho_tilde](double vv, double tau) {
    return rho_tilde(tau) * drho_tilde(tau) / Yfun(vv, tau);
  };
  return p;
}

GraphFunction oval_approximant(const ProfileFamily& p, double x1_max, double r_max, double h,
                               double tau_lo, double tau_hi) {
  auto data = graph_from_profile(p, x1_max + 2 * h, r_max + 2 * h, h, tau_lo, tau_hi);
  auto gr = make_rect_grid(x1_max, r_max, h);
  auto res = newton_solve(
      gr, [&](double x, double r) { return data.interp(x, r); },
      [&](double x, double r) { return data.interp(x, r); });
  return res.solution;
}

GraphFunction graph_from_profile(const ProfileFamily& p, double x1_max, double r_max, double h,
                                 double tau_lo, double tau_hi) {
  GraphFunction g;
  ReducedGrid gr;
  gr.h1 = gr.hr = h;
  gr.x1_min = -x1_max;
  gr.x1_max = x1_max;
  gr.r_max = r_max;
  gr.nx = 2 * int(std::round(x1_max / h)) + 1;
  gr.nr = int(std::round(r_max / h)) + 1;
  gr.kind.assign(size_t(gr.nx) * gr.nr, NodeKind::Interior);
  gr.finalize();
  g.grid = gr;
  g.phi = Eigen::ArrayXd::Zero(gr.nx * gr.nr);
  double t_lo = std::exp(-tau_hi);
  double t_hi = std::exp(-tau_lo);
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      double x1 = gr.x1(i), r = gr.r(j);
      auto V_of = [&](double t) {
        double tau = -std::log(t);
        double y = std::abs(x1) / std::sqrt(t);
        if (y >= p.y_max(tau)) return -1.0;  // level set does not reach x1 yet
        return std::sqrt(t) * p.v(y, tau);
      };
      double lo = t_lo, hi = t_hi;
      if (V_of(hi) < r) {
        // node sits outside the largest level set of the window; clamp
        g.phi[gr.node(i, j)] = t_hi;
        continue;
      }
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (V_of(mid) < r)
          lo = mid;
        else
          hi = mid;
      }
      g.phi[gr.node(i, j)] = 0.5 * (lo + hi);
    }
  return g;
}

}  // namespace translab
