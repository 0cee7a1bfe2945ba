#include "translab/barriers.hpp"

#include <cmath>

namespace translab {

namespace {

double smoothstep(double s) {
  if (s <= 0) return 0.0;
  if (s >= 1) return 1.0;
  return ((6 * s - 15) * s + 10) * s * s * s;
}

// numerical derivatives of profile-backed scalar functions
template <class F>
double d1(F&& f, double x, double scale) {
  double d = 1e-4 * std::max(std::abs(scale), 1e-12);
  return (f(x - 2 * d) - 8 * f(x - d) + 8 * f(x + d) - f(x + 2 * d)) / (12 * d);
}

template <class F>
double d2(F&& f, double x, double scale) {
  double d = 2e-4 * std::max(std::abs(scale), 1e-12);
  return (f(x + d) - 2.0 * f(x) + f(x - d)) / (d * d);
}

}  // namespace

double BarrierSpec::chi(double v) const { return smoothstep((v - 0.5 * theta) / (0.5 * theta)); }

double BarrierSpec::zeta(double v) const {
  return smoothstep((v - 0.25 * theta) / (0.25 * theta));
}

double BarrierSpec::kappa(double tau) const {
  // smooth max of the two plateaus; convex, |kappa'| <= kappa/|tau|
  double a = 2.0, b = std::abs(tau) / std::sqrt(log_h);
  const double eps = 0.1;
  return 0.5 * (a + b + std::sqrt((a - b) * (a - b) + eps * eps));
}

double BarrierSpec::kappa_prime(double tau) const {
  double a = 2.0, b = std::abs(tau) / std::sqrt(log_h);
  const double eps = 0.1;
  double db = -1.0 / std::sqrt(log_h);  // d b / d tau, tau < 0
  return 0.5 * db * (1.0 + (b - a) / std::sqrt((a - b) * (a - b) + eps * eps));
}

double measure_gamma(const ProfileFamily& p, double tau, double theta) {
  double g = 0;
  for (int k = 1; k <= 200; ++k) {
    double vv = 2.0 * theta * k / 200.0;
    double Yv = p.Y_v(vv, tau), Yvv = p.Y_vv(vv, tau);
    double ratio = std::abs(Yv * Yv * Yvv / std::pow(1 + Yv * Yv, 2)) * vv / std::abs(Yv);
    g = std::max(g, ratio);
  }
  return std::max(g, 0.5);
}

BarrierSpec make_barrier_spec(const ProfileFamily& p, double tau, double theta, double ell,
                              double log_h, double mu, std::optional<double> lambda_override) {
  BarrierSpec s;
  s.theta = theta;
  s.ell = ell;
  s.log_h = log_h;
  s.mu = mu;
  s.gamma_est = measure_gamma(p, tau, theta);
  if (!(s.gamma_est < 1.0))
    throw std::runtime_error("make_barrier_spec: curvature ratio gamma >= 1");
  s.Gamma = 1000.0 / (1.0 - s.gamma_est);
  // Lambda: b1 <= Lambda b2 on the transition strip theta/2 <= v <= 2 theta
  double need = 0;
  for (int k = 0; k <= 100; ++k) {
    double vv = 0.5 * theta + (1.5 * theta) * k / 100.0;
    double y = p.Y(vv, tau);
    double b2 = barrier_b2(p, s, y, tau);
    double b1v = barrier_b1(vv);
    if (b1v <= 0) continue;
    if (b2 <= 0) throw std::runtime_error("make_barrier_spec: spec inconsistent (b2 <= 0 where b1 > 0)");
    need = std::max(need, b1v / b2);
  }
  s.Lambda = lambda_override.value_or(1.1 * need);
  if (s.Lambda < need)
    throw std::runtime_error("make_barrier_spec: Lambda too small for the transition inequality");
  return s;
}

double barrier_b1(double v) { return 1.0 / v - 1.0 / std::sqrt(2.0); }

// branch: -1 resolves the min/indicator structure pointwise; 0 forces the
// 1/v branch, 1 the capped branch with the collar correction, 2 the capped
// branch without it.  Branch forcing keeps the verified functions smooth so
// the "minimum of supersolutions" argument applies branchwise.
double barrier_b2_branch(const ProfileFamily& p, const BarrierSpec& s, double y, double tau,
                         int branch, bool indicator_after_inversion) {
  double t = std::abs(tau);
  double vv = p.v(y, tau);
  double vy = p.v_y(y, tau);
  double Yv = p.Y_v(vv, tau);
  double st = std::sqrt(t);
  bool collar;
  if (!indicator_after_inversion) {
    collar = vv <= 2.0 * s.ell / st;
  } else {
    collar = y >= p.Y(std::min(2.0 * s.ell / st, p.v(0, tau) * 0.999), tau);
  }
  double cap_collar = (st / s.ell) * (1.0 + Yv / (10.0 * s.ell));
  double cap_plain = st / s.ell;
  double m;
  switch (branch) {
    case 0: m = 1.0 / vv; break;
    case 1: m = cap_collar; break;
    case 2: m = cap_plain; break;
    default: m = std::min(1.0 / vv, collar ? cap_collar : cap_plain);
  }
  return st * std::abs(vy) - s.Gamma * vv + 100.0 * std::abs(vy) * m;
}

int barrier_b2_active_branch(const ProfileFamily& p, const BarrierSpec& s, double vv, double tau,
                             bool indicator_after_inversion) {
  double t = std::abs(tau);
  double st = std::sqrt(t);
  bool collar;
  if (!indicator_after_inversion) {
    collar = vv <= 2.0 * s.ell / st;
  } else {
    collar = vv <= 2.0 * s.ell / st;  // same locus expressed in v
  }
  double Yv = p.Y_v(vv, tau);
  double cap = collar ? (st / s.ell) * (1.0 + Yv / (10.0 * s.ell)) : st / s.ell;
  if (1.0 / vv <= cap) return 0;
  return collar ? 1 : 2;
}

double barrier_b2(const ProfileFamily& p, const BarrierSpec& s, double y, double tau,
                  bool indicator_after_inversion) {
  return barrier_b2_branch(p, s, y, tau, -1, indicator_after_inversion);
}

double barrier_b_branch(const ProfileFamily& p, const BarrierSpec& s, double y, double tau,
                        int branch, bool indicator_after_inversion) {
  double vv = p.v(y, tau);
  double c = s.chi(vv);
  double out = 0;
  if (c > 0) out += c * barrier_b1(vv);
  if (c < 1)
    out += s.Lambda * (1 - c) * barrier_b2_branch(p, s, y, tau, branch, indicator_after_inversion);
  return out;
}

double barrier_b(const ProfileFamily& p, const BarrierSpec& s, double y, double tau,
                 bool indicator_after_inversion) {
  return barrier_b_branch(p, s, y, tau, -1, indicator_after_inversion);
}

double barrier_B(const ProfileFamily& p, const BarrierSpec& s, double vv, double tau,
                 bool indicator_after_inversion) {
  double y = p.Y(vv, tau);
  return -p.Y_v(vv, tau) * barrier_b(p, s, y, tau, indicator_after_inversion);
}

double barrier_B_branch(const ProfileFamily& p, const BarrierSpec& s, double vv, double tau,
                        int branch, bool indicator_after_inversion) {
  double y = p.Y(vv, tau);
  return -p.Y_v(vv, tau) * barrier_b_branch(p, s, y, tau, branch, indicator_after_inversion);
}

SubsolutionResult subsolution_field(const GraphFunction& g, const GeometryFields& geom) {
  SubsolutionResult out;
  const auto& gr = g.grid;
  const int N = gr.nx * gr.nr;
  // psi = phi + log H wherever H is available; L psi via the exact operator
  Eigen::ArrayXd psi = Eigen::ArrayXd::Zero(N);
  std::vector<bool> have(N, false);
  for (int nd = 0; nd < N; ++nd)
    if (geom.valid[nd] && geom.H[nd] > 0) {
      psi[nd] = g.phi[nd] + std::log(geom.H[nd]);
      have[nd] = true;
    }
  auto op = assemble(g, AssembleMode::ExactJacobian);
  Eigen::VectorXd Lpsi = op.apply(psi);

  out.field = Eigen::ArrayXd::Constant(N, std::numeric_limits<double>::quiet_NaN());
  double eps = 1e300, mech = 1e300, Cmeas = 0, low = 1e300;
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      int id = gr.interior_id[nd];
      if (id < 0 || !have[nd]) continue;
      // require the full 9-stencil to carry psi (otherwise L psi is polluted)
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1; ++di) {
          int jj = std::abs(j + dj);
          if (!gr.in_range(i + di, jj) || (!have[gr.node(i + di, jj)])) {
            ok = false;
            break;
          }
        }
      if (!ok) continue;
      double val = Lpsi[id] / geom.H[nd];
      out.field[nd] = val;
      eps = std::min(eps, val);
      double H = geom.H[nd];
      if (H <= 0.125) low = std::min(low, val);
      if (H < 1.0 - 1e-9) {
        double q = geom.Ae4[nd] / (H * (1 - H * H));
        double mv = H * H - geom.A2[nd] + (1 - H * H) * (1 - q) * (1 - q);
        if (H <= 0.125) mech = std::min(mech, mv);
        Cmeas = std::max(Cmeas, std::abs(geom.Ae4[nd]) / (H * H));
      }
    }
  out.eps_sub = eps;
  out.field_min_lowH = (low == 1e300) ? 0.0 : low;
  out.mechanism_min = (mech == 1e300) ? 0.0 : mech;
  out.C_measured = Cmeas;
  out.report.id = "global_subsolution";
  out.report.region = "interior nodes with full geometry stencils";
  out.report.worst_value = eps;
  out.report.budget = 0.0;
  out.report.margin = eps;
  out.report.pass = eps > 0;
  out.report.details["eps_sub"] = eps;
  out.report.details["mechanism_min_on_H<=1/8"] = out.mechanism_min;
  out.report.details["C_in_Ae4_bound"] = Cmeas;
  return out;
}

double lemma41_residual(const GraphFunction& g, const GeometryFields& geom) {
  const auto& gr = g.grid;
  auto op = assemble(g, AssembleMode::ExactJacobian);
  Eigen::VectorXd Lphi = op.apply(g.phi);
  double worst = 0;
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      int id = gr.interior_id[nd];
      if (id < 0 || !geom.valid[nd]) continue;
      // skip the rim cell ring (one-sided geometry there)
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (!geom.valid[gr.node(std::clamp(i + di, 0, gr.nx - 1), std::abs(j + dj))]) {
            ok = false;
            break;
          }
      if (!ok) continue;
      worst = std::max(worst, std::abs(Lphi[id] - (geom.H[nd] - 2.0 * geom.Ae4[nd])));
    }
  return worst;
}

namespace {

// truncated cylindrical operator applied to a closed-form-in-(y,tau) function
template <class F>
double Lcyl_trunc(const ProfileFamily& p, F&& f, double y, double tau) {
  double vy = p.v_y(y, tau), vyy = p.v_yy(y, tau), vv = p.v(y, tau);
  auto fy = [&](double yy) { return f(yy, tau); };
  auto ft = [&](double tt) { return f(y, tt); };
  double b_y = d1(fy, y, y);
  double b_yy = d2(fy, y, y);
  double b_t = d1(ft, tau, tau);
  return b_yy / (1 + vy * vy) - (0.5 * y + 2 * vy * vyy / std::pow(1 + vy * vy, 2)) * b_y +
         (0.5 + 1.0 / (vv * vv)) * f(y, tau) - b_t;
}

template <class F>
double Ltip_trunc(const ProfileFamily& p, F&& f, double vv, double tau) {
  double Yv = p.Y_v(vv, tau), Yvv = p.Y_vv(vv, tau);
  auto fv = [&](double v2) { return f(v2, tau); };
  auto ft = [&](double t2) { return f(vv, t2); };
  double B_v = d1(fv, vv, vv);
  double B_vv = d2(fv, vv, vv);
  double B_t = d1(ft, tau, tau);
  return B_vv / (1 + Yv * Yv) +
         (1.0 / vv - 0.5 * vv - 2 * Yvv * Yv / std::pow(1 + Yv * Yv, 2)) * B_v + 0.5 * f(vv, tau) -
         B_t;
}

}  // namespace

VerificationReport verify_cyl_supersolution(const ProfileFamily& p, const BarrierSpec& s,
                                            double tau, bool weighted,
                                            bool indicator_after_inversion) {
  VerificationReport rep;
  rep.id = weighted ? "weighted_cyl_supersolution" : "cyl_supersolution";
  rep.region = "y in [ell, Y(theta,tau)]";
  double ylo = s.ell, yhi = p.Y(s.theta, tau);
  double worst = 1e300;
  double at = ylo;
  const int n = 160;
  for (int k = 0; k <= n; ++k) {
    double y = ylo + (yhi - ylo) * k / n;
    auto bf = [&](double yy, double tt) {
      double kap = weighted ? s.kappa(tt) * std::pow(std::abs(tt), -s.mu) : 1.0;
      return kap * barrier_b(p, s, yy, tt, indicator_after_inversion);
    };
    double L = Lcyl_trunc(p, bf, y, tau);
    double bval = barrier_b(p, s, y, tau, indicator_after_inversion);
    double kap = weighted ? s.kappa(tau) * std::pow(std::abs(tau), -s.mu) : 1.0;
    double target = weighted ? -0.125 * kap * bval * bval : -0.25 * bval * bval;
    double margin = target - L;  // need L <= target
    if (margin < worst) {
      worst = margin;
      at = y;
    }
  }
  rep.margin = worst;
  rep.pass = worst >= 0;
  rep.worst_node = "y=" + std::to_string(at);
  rep.budget = 0;
  rep.details["y_lo"] = ylo;
  rep.details["y_hi"] = yhi;
  return rep;
}

VerificationReport verify_tip_supersolution(const ProfileFamily& p, const BarrierSpec& s,
                                            double tau, bool weighted) {
  VerificationReport rep;
  rep.id = weighted ? "weighted_tip_supersolution" : "tip_supersolution";
  rep.region = "v <= 2 theta";
  double t = std::abs(tau);
  double worst = 1e300;
  double at = 0;
  const int n = 160;
  // branch-switch loci: the min crossover and the collar indicator
  double v_collar = 2.0 * s.ell / std::sqrt(t);
  for (int k = 1; k <= n; ++k) {
    double vv = 2.0 * s.theta * k / n;
    int branch = barrier_b2_active_branch(p, s, vv, tau, false);
    // skip the direct FD neighborhood of the branch switches; each branch is
    // verified on the closure of its active set via adjacent samples
    double fd = 2e-4 * vv;
    double v_min_cross = 1.0;  // where 1/v meets the cap
    {
      double cap = (branch == 1) ? (std::sqrt(t) / s.ell) * (1.0 + p.Y_v(vv, tau) / (10.0 * s.ell))
                                 : std::sqrt(t) / s.ell;
      if (cap > 0) v_min_cross = 1.0 / cap;
    }
    if (std::abs(vv - v_collar) < 5 * fd || std::abs(vv - v_min_cross) < 5 * fd) continue;
    auto Bf = [&](double v2, double t2) {
      double kap = weighted ? s.kappa(t2) * std::pow(std::abs(t2), -s.mu) : 1.0;
      return kap * barrier_B_branch(p, s, v2, t2, branch, false);
    };
    double L = Ltip_trunc(p, Bf, vv, tau);
    double kap = weighted ? 0.5 * s.kappa(tau) * std::pow(t, -s.mu) : 1.0;
    double target = -kap * (std::sqrt(t) + std::pow(vv, -3.0) *
                                               std::min(1.0, vv * vv * t / (s.ell * s.ell)));
    double margin = target - L;
    if (margin < worst) {
      worst = margin;
      at = vv;
    }
  }
  rep.margin = worst;
  rep.pass = worst >= 0;
  rep.worst_node = "v=" + std::to_string(at);
  return rep;
}

VerificationReport verify_supersolution_graphical(const GraphFunction& g, const ProfileFamily& p,
                                                  const BarrierSpec& s, double h, double h0,
                                                  double discretization_margin) {
  VerificationReport rep;
  rep.id = "graphical_supersolution_LuA";
  rep.region = "D = (Omega_h \\ Omega_h0) cap {x1 >= ell sqrt(phi)}";
  const auto& gr = g.grid;
  const int N = gr.nx * gr.nr;
  Eigen::ArrayXd uA = Eigen::ArrayXd::Zero(N);
  std::vector<bool> in_formula(N, false);

  auto uA_at = [&](double x1, double x2) -> std::optional<double> {
    double height = g.interp(x1, x2);
    if (!(height > 1e-6)) return std::nullopt;
    double tau = -std::log(height);
    if (tau < p.tau_lo || tau > p.tau_hi) return std::nullopt;
    double y = x1 / std::sqrt(height);
    if (y <= 0 || y >= p.y_max(tau) * 0.999) return std::nullopt;
    if (!(p.v(y, tau) > 1e-3)) return std::nullopt;  // spline tail near the tip
    double kap = s.kappa(tau) * std::pow(std::abs(tau), -s.mu);
    double bval = barrier_b(p, s, y, tau);
    double pref = cyl_prefactor(p, y, tau);
    if (!(pref > 1e-12)) return std::nullopt;
    return kap * bval / (std::exp(tau) * pref);
  };

  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      if (gr.kind[nd] == NodeKind::Exterior) continue;
      auto val = uA_at(gr.x1(i), gr.r(j));
      if (val) {
        uA[nd] = *val;
        in_formula[nd] = true;
      }
    }

  auto op = assemble(g, AssembleMode::ExactJacobian);
  Eigen::VectorXd LuA = op.apply(uA);
  double worst = -1e300;
  int cnt = 0;
  std::string worst_at;
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      int id = gr.interior_id[nd];
      if (id < 0) continue;
      double x1 = gr.x1(i), phi = g.phi[nd];
      if (!(phi > h0 && phi < h)) continue;
      if (!(x1 >= s.ell * std::sqrt(phi))) continue;
      // the full stencil must carry formula values
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1; ++di) {
          int jj = std::abs(j + dj);
          if (!gr.in_range(i + di, jj) || !in_formula[gr.node(i + di, jj)]) {
            ok = false;
            break;
          }
        }
      if (!ok) continue;
      ++cnt;
      if (LuA[id] > worst) {
        worst = LuA[id];
        worst_at = "(x1=" + std::to_string(x1) + ", r=" + std::to_string(gr.r(j)) + ")";
      }
    }
  rep.worst_value = worst;
  rep.budget = discretization_margin;
  rep.margin = discretization_margin - worst;  // need L uA <= margin
  rep.pass = (cnt > 0) && (worst <= discretization_margin);
  rep.worst_node = worst_at;
  rep.details["nodes_checked"] = cnt;
  return rep;
}

VerificationReport comparison_mechanics(const GraphFunction& g, const Eigen::ArrayXd& uA,
                                        const Eigen::ArrayXd& u, double h, double h0,
                                        const BarrierSpec& s) {
  // empirical discrete comparison: where L(uA - u) <= 0 holds in D and
  // uA - u >= 0 on the nodes bordering D, check uA - u >= 0 inside
  VerificationReport rep;
  rep.id = "discrete_comparison_mechanics";
  const auto& gr = g.grid;
  auto op = assemble(g, AssembleMode::ExactJacobian);
  Eigen::ArrayXd diff = uA - u;
  Eigen::VectorXd Ld = op.apply(diff);
  bool hypothesis = true, conclusion = true;
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      int nd = gr.node(i, j);
      int id = gr.interior_id[nd];
      double phi = g.phi[nd];
      bool inD = (id >= 0) && phi > h0 && phi < h && gr.x1(i) >= s.ell * std::sqrt(std::max(phi, 0.0));
      if (!inD) continue;
      if (Ld[id] > 1e-10) hypothesis = false;
      if (diff[nd] < -1e-10) conclusion = false;
    }
  rep.pass = !hypothesis || conclusion;
  rep.details["hypothesis_held"] = hypothesis ? 1.0 : 0.0;
  rep.details["conclusion_held"] = conclusion ? 1.0 : 0.0;
  return rep;
}

InnerOuterResult inner_outer_check(const GraphFunction& phi, const DirichletSolution& sol,
                                   const ProfileFamily& p, const BarrierSpec& s, double A_const) {
  InnerOuterResult out;
  out.A_const = A_const;
  out.report.id = "inner_outer_estimate";
  const double logh = std::log(sol.height);
  double tau0 = p.tau_hi;
  double tau_lo_concl = -std::sqrt(logh);
  if (tau_lo_concl >= tau0) {
    tau_lo_concl = tau0 - 1.0;
    out.window_floored = true;
  }
  tau_lo_concl = std::max(tau_lo_concl, p.tau_lo);

  auto u_fn = [&](double x1, double x2) {
    const auto& gr = phi.grid;
    if (std::abs(x1) > gr.x1_max || x2 > gr.r_max) return 0.0;
    double si = (x1 - gr.x1_min) / gr.h1, sj = std::abs(x2) / gr.hr;
    int i = std::clamp(int(std::floor(si)), 0, gr.nx - 2);
    int j = std::clamp(int(std::floor(sj)), 0, gr.nr - 2);
    double a = si - i, b = sj - j;
    return (1 - a) * (1 - b) * sol.u[gr.node(i, j)] + a * (1 - b) * sol.u[gr.node(i + 1, j)] +
           (1 - a) * b * sol.u[gr.node(i, j + 1)] + a * b * sol.u[gr.node(i + 1, j + 1)];
  };
  auto f_fn = [&](double x1, double x2) {
    const auto& gr = phi.grid;
    double si = (x1 - gr.x1_min) / gr.h1, sj = std::abs(x2) / gr.hr;
    int i = std::clamp(int(std::round(si)), 0, gr.nx - 1);
    int j = std::clamp(int(std::round(sj)), 0, gr.nr - 1);
    double v = sol.f[gr.node(i, j)];
    return std::isfinite(v) ? v : 0.0;
  };

  const double theta = s.theta, ell = s.ell;
  // hypothesis terms over tau in [-log h, tau0]
  double hyp = 0;
  out.hypotheses_ok = true;
  const int ntau = 12;
  double worst_g = 0, worst_G = 0, worst_w = 0;
  for (int k = 0; k <= ntau; ++k) {
    double tau = std::max(-logh, p.tau_lo) + (tau0 - std::max(-logh, p.tau_lo)) * k / ntau;
    double t = std::abs(tau);
    // w(ell, tau) weights
    double wl = to_cylindrical_w(u_fn, p, ell, tau);
    double wterm = std::pow(t, 1.0 + s.mu) * std::abs(wl);
    worst_w = std::max(worst_w, wterm);
    // g growth on [ell, Y(theta,tau)]
    double yhi = p.Y(theta, tau);
    for (int m = 0; m <= 24; ++m) {
      double y = ell + (yhi - ell) * m / 24.0;
      double gv = to_cylindrical_g(f_fn, p, y, tau);
      double vv = p.v(y, tau);
      worst_g = std::max(worst_g, std::pow(t, s.mu) * std::abs(gv) /
                                      std::pow(std::sqrt(2.0) - vv, 2.0));
    }
    for (int m = 1; m <= 16; ++m) {
      double vv = theta * m / 16.0;
      double Gv = to_tip_G(f_fn, p, vv, tau);
      double wgt = std::sqrt(t) + std::pow(vv, -3.0) * std::min(1.0, vv * vv * t / (ell * ell));
      worst_G = std::max(worst_G, std::pow(t, s.mu) * std::abs(Gv) / wgt);
    }
  }
  hyp = std::max({worst_w, worst_g, worst_G});
  if (hyp > A_const) {
    out.hypotheses_ok = false;
    out.failed_term = worst_w >= std::max(worst_g, worst_G)   ? "w(ell,tau) bound"
                      : (worst_g >= worst_G ? "g growth bound" : "G growth bound");
  }

  // conclusion: sup |tau|^mu (sqrt2 - v)^{-1} |w| + sup |tau|^{mu-1/2} |W| <= C A
  double lhs = 0;
  for (int k = 0; k <= ntau; ++k) {
    double tau = tau_lo_concl + (tau0 - tau_lo_concl) * k / ntau;
    double t = std::abs(tau);
    double yhi = p.Y(theta, tau);
    for (int m = 0; m <= 24; ++m) {
      double y = ell + (yhi - ell) * m / 24.0;
      double wv = to_cylindrical_w(u_fn, p, y, tau);
      double vv = p.v(y, tau);
      lhs = std::max(lhs, std::pow(t, s.mu) * std::abs(wv) / (std::sqrt(2.0) - vv));
    }
    for (int m = 1; m <= 16; ++m) {
      double vv = theta * m / 16.0;
      double Wv = to_tip_W(u_fn, p, vv, tau);
      lhs = std::max(lhs, std::pow(t, s.mu - 0.5) * std::abs(Wv));
    }
  }
  out.C_admissible = (A_const > 0) ? lhs / A_const : 0.0;
  out.report.pass = out.hypotheses_ok;
  out.report.margin = A_const - hyp;
  out.report.details["hypothesis_sup"] = hyp;
  out.report.details["conclusion_sup"] = lhs;
  out.report.details["C_admissible"] = out.C_admissible;
  out.report.details["window_floored"] = out.window_floored ? 1.0 : 0.0;
  return out;
}

}  // namespace translab
