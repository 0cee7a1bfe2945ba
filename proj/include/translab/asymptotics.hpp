#pragma once

// Renormalized-profile asymptotics in the parabolic region: the truncated
// profile evolution, the H_2 reaction terms, the a_2 model ODE and its
// diagnostic, the slaved-a_0 Galerkin flow, and the second-order profile.

#include "translab/hermite.hpp"

#include <functional>
#include <vector>

namespace translab {

inline constexpr double kSqrt2 = 1.4142135623730951;

/// Leading-order spectral coefficients a_0, a_2, a_4 at renormalized time tau.
struct SpectralCoeffs {
  double tau = 0;
  double a0 = 0, a2 = 0, a4 = 0;
  double remainder_norm = 0;  // Gaussian L2 norm of the degree >= 6 tail
};

inline SpectralCoeffs prop_a1_values(double tau) {
  const double t = std::abs(tau);
  SpectralCoeffs s;
  s.tau = tau;
  s.a0 = 1.0 / (2.0 * kSqrt2 * t * t);
  s.a2 = -1.0 / (2.0 * kSqrt2 * t);
  s.a4 = -1.0 / (16.0 * kSqrt2 * t * t);
  return s;
}

/// Exact Galerkin value <H_2, (a0 + a2 H_2 + a4 H_4)^2>, via the Hermite oracle.
/// Expands to 16 a0 a2 + 64 a2^2 + 768 a2 a4 + 6144 a4^2.
template <class Scalar>
Scalar reaction_h2_quadratic(const Scalar& a0, const Scalar& a2, const Scalar& a4) {
  typename HermiteSeries<Scalar>::Coeffs c = HermiteSeries<Scalar>::Coeffs::Zero(5);
  c[0] = a0;
  c[2] = a2;
  c[4] = a4;
  HermiteSeries<Scalar> u(std::move(c));
  return gauss_inner(hermite_poly<Scalar>(2), multiply(u, u));
}

/// <H_2, u^3/4 - u_y^2 u_yy> for u = a2 H_2; equals (960/4 - 64) a2^3 = 176 a2^3.
template <class Scalar>
Scalar reaction_h2_cubic(const Scalar& a2) {
  typename HermiteSeries<Scalar>::Coeffs c = HermiteSeries<Scalar>::Coeffs::Zero(3);
  c[2] = a2;
  HermiteSeries<Scalar> u(std::move(c));
  auto h2 = hermite_poly<Scalar>(2);
  Scalar cubic = gauss_inner(h2, multiply(u, multiply(u, u))) / Scalar(4);
  auto uy = differentiate(u);
  auto uyy = differentiate(uy);
  Scalar grad = gauss_inner(h2, multiply(multiply(uy, uy), uyy));
  return cubic - grad;
}

// ---------------------------------------------------------------------------
// Profile right-hand side  L u - u^2/(2(sqrt2+u)) - u_y^2 u_yy/(1+u_y^2)
// ---------------------------------------------------------------------------

/// Grid evaluation; throws on a pole crossing (sqrt2 + u <= 0 where the cutoff
/// is active).
inline Eigen::ArrayXd profile_rhs_grid(const Eigen::ArrayXd& u, const Eigen::ArrayXd& uy,
                                       const Eigen::ArrayXd& uyy, const Eigen::ArrayXd& Lu,
                                       const Eigen::ArrayXd& cut) {
  Eigen::ArrayXd out(u.size());
  for (int i = 0; i < u.size(); ++i) {
    double uc = u[i] * cut[i], uyc = uy[i] * cut[i], uyyc = uyy[i] * cut[i];
    double den = kSqrt2 + uc;
    if (cut[i] > 0.0 && den <= 0.0)
      throw std::runtime_error("profile_rhs: pole crossing (sqrt2 + u <= 0)");
    out[i] = Lu[i] - uc * uc / (2.0 * den) - uyc * uyc * uyyc / (1.0 + uyc * uyc);
  }
  return out;
}

/// Series-in, series-out evaluation: the nonlinearity is sampled on the
/// quadrature grid and projected back onto even Hermite modes of degree <= 2K.
inline HermiteSeries<double> profile_rhs(const HermiteSeries<double>& u,
                                         const GaussianQuadrature& q, int K,
                                         std::optional<double> tau = std::nullopt,
                                         const Cutoff& cutoff = Cutoff::none()) {
  auto uy = differentiate(u);
  auto uyy = differentiate(uy);
  Eigen::ArrayXd ug = eval(u, q.y), uyg = eval(uy, q.y), uyyg = eval(uyy, q.y);
  Eigen::ArrayXd cut = cutoff.values(q.y, tau.has_value() ? tau : std::optional<double>(0.0));
  if (cutoff.mode == Cutoff::Mode::None) cut.setOnes();
  // linear part exactly in the basis via monomial differentiation
  auto Lu = apply_OU(u);
  Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(q.y.size());
  Eigen::ArrayXd nonlin = profile_rhs_grid(ug, uyg, uyyg, zero, cut);
  typename HermiteSeries<double>::Coeffs c =
      HermiteSeries<double>::Coeffs::Zero(2 * K + 1);
  for (int k = 0; k <= 2 * K; k += 2)
    c[k] = discrete_projection(q, nonlin, k);
  HermiteSeries<double> proj(std::move(c));
  return Lu.truncated(2 * K) + proj;
}

// ---------------------------------------------------------------------------
// a_2 model ODE:  a2' = -2 sqrt2 a2^2 - sqrt2 |tau|^{-3}
// ---------------------------------------------------------------------------

struct A2Sample {
  double tau, a2, b_hat;
};

inline double a2_ode_rhs(double tau, double a2) {
  double t = std::abs(tau);
  return -2.0 * kSqrt2 * a2 * a2 - kSqrt2 / (t * t * t);
}

/// Seed matching the second-order asymptotics with constant A.
inline double a2_seed(double tau, double A) {
  double t = std::abs(tau);
  return -1.0 / (2.0 * kSqrt2 * t) + kSqrt2 * std::log(t) / (tau * tau) + A / (tau * tau);
}

/// Diagnostic b_hat = tau^2 (a2 + 1/(2 sqrt2 |tau|) - sqrt2 log|tau|/tau^2).
inline double a2_diagnostic(double tau, double a2) {
  double t = std::abs(tau);
  return tau * tau * (a2 + 1.0 / (2.0 * kSqrt2 * t) - kSqrt2 * std::log(t) / (tau * tau));
}

/// RK4 trajectory of the a_2 ODE with a per-step doubling error estimate.
/// Throws on step rejection or if a2 leaves [-1, 0].
inline std::vector<A2Sample> integrate_a2_ode(double A, double tau_start, double tau_end,
                                              double step, double self_err_tol = 1e-10) {
  if (!(tau_start < tau_end && tau_end < 0.0))
    throw std::invalid_argument("integrate_a2_ode: need tau_start < tau_end < 0");
  if (std::abs(tau_end) < 10.0)
    throw std::invalid_argument("integrate_a2_ode: need |tau_end| >= 10");
  auto rk4 = [](double t, double a, double h) {
    double k1 = a2_ode_rhs(t, a);
    double k2 = a2_ode_rhs(t + 0.5 * h, a + 0.5 * h * k1);
    double k3 = a2_ode_rhs(t + 0.5 * h, a + 0.5 * h * k2);
    double k4 = a2_ode_rhs(t + h, a + h * k3);
    return a + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  std::vector<A2Sample> out;
  double a2 = a2_seed(tau_start, A);
  double tau = tau_start;
  out.push_back({tau, a2, a2_diagnostic(tau, a2)});
  while (tau < tau_end - 1e-12) {
    // step size proportional to |tau| keeps the work bounded over huge spans
    double h = std::min({step * std::abs(tau), tau_end - tau});
    double full = rk4(tau, a2, h);
    double half = rk4(tau + 0.5 * h, rk4(tau, a2, 0.5 * h), 0.5 * h);
    double err = std::abs(full - half) / 15.0;
    if (err > self_err_tol * std::max(1.0, std::abs(half)))
      throw std::runtime_error("integrate_a2_ode: step too large (RK4 self-error above tolerance)");
    a2 = half;
    tau += h;
    if (a2 < -1.0 || a2 > 0.0)
      throw std::runtime_error("integrate_a2_ode: blow-up (a2 left [-1,0])");
    out.push_back({tau, a2, a2_diagnostic(tau, a2)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Slaved-a_0 Galerkin flow
// ---------------------------------------------------------------------------

struct GalerkinState {
  double tau = 0;
  HermiteSeries<double> coeffs;  // even series of degree <= 2K
  SpectralCoeffs spectral() const {
    SpectralCoeffs s;
    s.tau = tau;
    s.a0 = coeffs.coeff(0);
    s.a2 = coeffs.coeff(2);
    s.a4 = coeffs.coeff(4);
    double rem = 0.0;
    for (int k = 6; k <= coeffs.degree(); ++k) {
      double nk = to_double(hermite_norm_sq<Rational>(k));
      rem += coeffs.coeff(k) * coeffs.coeff(k) * nk;
    }
    s.remainder_norm = std::sqrt(rem);
    return s;
  }
};

struct GalerkinOptions {
  int K = 6;                    // truncation order, modes H_0..H_{2K}
  int n_steps = 300;
  Cutoff cutoff = Cutoff::fixed_radius(4.25);
  double slaving_tol = 1e-10;
  int max_slaving_iters = 50;
  double quad_L = 30.0;
  double quad_h = 0.01;
};

/// Integrates the truncated profile evolution forward in tau with the unstable
/// a_0 mode slaved through its Duhamel representation
///   a_0(tau) = int_tau^{tau1} e^{tau-s} s(s) ds + e^{tau-tau1} a_0(tau1),
/// iterated to a fixed point.  The stable/neutral modes march by RK4.
/// Seed: Prop-A.1-type values plus an optional A correction on a_2.
class GalerkinFlow {
 public:
  GalerkinFlow(double tau0, double tau1, GalerkinOptions opt = {})
      : opt_(opt), q_(GaussianQuadrature::make(opt.quad_L, opt.quad_h)) {
    if (!(opt.K >= 3)) throw std::invalid_argument("galerkin_flow: K >= 3 required");
    if (!(tau0 <= -20.0)) throw std::invalid_argument("galerkin_flow: tau0 <= -20 required");
    if (!(tau0 < tau1 && tau1 < 0.0)) throw std::invalid_argument("galerkin_flow: bad window");
    taus_.resize(opt.n_steps + 1);
    const double dt = (tau1 - tau0) / opt.n_steps;
    for (int i = 0; i <= opt.n_steps; ++i) taus_[i] = tau0 + i * dt;
    // precompute basis tables on the quadrature grid
    const int n_modes = opt.K + 1;
    Hv_.resize(n_modes);
    H1_.resize(n_modes);
    H2_.resize(n_modes);
    for (int j = 0; j < n_modes; ++j) {
      int k = 2 * j;
      Hv_[j] = hermite_values(k, q_.y);
      auto d1 = differentiate(hermite_poly<double>(k));
      auto d2 = differentiate(d1);
      H1_[j] = eval(d1, q_.y);
      H2_[j] = eval(d2, q_.y);
      norms_[j] = to_double(hermite_norm_sq<Rational>(k));
    }
  }

  std::vector<GalerkinState> run(double A_seed = 0.0) {
    const int K = opt_.K, N = opt_.n_steps;
    const int nm = K + 1;
    using Vec = Eigen::VectorXd;

    auto seed = prop_a1_values(taus_[0]);
    Vec init = Vec::Zero(nm);
    init[0] = seed.a0;
    init[1] = seed.a2 + A_seed / (taus_[0] * taus_[0]);
    if (nm > 2) init[2] = seed.a4;

    Eigen::VectorXd a0_tab(N + 1);
    for (int i = 0; i <= N; ++i) a0_tab[i] = prop_a1_values(taus_[i]).a0;

    std::vector<Vec> traj(N + 1, Vec::Zero(nm));
    double diff = 0.0;
    int it = 0;
    for (; it < opt_.max_slaving_iters; ++it) {
      integrate_tail(init, a0_tab, traj);
      // recompute a0 along the trajectory via the Duhamel quadrature
      Eigen::VectorXd s(N + 1);
      for (int i = 0; i <= N; ++i) s[i] = -nonlinear_mode0(traj[i], a0_tab[i], taus_[i]);
      Eigen::VectorXd a0_new(N + 1);
      a0_new[N] = prop_a1_values(taus_[N]).a0;
      for (int i = N - 1; i >= 0; --i) {
        double dt = taus_[i + 1] - taus_[i];
        double decay = std::exp(-dt);
        a0_new[i] = decay * a0_new[i + 1] + 0.5 * dt * (s[i] + decay * s[i + 1]);
      }
      diff = (a0_new - a0_tab).cwiseAbs().maxCoeff();
      a0_tab = a0_new;
      if (diff < opt_.slaving_tol) break;
    }
    if (diff >= opt_.slaving_tol)
      throw std::runtime_error("galerkin_flow: slaving non-convergence");

    std::vector<GalerkinState> out(N + 1);
    for (int i = 0; i <= N; ++i) {
      typename HermiteSeries<double>::Coeffs c =
          HermiteSeries<double>::Coeffs::Zero(2 * K + 1);
      c[0] = a0_tab[i];
      for (int j = 1; j < nm; ++j) c[2 * j] = traj[i][j];
      out[i].tau = taus_[i];
      out[i].coeffs = HermiteSeries<double>(std::move(c));
      if (out[i].coeffs.parity() == Parity::Mixed)
        throw std::runtime_error("galerkin_flow: parity violation");
    }
    slaving_iters_ = it + 1;
    return out;
  }

  int slaving_iters() const { return slaving_iters_; }
  const GaussianQuadrature& quadrature() const { return q_; }

  /// H_{2k}-projections of the nonlinear term for mode vector a (a[0] overridden).
  Eigen::VectorXd nonlinear_projections(const Eigen::VectorXd& a, double a0, double tau) const {
    const int nm = int(a.size());
    Eigen::ArrayXd u = Eigen::ArrayXd::Zero(q_.y.size());
    Eigen::ArrayXd uy = u, uyy = u;
    for (int j = 0; j < nm; ++j) {
      double cj = (j == 0) ? a0 : a[j];
      u += cj * Hv_[j];
      uy += cj * H1_[j];
      uyy += cj * H2_[j];
    }
    Eigen::ArrayXd cut = opt_.cutoff.values(q_.y, tau);
    Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(q_.y.size());
    Eigen::ArrayXd nl = profile_rhs_grid(u, uy, uyy, zero, cut);
    Eigen::VectorXd out(nm);
    for (int j = 0; j < nm; ++j) out[j] = q_.inner(nl, Hv_[j]) / norms_.at(j);
    return out;
  }

 private:
  double nonlinear_mode0(const Eigen::VectorXd& a, double a0, double tau) const {
    return nonlinear_projections(a, a0, tau)[0];
  }

  void integrate_tail(const Eigen::VectorXd& init, const Eigen::VectorXd& a0_tab,
                      std::vector<Eigen::VectorXd>& traj) const {
    const int N = opt_.n_steps;
    const int nm = opt_.K + 1;
    auto a0_at = [&](double t) {
      // linear interpolation on the uniform tau grid
      double s = (t - taus_.front()) / (taus_[1] - taus_[0]);
      int i = std::clamp(int(std::floor(s)), 0, N - 1);
      double w = s - i;
      return (1.0 - w) * a0_tab[i] + w * a0_tab[i + 1];
    };
    auto f = [&](double t, const Eigen::VectorXd& a) {
      Eigen::VectorXd np = nonlinear_projections(a, a0_at(t), t);
      Eigen::VectorXd out = Eigen::VectorXd::Zero(nm);
      for (int j = 1; j < nm; ++j) out[j] = (1.0 - j) * a[j] + np[j];
      return out;
    };
    Eigen::VectorXd cur = init;
    traj[0] = cur;
    for (int i = 0; i < N; ++i) {
      double t = taus_[i], h = taus_[i + 1] - taus_[i];
      Eigen::VectorXd k1 = f(t, cur);
      Eigen::VectorXd k2 = f(t + 0.5 * h, cur + 0.5 * h * k1);
      Eigen::VectorXd k3 = f(t + 0.5 * h, cur + 0.5 * h * k2);
      Eigen::VectorXd k4 = f(t + h, cur + h * k3);
      cur += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      traj[i + 1] = cur;
    }
  }

  GalerkinOptions opt_;
  GaussianQuadrature q_;
  std::vector<double> taus_;
  std::vector<Eigen::ArrayXd> Hv_, H1_, H2_;
  std::map<int, double> norms_;
  int slaving_iters_ = 0;
};

/// Second-order profile of the expansion theorem:
///   (-1/(2 sqrt2 |tau|) + sqrt2 log|tau|/tau^2 + A/tau^2)(y^2-2)
///   - (y^4 - 12 y^2 + 4)/(16 sqrt2 tau^2),
/// returned in the Hermite basis (y^4 - 12 y^2 + 4 = H_4 - 8).
inline HermiteSeries<double> second_order_profile(double tau, double A) {
  if (!(tau <= -10.0)) throw std::invalid_argument("second_order_profile: tau <= -10 required");
  const double t = std::abs(tau);
  typename HermiteSeries<double>::Coeffs c = HermiteSeries<double>::Coeffs::Zero(5);
  double a2 = -1.0 / (2.0 * kSqrt2 * t) + kSqrt2 * std::log(t) / (tau * tau) + A / (tau * tau);
  double s = 1.0 / (16.0 * kSqrt2 * tau * tau);
  c[2] = a2;
  c[4] = -s;   // coefficient of H_4
  c[0] = 8.0 * s;  // -(H_4 - 8)*s contributes +8s to H_0
  return HermiteSeries<double>(std::move(c));
}

}  // namespace translab
