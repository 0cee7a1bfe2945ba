#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "translab/norms.hpp"

#include <random>

using namespace translab;

TEST_CASE("gaussian norms of H2 and the duality sandwich") {
  auto q = GaussianQuadrature::make(20.0, 0.005);
  Eigen::ArrayXd h2 = hermite_values(2, q.y);
  auto n = gaussian_norms(q, h2);
  CHECK(n.h * n.h == doctest::Approx(8.0).epsilon(1e-8));
  // ||H2||_D^2 = 8 + ||2y||^2 = 8 + 4*2 = 16; moment oracle: int 4 y^2 dmu = 8
  Eigen::ArrayXd two_y = 2.0 * q.y;
  CHECK(q.inner(two_y, two_y) == doctest::Approx(8.0).epsilon(1e-8));
  CHECK(n.d * n.d == doctest::Approx(16.0).epsilon(1e-6));
  CHECK(n.dstar <= n.h * (1 + 1e-9));

  // sandwich on 50 random polynomials
  std::mt19937_64 rng(42);
  auto uni = [&](double a, double b) {
    return a + (b - a) * double(rng() >> 11) * (1.0 / 9007199254740992.0);
  };
  for (int t = 0; t < 50; ++t) {
    HermiteSeries<double>::Coeffs c = HermiteSeries<double>::Coeffs::Zero(9);
    for (int k = 0; k < 9; ++k) c[k] = uni(-1, 1) / (1 + k);
    auto nn = gaussian_norms(q, eval(HermiteSeries<double>(std::move(c)), q.y));
    CHECK(nn.dstar <= nn.h * (1 + 1e-9));
    CHECK(nn.h <= nn.d * (1 + 1e-9));
  }
  // quadrature gate
  auto coarse = GaussianQuadrature::make(3.0, 0.5);
  CHECK_THROWS(gaussian_norms(coarse, Eigen::ArrayXd::Ones(coarse.y.size())));
}

TEST_CASE("D* via Riesz agrees with the dual-sup on polynomials") {
  auto q = GaussianQuadrature::make(20.0, 0.005);
  Eigen::ArrayXd p = hermite_values(2, q.y) + 0.5 * hermite_values(1, q.y);
  auto n = gaussian_norms(q, p);
  // dual sup over a finite polynomial family is a lower bound for ||p||_D*
  double best = 0;
  for (int k = 0; k <= 8; ++k) {
    Eigen::ArrayXd test = hermite_values(k, q.y);
    auto nt = gaussian_norms(q, test);
    best = std::max(best, std::abs(q.inner(p, test)) / nt.d);
  }
  CHECK(best <= n.dstar * (1 + 1e-6));
  CHECK(best >= 0.8 * n.dstar);  // the low-degree family nearly saturates
}

TEST_CASE("weighted Sobolev constants finite and refinement-stable") {
  auto q1 = GaussianQuadrature::make(20.0, 0.01);
  auto q2 = GaussianQuadrature::make(20.0, 0.005);
  auto r1 = weighted_sobolev_check(q1);
  auto r2 = weighted_sobolev_check(q2);
  CHECK(r1.pass);
  CHECK(r2.pass);
  CHECK(r1.details.at("C_weighted_h_vs_D") ==
        doctest::Approx(r2.details.at("C_weighted_h_vs_D")).epsilon(0.1));
  CHECK(r1.details.at("C_weighted_Dstar_vs_h") ==
        doctest::Approx(r2.details.at("C_weighted_Dstar_vs_h")).epsilon(0.1));
}

TEST_CASE("tip weight: boundary value, coarse bound, density floor, tip norms") {
  const double tau = -1e6, theta = 0.01;
  auto p = synthetic_asymptotic(theta, 25.0);
  auto tw = make_tip_weight(p, tau, theta);
  // mu_bar(theta) = -Y(theta)^2/4 exactly (empty integral)
  CHECK(tw.at(theta) == doctest::Approx(-0.25 * std::pow(p.Y(theta, tau), 2)).epsilon(1e-10));
  // coarse bound sup e^mu <= e^{tau/4} (log domain)
  CHECK(tw.mu_bar.maxCoeff() <= tau / 4.0);
  // density floor (1/v) e^mu >= e^{51 tau/100}
  for (int i = 0; i < tw.vgrid.size(); ++i)
    CHECK(tw.mu_bar[i] - std::log(tw.vgrid[i]) >= 51.0 * tau / 100.0);

  // F = 0 -> 0; F = 1: ||F||_2^2 <= 2 theta sup e^mu
  Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(tw.vgrid.size());
  CHECK(tip_norm_l2(tw, zero) == 0.0);
  Eigen::ArrayXd one = Eigen::ArrayXd::Ones(tw.vgrid.size());
  double n1 = tip_norm_l2(tw, one);
  CHECK(n1 * n1 <= 2.0 * theta * std::exp(tw.mu_bar.maxCoeff()) * (1 + 1e-12));
}

TEST_CASE("holder norm: constants, homogeneity, monotonicity") {
  // constant field with H ~ 1/10: [f]^{0,(0)} = sup H |f| ~ 0.1
  Field3 f1 = [](double, double, double) { return 1.0; };
  Field3 H = [](double, double, double) { return 0.1; };
  HolderCube cube;
  cube.x = 0;
  cube.s = 0;
  cube.t = -10.0;
  cube.r = 1.0;
  cube.k = 0;
  cube.alpha = 0.5;
  cube.l = 0;
  double n0 = holder_norm(f1, H, cube);
  CHECK(n0 == doctest::Approx(0.1).epsilon(1e-10));

  // linear field: the k=1 term dominates per the H-power bookkeeping
  Field3 fx = [](double x, double, double) { return x; };
  HolderCube c1 = cube;
  c1.k = 1;
  double n1 = holder_norm(fx, H, c1);
  // [f]^{0,(0)} = sup H |x| = 0.1; [f]^{1,(0)} = sup H^0 |f_x| = 1
  CHECK(n1 == doctest::Approx(1.1).epsilon(1e-6));

  // homogeneity: 2f doubles the norm
  Field3 f2 = [](double x, double s, double t) { return 2.0 * (x + 0.3 * s - 0.1 * t); };
  Field3 f2h = [](double x, double s, double t) { return (x + 0.3 * s - 0.1 * t); };
  CHECK(holder_norm(f2, H, c1) == doctest::Approx(2.0 * holder_norm(f2h, H, c1)).epsilon(1e-12));

  // monotonicity: enlarging the cube never decreases the norm (shared FD
  // step; the nested x,s lattice makes the sup monotone up to the t-lattice
  // offsets, absorbed by the 2% slack)
  Field3 wavy = [](double x, double s, double t) { return std::sin(x) * std::cos(s + 0.2 * t); };
  HolderCube small = cube, big = cube;
  small.k = big.k = 2;
  big.r = 2.0;
  double fd = 0.05;
  double n_small = holder_norm(wavy, H, small, 1, 7, 10000, fd);
  double n_big = holder_norm(wavy, H, big, 1, 13, 10000, fd);
  CHECK(n_big >= n_small * (1 - 2e-2));
}

TEST_CASE("rho weights: plug-ins and the squared inequality on the domain of use") {
  const double theta = 0.1;
  // cylindrical branch at V = sqrt(2 |t|): rho_star = 10/(log|t|)^2
  double t = -std::exp(6.0);
  double at = std::abs(t);
  auto r1 = rho_weights(std::sqrt(2.0 * at) / std::sqrt(2.0) * std::sqrt(2.0), t, theta);
  // V = sqrt(2)*sqrt(|t|) makes the bracket 10/log|t|
  auto rs = rho_weights(std::sqrt(2.0) * std::sqrt(at), t, theta);
  CHECK(rs.star == doctest::Approx(10.0 / (36.0)).epsilon(1e-12));  // 10/(log|t|)^2
  (void)r1;
  // tip branch at V = sqrt(|t|)/log|t| needs 1/log|t| < theta, i.e. |t| > e^10
  double t2 = -std::exp(12.0);
  double at2 = std::abs(t2);
  auto rt = rho_weights(std::sqrt(at2) / 12.0, t2, theta);
  CHECK(rt.star == doctest::Approx(12.0).epsilon(1e-12));

  // rho_bullet >= rho_star^2 on 1e4 points of the domain of use,
  // V >= ell sqrt(|t|/log|t|) with ell = 1
  std::mt19937_64 rng(3);
  auto uni = [&](double a, double b) {
    return a + (b - a) * double(rng() >> 11) * (1.0 / 9007199254740992.0);
  };
  for (int k = 0; k < 10000; ++k) {
    double att = uni(20.0, 5000.0);
    double V = uni(std::sqrt(att / std::log(att)), 1.55 * std::sqrt(att));
    auto rp = rho_weights(V, -att, theta);
    CHECK(rp.bullet >= rp.star * rp.star);
    CHECK(rp.star > 0);
    CHECK(rp.bullet > 0);
  }
}

TEST_CASE("x/y norms: zero field, cap-only target, finiteness") {
  auto p = synthetic_asymptotic(0.1, 1.0, -1e9, -2.5);
  auto g = graph_from_profile(p, 33.0, 16.0, 0.1, -4.6, -2.9);
  XYOptions opt;
  opt.h0 = 25.0;
  opt.k = 4;
  Field2 zero = [](double, double) { return 0.0; };
  auto nz = x_norm(zero, g, p, 90.0, opt);
  CHECK(nz.total() == 0.0);

  // f supported in the cap only: the Y-norm reduces to the cap norm
  Field2 cap_only = [&](double x1, double x2) {
    double s = (x1 * x1 + x2 * x2) / (2.0 * opt.h0);
    return s < 1.0 ? std::pow(1.0 - s, 4.0) : 0.0;
  };
  auto ny = y_norm(cap_only, g, p, 90.0, opt);
  CHECK(ny.cap > 0.0);
  CHECK(ny.cylindrical == doctest::Approx(0.0).epsilon(1e-20));
  CHECK(std::isfinite(ny.total()));

  Field2 smooth = [](double x1, double x2) { return std::exp(-0.001 * (x1 * x1 + x2 * x2)); };
  auto nx = x_norm(smooth, g, p, 90.0, opt);
  CHECK(std::isfinite(nx.total()));
  CHECK(!nx.cover_gap);
}

TEST_CASE("energy diagnostics: zero bundle, manufactured decay, Poincare") {
  auto p = synthetic_asymptotic(0.1, 1.0, -1e9, -2.5);
  auto g = graph_from_profile(p, 33.0, 16.0, 0.1, -4.7, -2.9);
  EnergyOptions opt;
  opt.h0 = 20.0;
  opt.theta = 0.1;
  Field2 zero = [](double, double) { return 0.0; };
  auto ed = energy_diagnostics(zero, zero, p, g, std::exp(4.5), 0.0, opt);
  CHECK(ed.orthogonal);
  CHECK(ed.p0_h_inf == 0.0);
  CHECK(ed.wmp0_d_inf == 0.0);
  CHECK(ed.WT_2_inf == 0.0);
  CHECK(ed.all_finite);
  CHECK(ed.floored);  // desk-scale h floors the energy window

  // odd-in-x1 u has vanishing even-pairing obstruction; diagnostics run
  Field2 odd = [](double x1, double) { return 1e-3 * x1; };
  EnergyOptions opt2 = opt;
  opt2.require_orthogonality = false;
  auto ed2 = energy_diagnostics(odd, zero, p, g, std::exp(4.5), 0.0, opt2);
  CHECK(std::isfinite(ed2.implied_constant));
  CHECK(ed2.all_finite);
  CHECK(ed2.poincare_C0 > 0.0);
  CHECK(std::isfinite(ed2.poincare_C0));

  // orthogonality enforcement reports offenders
  Field2 shift = [](double, double) { return 1.0; };
  CHECK_THROWS(energy_diagnostics(shift, zero, p, g, std::exp(4.5), 0.0, opt));
}

TEST_CASE("triangle inequality and homogeneity of the gaussian norms") {
  auto q = GaussianQuadrature::make(20.0, 0.01);
  std::mt19937_64 rng(11);
  auto uni = [&](double a, double b) {
    return a + (b - a) * double(rng() >> 11) * (1.0 / 9007199254740992.0);
  };
  for (int t = 0; t < 20; ++t) {
    Eigen::ArrayXd f(q.y.size()), g2(q.y.size());
    double a1 = uni(-1, 1), a2 = uni(-1, 1), w1 = uni(0.1, 1.0), w2 = uni(0.1, 1.0);
    for (int i = 0; i < q.y.size(); ++i) {
      f[i] = a1 * std::sin(w1 * q.y[i]);
      g2[i] = a2 * std::cos(w2 * q.y[i]);
    }
    auto nf = gaussian_norms(q, f), ng = gaussian_norms(q, g2), ns = gaussian_norms(q, f + g2);
    CHECK(ns.h <= nf.h + ng.h + 1e-10);
    CHECK(ns.d <= nf.d + ng.d + 1e-10);
    CHECK(ns.dstar <= nf.dstar + ng.dstar + 1e-10);
    auto n2 = gaussian_norms(q, 2.0 * f);
    CHECK(n2.h == doctest::Approx(2.0 * nf.h).epsilon(1e-12));
  }
}
