#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "translab/bowl.hpp"
#include "translab/gauges.hpp"
#include "translab/translator.hpp"

using namespace translab;

namespace {

const double kTau = -500.0;

Eigen::ArrayXd linspace(double a, double b, int n) { return Eigen::ArrayXd::LinSpaced(n, a, b); }

}  // namespace

TEST_CASE("prefactor positivity and the w ~ e^tau constants") {
  auto p = synthetic_asymptotic(0.1, 10.0);
  // mul_vu: prefactor = 1/v - v_yy/(1+v_y^2) - e^tau N > 0; on the synthetic
  // family compare against 1/v directly
  for (double y : {0.0, 3.0, 10.0, 30.0}) {
    double pref = cyl_prefactor(p, y, kTau);
    CHECK(pref > 0.0);
    CHECK(pref == doctest::Approx(1.0 / p.v(y, kTau)).epsilon(0.01));
  }
  // u == 1: w(0,tau)/e^tau = prefactor -> 1/sqrt(2) deep in the window
  auto one = [](double, double) { return 1.0; };
  double w0 = to_cylindrical_w(one, p, 0.0, kTau);
  CHECK(w0 / std::exp(kTau) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.01));
  CHECK(w0 / std::exp(kTau) > 0.6);
  CHECK(w0 / std::exp(kTau) < 0.81);

  // u == 1: W(0,tau)/(|tau|^{1/2} e^tau) bounded in [0.1, 10]
  double W0 = to_tip_W(one, p, 0.01, kTau);
  double scale = std::sqrt(std::abs(kTau)) * std::exp(kTau);
  CHECK(W0 / scale > 0.1);
  CHECK(W0 / scale < 10.0);
}

TEST_CASE("zero maps to zero and the transforms are linear") {
  auto p = synthetic_asymptotic(0.1, 10.0);
  auto zero = [](double, double) { return 0.0; };
  CHECK(to_cylindrical_w(zero, p, 1.0, kTau) == 0.0);
  CHECK(to_tip_W(zero, p, 0.05, kTau) == 0.0);

  auto u1 = [](double x1, double x2) { return std::sin(0.1 * x1) + 0.2 * x2; };
  auto u2 = [](double x1, double x2) { return std::cos(0.05 * x1 * x2); };
  double a = 2.5, b = -1.25;
  auto comb = [&](double x1, double x2) { return a * u1(x1, x2) + b * u2(x1, x2); };
  for (double y : {0.5, 5.0, 20.0}) {
    double lhs = to_cylindrical_w(comb, p, y, kTau);
    double rhs = a * to_cylindrical_w(u1, p, y, kTau) + b * to_cylindrical_w(u2, p, y, kTau);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("round trips to 1e-12 on shared nodes") {
  auto p = synthetic_asymptotic(0.1, 10.0);
  auto u = [](double x1, double x2) { return 0.3 * std::sin(0.02 * x1) + 1e-4 * x2 * x2; };
  for (double y : {0.0, 2.0, 11.0, 25.0}) {
    double w = to_cylindrical_w(u, p, y, kTau);
    double s = std::exp(-0.5 * kTau);
    double back = from_cylindrical_at(w, p, y, kTau);
    CHECK(back == doctest::Approx(u(s * y, s * p.v(y, kTau))).epsilon(1e-12));
  }
  for (double vv : {0.02, 0.1, 0.19}) {
    double W = to_tip_W(u, p, vv, kTau);
    double s = std::exp(-0.5 * kTau);
    double back = from_tip_at(W, p, vv, kTau);
    CHECK(back == doctest::Approx(u(s * p.Y(vv, kTau), s * vv)).epsilon(1e-12));
  }
}

TEST_CASE("transformation rule W = -Y_v w(Y) and G = -Y_v g(Y) on the overlap") {
  auto p = synthetic_asymptotic(0.1, 10.0);
  auto u = [](double x1, double x2) { return std::cos(0.01 * x1) + 0.05 * x2; };
  auto f = [](double x1, double x2) { return std::sin(0.008 * x1) - 0.02 * x2; };
  for (double vv : {0.1, 0.15, 0.2}) {  // theta <= v <= 2 theta
    double Yv = p.Y_v(vv, kTau);
    double yy = p.Y(vv, kTau);
    double W = to_tip_W(u, p, vv, kTau);
    double w = to_cylindrical_w(u, p, yy, kTau);
    CHECK(std::abs(W - (-Yv) * w) <= 1e-3 * std::abs(W));
    double G = to_tip_G(f, p, vv, kTau);
    double g = to_cylindrical_g(f, p, yy, kTau);
    CHECK(std::abs(G - (-Yv) * g) <= 1e-3 * std::abs(G) + 1e-30);
  }
}

TEST_CASE("comparability across the collar: |w(Y)| ~ |W|/sqrt(|tau|)") {
  auto p = synthetic_asymptotic(0.1, 10.0);
  auto u = [](double x1, double x2) { return 1.0 + 1e-5 * x1 + 2e-5 * x2; };
  double Cmax = 0, Cmin = 1e300;
  for (double vv : {0.1, 0.13, 0.16, 0.2}) {
    double W = to_tip_W(u, p, vv, kTau);
    double w = to_cylindrical_w(u, p, p.Y(vv, kTau), kTau);
    double ratio = std::abs(w) * std::sqrt(std::abs(kTau)) / std::abs(W);
    Cmax = std::max(Cmax, ratio);
    Cmin = std::min(Cmin, ratio);
  }
  CHECK(Cmax < 100.0);
  CHECK(Cmin > 0.01);
}

TEST_CASE("pure Ornstein-Uhlenbeck check on the frozen cylinder") {
  auto p = frozen_cylinder(-100.0, -1.0);
  // w = H2(y) constant in tau solves -w_tau + L w + E w = 0: E vanishes on the
  // cylinder and L H2 = 0
  Eigen::ArrayXd ygrid = linspace(-3.0, 3.0, 31);
  Eigen::ArrayXd taugrid = linspace(-20.0, -10.0, 11);
  Eigen::ArrayXd vgrid = linspace(0.01, 0.2, 5);
  VariationBundle b;
  b.ygrid = ygrid;
  b.taugrid = taugrid;
  b.vgrid = vgrid;
  b.w.resize(ygrid.size(), taugrid.size());
  b.g = Eigen::MatrixXd::Zero(ygrid.size(), taugrid.size());
  b.W = Eigen::MatrixXd::Zero(vgrid.size(), taugrid.size());
  b.G = b.W;
  for (int j = 0; j < taugrid.size(); ++j)
    for (int i = 0; i < ygrid.size(); ++i)
      b.w(i, j) = ygrid[i] * ygrid[i] - 2.0;
  auto rep = cyl_residual(b, p);
  CHECK(rep.worst_value < 1e-10);
  CHECK(rep.pass);
}

TEST_CASE("manufactured cylindrical pair gives zero residual") {
  // construct g := -w_tau + L w + E w for a smooth w (discretized the same way)
  auto p = synthetic_asymptotic(0.1, 10.0);
  Eigen::ArrayXd ygrid = linspace(1.0, 20.0, 40);
  Eigen::ArrayXd taugrid = linspace(-510.0, -490.0, 9);
  Eigen::ArrayXd vgrid = linspace(0.01, 0.2, 7);
  VariationBundle b;
  b.ygrid = ygrid;
  b.taugrid = taugrid;
  b.vgrid = vgrid;
  const int ny = int(ygrid.size()), nt = int(taugrid.size());
  b.w.resize(ny, nt);
  b.g = Eigen::MatrixXd::Zero(ny, nt);
  b.W = Eigen::MatrixXd::Zero(vgrid.size(), nt);
  b.G = b.W;
  auto wfun = [](double y, double tau) { return std::sin(0.3 * y) * (1.0 + 1e-3 * (tau + 500)); };
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ny; ++i) b.w(i, j) = wfun(ygrid[i], taugrid[j]);
  // discrete g via the same stencils: run the residual once with g = 0,
  // recording R, then set g := R-free combination; here simply finite
  // difference identical to cyl_residual internals
  const double hy = ygrid[1] - ygrid[0], ht = taugrid[1] - taugrid[0];
  for (int j = 2; j + 2 < nt; ++j)
    for (int i = 1; i + 1 < ny; ++i) {
      double y = ygrid[i], tau = taugrid[j];
      double w = b.w(i, j);
      double wy = (b.w(i + 1, j) - b.w(i - 1, j)) / (2 * hy);
      double wyy = (b.w(i + 1, j) - 2 * w + b.w(i - 1, j)) / (hy * hy);
      double wt = (b.w(i, j - 2) - 8 * b.w(i, j - 1) + 8 * b.w(i, j + 1) - b.w(i, j + 2)) / (12 * ht);
      double vy = p.v_y(y, tau), vyy = p.v_yy(y, tau), vv = p.v(y, tau);
      double Lw = wyy - 0.5 * y * wy + w;
      double Ew = -vy * vy / (1 + vy * vy) * wyy - 2 * vy * vyy / std::pow(1 + vy * vy, 2) * wy +
                  (2 - vv * vv) / (2 * vv * vv) * w;
      b.g(i, j) = -wt + Lw + Ew;
    }
  auto rep = cyl_residual(b, p);
  CHECK(rep.worst_value < 1e-11);
}

TEST_CASE("obstruction coefficients: zero, vertical shift, odd variation") {
  auto p = synthetic_asymptotic(0.1, 10.0);
  double tau0 = -500.0;
  auto zero = [](double, double) { return 0.0; };
  auto c = obstruction(zero, p, tau0);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);
  CHECK(c[2] == 0.0);

  // u == 1 (vertical shift): positive H0 pairing, zero H1 by parity
  auto one = [](double, double) { return 1.0; };
  auto c1 = obstruction(one, p, tau0);
  CHECK(c1[0] > 0.0);
  CHECK(std::abs(c1[1]) < 1e-12 * std::abs(c1[0]) + 1e-300);

  // odd u in x1: c0 = c2 = 0, c1 nonzero
  auto odd = [](double x1, double) { return x1; };
  auto c2 = obstruction(odd, p, tau0);
  CHECK(std::abs(c2[0]) < 1e-12 * std::abs(c2[1]));
  CHECK(std::abs(c2[2]) < 1e-12 * std::abs(c2[1]));
  CHECK(c2[1] != 0.0);

  CHECK_THROWS(obstruction(zero, p, -1.0));  // outside the window
}
