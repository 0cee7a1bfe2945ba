#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "translab/bowl.hpp"

using namespace translab;

TEST_CASE("tip behavior u''(0) = 1/n") {
  for (int n : {2, 3}) {
    auto p = solve_bowl(n, 5.0, 0.001);
    // u(0.1) * 2n / 0.01 -> 1
    CHECK(p.u_at(0.1) * 2.0 * n / 0.01 == doctest::Approx(1.0).epsilon(1e-3));
    auto k = tip_curvatures_bowl(p);
    CHECK(k.size() == n);
    for (int i = 0; i < n; ++i) CHECK(k[i] == doctest::Approx(1.0 / n).epsilon(1e-5));
    CHECK(k.sum() == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("far field slope u'/r -> 1/(n-1), Richardson oracle") {
  auto p3 = solve_bowl(3, 500.0, 0.005);
  CHECK(p3.up_at(50.0) / 50.0 == doctest::Approx(0.5).epsilon(0.02));
  auto p2 = solve_bowl(2, 500.0, 0.005);
  CHECK(p2.up_at(50.0) / 50.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("convexity and monotonicity of the profile") {
  auto p = solve_bowl(3, 50.0, 0.005);
  for (int i = 0; i + 1 < p.r.size(); ++i) {
    CHECK(p.up[i] > 0.0);
    CHECK(p.up[i + 1] > p.up[i]);  // u'' > 0
  }
}

TEST_CASE("order of accuracy: halving the step cuts the residual by >= 14x") {
  // In the production step range (h <= 0.01) the trajectory is at the
  // roundoff floor, so the fourth-order ratio is exposed with the coarse-step
  // probe where truncation dominates.
  BowlOptions o;
  o.coarse_step_probe = true;
  o.residual_tol = 1.0;
  auto a = solve_bowl(3, 20.0, 0.16, 1e-8, o);
  auto b = solve_bowl(3, 20.0, 0.08, 1e-8, o);
  auto c = solve_bowl(3, 20.0, 0.04, 1e-8, o);
  CHECK(a.max_residual / b.max_residual >= 14.0);
  CHECK(b.max_residual / c.max_residual >= 14.0);
  // production range: residual at the floor
  CHECK(solve_bowl(3, 20.0, 0.01).max_residual < 1e-9);
}

TEST_CASE("seed sensitivity below tolerance") {
  BowlOptions o1, o2;
  o1.seed_eps = 1e-3;
  o2.seed_eps = 2e-3;
  auto a = solve_bowl(3, 10.0, 0.002, 1e-8, o1);
  auto b = solve_bowl(3, 10.0, 0.002, 1e-8, o2);
  CHECK(std::abs(a.u_at(8.0) - b.u_at(8.0)) < 1e-8);
}

TEST_CASE("argument validation") {
  CHECK_THROWS(solve_bowl(4, 10.0, 0.005));
  CHECK_THROWS(solve_bowl(3, 0.5, 0.005));
  CHECK_THROWS(solve_bowl(3, 10.0, 0.5));
}
