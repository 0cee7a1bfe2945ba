// Experiment drivers: spectral, bowl, solve, linear, barriers, norms,
// asymptotics.  Every run writes CSV artifacts plus a versioned JSON manifest
// embedding the config hash; identical config + seed reproduces the bytes.

#include "CLI11.hpp"

#include "translab/asymptotics.hpp"
#include "translab/barriers.hpp"
#include "translab/bowl.hpp"
#include "translab/config.hpp"
#include "translab/gauges.hpp"
#include "translab/linearized.hpp"
#include "translab/norms.hpp"
#include "translab/profiles.hpp"
#include "translab/svg.hpp"
#include "translab/translator.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using namespace translab;

namespace {

constexpr int kManifestSchemaVersion = 1;

struct Run {
  ExperimentConfig cfg;
  fs::path out;
  std::vector<std::string> artifacts;
  std::vector<std::pair<std::string, bool>> gates;

  std::ofstream open(const std::string& name) {
    fs::create_directories(out);
    artifacts.push_back(name);
    std::ofstream f(out / name);
    f.precision(17);
    return f;
  }

  void gate(const std::string& name, bool pass) {
    gates.emplace_back(name, pass);
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << "\n";
  }

  void plot(const std::string& name, const std::string& svg) {
    if (cfg.csv_only) return;
    fs::create_directories(out);
    artifacts.push_back(name);
    std::ofstream f(out / name);
    f << svg;
  }

  int finish(const std::string& experiment) {
    fs::create_directories(out);
    std::ofstream m(out / "manifest.json");
    m << "{\n  \"schema_version\": " << kManifestSchemaVersion << ",\n";
    m << "  \"experiment\": \"" << experiment << "\",\n";
    m << "  \"config_hash\": \"" << std::hex << cfg.hash() << std::dec << "\",\n";
    m << "  \"seed\": " << cfg.seed << ",\n";
    m << "  \"grid\": {\"disk_radius\": " << cfg.disk_radius << ", \"h\": " << cfg.grid_h << "},\n";
    m << "  \"artifacts\": [";
    for (size_t i = 0; i < artifacts.size(); ++i)
      m << (i ? ", " : "") << "\"" << artifacts[i] << "\"";
    m << "],\n  \"gates\": {";
    bool all = true;
    for (size_t i = 0; i < gates.size(); ++i) {
      m << (i ? ", " : "") << "\"" << gates[i].first << "\": " << (gates[i].second ? "true" : "false");
      all = all && gates[i].second;
    }
    m << "},\n  \"all_pass\": " << (all ? "true" : "false") << "\n}\n";
    artifacts.push_back("manifest.json");
    if (!all) {
      for (auto& [n, p] : gates)
        if (!p) std::cerr << "gate failed: " << n << "\n";
      return 1;
    }
    return 0;
  }
};

int run_spectral(Run& run) {
  const auto& cfg = run.cfg;
  if (cfg.dry_run) return 0;
  // constants table
  {
    auto f = run.open("hermite_constants.csv");
    f << "quantity,exact,quadrature\n";
    auto q = GaussianQuadrature::make();
    auto H2 = hermite_poly<Rational>(2), H4 = hermite_poly<Rational>(4);
    double n2 = q.norm_sq(hermite_values(2, q.y));
    double n4 = q.norm_sq(hermite_values(4, q.y));
    auto cube = multiply(H2, multiply(H2, H2));
    double pair960 = q.inner(hermite_values(2, q.y), eval(to_double_series(cube), q.y));
    f << "norm_H2_sq," << gauss_inner(H2, H2) << "," << n2 << "\n";
    f << "norm_H4_sq," << gauss_inner(H4, H4) << "," << n4 << "\n";
    f << "pair_H2_H2cubed," << gauss_inner(H2, cube) << "," << pair960 << "\n";
    run.gate("hermite_norm_H2", gauss_inner(H2, H2) == 8 && std::abs(n2 - 8) / 8 < 1e-10);
    run.gate("hermite_norm_H4", gauss_inner(H4, H4) == 384 && std::abs(n4 - 384) / 384 < 1e-10);
    run.gate("hermite_pair_960", gauss_inner(H2, cube) == 960 && std::abs(pair960 - 960) / 960 < 1e-10);
    auto sq = multiply(H2, H2);
    run.gate("hermite_H2_sq_expansion",
             sq.coeff(4) == 1 && sq.coeff(2) == 8 && sq.coeff(0) == 8);
  }
  {
    auto f = run.open("ou_eigenvalues.csv");
    f << "k,eigenvalue\n";
    bool ok = true;
    for (int k = 0; k <= 20; ++k) {
      auto Lk = apply_OU(hermite_poly<Rational>(k));
      Rational lam = Lk.coeff(k);
      f << k << "," << to_double(lam) << "\n";
      ok = ok && (lam == Rational(2 - k, 2));
      for (int m = 0; m <= Lk.degree(); ++m)
        if (m != k) ok = ok && (Lk.coeff(m) == 0);
    }
    run.gate("ou_eigenstructure_k_le_20", ok);
  }
  {
    auto f = run.open("prop_a4_checks.csv");
    f << "abs_tau,reaction_minus_64a2sq,target_10_tau3,rel_err\n";
    bool ok = true;
    for (double t : {50.0, 100.0, 200.0}) {
      auto s = prop_a1_values(-t);
      double val = reaction_h2_quadratic<double>(s.a0, s.a2, s.a4) - 64.0 * s.a2 * s.a2;
      double target = 10.0 / (t * t * t);
      double rel = std::abs(val - target) / target;
      f << t << "," << val << "," << target << "," << rel << "\n";
      ok = ok && rel <= 2.0 / t;
    }
    run.gate("prop_a4_quadratic", ok);
    double cub = reaction_h2_cubic<double>(-1.0 / (2.0 * kSqrt2 * 100.0));
    run.gate("prop_a4_cubic",
             std::abs(cub - (-11.0 / kSqrt2 * 1e-6)) <= 1e-20 + 1e-14 * std::abs(cub));
  }
  {
    auto traj = integrate_a2_ode(1.0, -1e6, -1e2, cfg.ode_step);
    auto f = run.open("a2_ode_trajectory.csv");
    f << "tau,a2,b_hat\n";
    for (size_t i = 0; i < traj.size(); i += std::max<size_t>(1, traj.size() / 2000))
      f << traj[i].tau << "," << traj[i].a2 << "," << traj[i].b_hat << "\n";
    Eigen::ArrayXd xs(traj.size()), ys(traj.size());
    for (size_t i = 0; i < traj.size(); ++i) {
      xs[i] = -std::log(std::abs(traj[i].tau));
      ys[i] = traj[i].b_hat;
    }
    run.plot("a2_bhat.svg", svg_line_plot({{"b_hat vs -log|tau|", xs, ys}}, "a2 diagnostic"));
    run.gate("a2_ode_ran", !traj.empty());
  }
  {
    GalerkinOptions opt;
    opt.K = cfg.galerkin_K;
    opt.n_steps = cfg.galerkin_steps;
    opt.cutoff = Cutoff::fixed_radius(cfg.cutoff_radius);
    GalerkinFlow flow(-200.0, -50.0, opt);
    auto traj = flow.run(0.0);
    auto f = run.open("galerkin_trajectory.csv");
    f << "tau,a0,a2,a4,remainder_norm,b_hat\n";
    bool ok0 = true, ok4 = true;
    for (const auto& st : traj) {
      auto s = st.spectral();
      f << s.tau << "," << s.a0 << "," << s.a2 << "," << s.a4 << "," << s.remainder_norm << ","
        << a2_diagnostic(s.tau, s.a2) << "\n";
      double t2 = s.tau * s.tau;
      ok0 = ok0 && (s.a0 * t2 >= 0.9 / (2 * kSqrt2) && s.a0 * t2 <= 1.1 / (2 * kSqrt2));
      ok4 = ok4 && (s.a4 * t2 <= -0.8 / (16 * kSqrt2) && s.a4 * t2 >= -1.2 / (16 * kSqrt2));
    }
    run.gate("galerkin_a0_band", ok0);
    run.gate("galerkin_a4_band", ok4);
  }
  return 0;
}

int run_bowl(Run& run) {
  const auto& cfg = run.cfg;
  if (cfg.dry_run) return 0;
  for (int n : {2, 3}) {
    auto p = solve_bowl(n, cfg.disk_radius + 6.0, std::min(cfg.grid_h, 0.01) * 0.2);
    auto f = run.open("bowl" + std::to_string(n) + "_profile.csv");
    f << "r,u,u_prime,residual\n";
    for (int i = 0; i < p.r.size(); i += std::max<int>(1, int(p.r.size()) / 4000))
      f << p.r[i] << "," << p.u[i] << "," << p.up[i] << "," << p.max_residual << "\n";
    auto k = tip_curvatures_bowl(p);
    run.gate("bowl" + std::to_string(n) + "_tip_curvature",
             std::abs(k.sum() - 1.0) < 1e-6 && std::abs(k[0] - 1.0 / n) < 1e-5);
  }
  return 0;
}

GraphFunction solve_instance(const ExperimentConfig& cfg, bool anisotropic, double radius) {
  if (anisotropic) {
    auto gr = make_disk_grid(radius, cfg.grid_h);
    auto res = newton_solve(
        gr,
        [&](double x, double r) { return cfg.aniso_a * x * x + cfg.aniso_b * r * r; },
        [&](double x, double r) { return cfg.aniso_a * x * x + cfg.aniso_b * r * r; },
        {cfg.newton_tol});
    return res.solution;
  }
  auto bowl = solve_bowl(3, radius + 4.0, 0.002);
  auto gr = make_disk_grid(radius, cfg.grid_h);
  auto res = newton_solve(
      gr, [&](double x, double r) { return bowl.u_at(std::hypot(x, r)); },
      [&](double x, double r) { return bowl.u_at(std::hypot(x, r)); }, {cfg.newton_tol});
  return res.solution;
}

int run_solve(Run& run) {
  const auto& cfg = run.cfg;
  if (cfg.dry_run) return 0;
  // SO(3) oracle cross-check
  auto bowl = solve_bowl(3, cfg.disk_radius + 4.0, 0.002);
  auto sol = solve_instance(cfg, false, cfg.disk_radius);
  double err = 0;
  const auto& gr = sol.grid;
  for (int j = 0; j < gr.nr; ++j)
    for (int i = 0; i < gr.nx; ++i)
      if (gr.kind[gr.node(i, j)] == NodeKind::Interior)
        err = std::max(err, std::abs(sol.phi[gr.node(i, j)] -
                                     bowl.u_at(std::hypot(gr.x1(i), gr.r(j)))));
  run.gate("so3_oracle_match_1e-3", err <= 1e-3);
  {
    auto f = run.open("so3_solution_meta.csv");
    f << "quantity,value\n";
    f << "max_oracle_error," << err << "\n";
  }
  // geometry and tip curvatures
  auto geo = geometry(sol);
  int tip = gr.node((gr.nx - 1) / 2, 0);
  run.gate("tip_identity", std::abs(geo.k1[tip] + geo.k2[tip] + geo.k3[tip] - geo.H[tip]) < 1e-3);
  // anisotropic instance: tip report
  auto aniso = solve_instance(cfg, true, std::min(cfg.disk_radius, 6.0));
  auto geo2 = geometry(aniso);
  int best = -1;
  double bv = 1e300;
  for (int nd = 0; nd < aniso.grid.nx * aniso.grid.nr; ++nd)
    if (aniso.grid.kind[nd] == NodeKind::Interior && aniso.phi[nd] < bv) {
      bv = aniso.phi[nd];
      best = nd;
    }
  {
    auto f = run.open("anisotropic_tip.csv");
    f << "kappa1,kappa2,kappa3,H\n";
    f << geo2.k1[best] << "," << geo2.k2[best] << "," << geo2.k3[best] << "," << geo2.H[best] << "\n";
  }
  run.gate("anisotropic_tip_identity",
           std::abs(geo2.k1[best] + geo2.k2[best] + geo2.k3[best] - geo2.H[best]) < 1e-3);

  // profile extraction + envelope report (diagnostic on the approximant, a
  // gate on the synthetic oval-asymptotics pipeline)
  {
    // closed-form oval-asymptotic profile pushed through graph inversion and
    // level-set extraction; the tip of the tau = -4.6 level sits near x1 = 32
    auto psyn = synthetic_asymptotic(cfg.theta, cfg.ell, -1e9, -2.5);
    auto gsyn = graph_from_profile(psyn, 33.0, 16.0, 0.05, -4.6, -2.9);
    auto pex = extract_profiles(gsyn, -4.4, -3.1, {9, 160, cfg.theta, cfg.ell});
    double worst = 0;
    for (double tau : {-4.2, -3.8, -3.4}) {
      double want = psyn.v(0.5, tau), got = pex.v(0.5, tau);
      worst = std::max(worst, std::abs(want - got));
    }
    run.gate("extraction_pipeline_matches_closed_form", worst < 5e-3);
    auto f = run.open("envelope_check.csv");
    f << "tau,v00,envelope_sqrt2_1p\n";
    bool env_ok = true;
    for (double tau : {-4.2, -3.8, -3.4}) {
      double env = std::sqrt(2.0) * (1.0 + 1.0 / (2.0 * std::abs(tau)));
      double v00 = pex.v(0.0, tau);
      f << tau << "," << v00 << "," << env << "\n";
      env_ok = env_ok && std::abs(v00 - env) <= 0.05 / std::abs(tau);
    }
    run.gate("thm21_envelope_on_extracted_profile", env_ok);
  }

  // rho weight check
  {
    std::mt19937_64 rng(cfg.seed);
    auto uni = [&](double a, double b) {
      return a + (b - a) * double(rng() >> 11) * (1.0 / 9007199254740992.0);
    };
    bool ok = true;
    for (int t = 0; t < 10000; ++t) {
      double at = uni(20.0, 2000.0);
      double V = uni(cfg.ell * std::sqrt(at / std::log(at)), 1.6 * std::sqrt(at));
      auto rp = rho_weights(V, -at, cfg.theta);
      ok = ok && rp.bullet >= rp.star * rp.star && rp.star > 0 && rp.bullet > 0;
    }
    run.gate("rho_bullet_ge_rho_star_sq", ok);
  }
  return 0;
}

int run_linear(Run& run) {
  const auto& cfg = run.cfg;
  if (cfg.dry_run) return 0;
  double radius = std::max(cfg.disk_radius, 25.0);
  ExperimentConfig c2 = cfg;
  c2.grid_h = std::max(cfg.grid_h, 0.1);
  auto g = solve_instance(c2, false, radius);
  auto geom = geometry(g);
  auto sub = subsolution_field(g, geom);
  run.gate("eps_sub_positive", sub.eps_sub > 0);
  double h = std::exp(5.0), h0 = std::exp(3.0);
  auto ls = make_levelset_grid(g.grid, g.phi, h);
  GraphFunction gls = g;
  gls.grid = ls;
  auto op = assemble(gls, AssembleMode::UpwindGatedComparison);
  DirichletSolver solver(op);
  std::mt19937_64 rng(cfg.seed);
  auto uni = [&](double a, double b) {
    return a + (b - a) * double(rng() >> 11) * (1.0 / 9007199254740992.0);
  };
  auto f = run.open("upper_lower_reports.csv");
  f << "instance,pass,margin,sup_inner,budget\n";
  bool all = true;
  for (int t = 0; t < 20; ++t) {
    Eigen::ArrayXd rhs = Eigen::ArrayXd::Zero(g.grid.nx * g.grid.nr);
    double a1 = uni(-1, 1), w1 = uni(0.1, 0.4), ph = uni(0, 6.28);
    for (int nd = 0; nd < rhs.size(); ++nd) {
      int i = nd % g.grid.nx, j = nd / g.grid.nx;
      rhs[nd] = a1 * std::sin(w1 * g.grid.x1(i) + ph) * std::cos(w1 * g.grid.r(j));
    }
    auto sol = solver.solve(h, rhs);
    auto rep = check_upper_lower(gls, geom, sol, h / 2.0, h0, sub.eps_sub);
    f << t << "," << (rep.pass ? 1 : 0) << "," << rep.margin << "," << rep.worst_value << ","
      << rep.budget << "\n";
    all = all && rep.pass;
  }
  run.gate("thm43_20_instances", all);
  // obstruction on a shift variation
  auto prof = extract_profiles(g, -std::log(h) + 0.3, -std::log(h0) - 0.3, {9, 160, cfg.theta, cfg.ell});
  auto one = [](double, double) { return 1.0; };
  auto c = obstruction(one, prof, prof.tau_hi);
  run.gate("obstruction_shift_positive", c[0] > 0 && std::abs(c[1]) < 1e-10 * std::abs(c[0]));
  return 0;
}

int run_barriers(Run& run) {
  const auto& cfg = run.cfg;
  if (cfg.dry_run) return 0;
  // paper-regime synthetic suite; the tip inequality needs sqrt|tau| >~ 8/theta^3
  double tau = -1e15;
  double theta = 0.008, ell = 25.0;
  auto p = synthetic_asymptotic(theta, ell);
  auto spec = make_barrier_spec(p, tau, theta, ell, std::abs(tau), cfg.mu);
  auto f = run.open("barrier_reports.json");
  f << "[\n";
  auto rep1 = verify_cyl_supersolution(p, spec, tau, false);
  auto rep2 = verify_cyl_supersolution(p, spec, tau, true);
  auto rep3 = verify_tip_supersolution(p, spec, tau, false);
  auto rep4 = verify_tip_supersolution(p, spec, tau, true);
  auto rep1b = verify_cyl_supersolution(p, spec, tau, false, true);
  f << rep1.to_json() << ",\n" << rep2.to_json() << ",\n" << rep3.to_json() << ",\n"
    << rep4.to_json() << ",\n" << rep1b.to_json() << "\n]\n";
  run.gate("cyl_supersolution", rep1.pass);
  run.gate("weighted_cyl_supersolution", rep2.pass);
  run.gate("tip_supersolution", rep3.pass);
  run.gate("weighted_tip_supersolution", rep4.pass);
  // b >= 100/|tau| at y = ell
  double bl = barrier_b(p, spec, ell, tau);
  run.gate("b_ge_100_over_tau_at_ell", bl >= 100.0 / std::abs(tau));
  // kappa calculus
  bool kp = true;
  for (double tt : {-1e8, -1e7, -1e6, -1e5})
    kp = kp && std::abs(spec.kappa_prime(tt)) <= spec.kappa(tt) / std::abs(tt) + 1e-12;
  run.gate("kappa_prime_bound", kp);
  run.gate("gamma_lt_1", spec.gamma_est < 1.0);
  return 0;
}

int run_norms(Run& run) {
  const auto& cfg = run.cfg;
  if (cfg.dry_run) return 0;
  auto q = GaussianQuadrature::make();
  Eigen::ArrayXd h2 = hermite_values(2, q.y);
  auto n = gaussian_norms(q, h2);
  run.gate("h_norm_H2", std::abs(n.h * n.h - 8.0) < 1e-6);
  run.gate("d_norm_H2", std::abs(n.d * n.d - 16.0) < 1e-6);
  auto ws = weighted_sobolev_check(q, unsigned(cfg.seed));
  run.gate("weighted_sobolev_finite", ws.pass);
  {
    auto f = run.open("gaussian_norms.csv");
    f << "input,h,d,dstar\n";
    f << "H2," << n.h << "," << n.d << "," << n.dstar << "\n";
  }
  // tip weight coarse bounds on the paper-regime profile
  double tau = -1e6;
  auto p = synthetic_asymptotic(0.01, 25.0);
  auto tw = make_tip_weight(p, tau, 0.01);
  double max_mu = tw.mu_bar.maxCoeff();
  run.gate("mu_bar_coarse_bound", max_mu <= tau / 4.0);
  bool floor_ok = true;
  for (int i = 0; i < tw.vgrid.size(); ++i)
    floor_ok = floor_ok && (tw.mu_bar[i] - std::log(tw.vgrid[i]) >= 51.0 * tau / 100.0);
  run.gate("density_floor", floor_ok);
  return 0;
}

int run_asymptotics(Run& run) {
  const auto& cfg = run.cfg;
  if (cfg.dry_run) return 0;
  auto traj = integrate_a2_ode(0.0, -1e6, -1e4, cfg.ode_step);
  auto f = run.open("a2_trajectory.csv");
  f << "tau,a0,a2,a4,remainder_norm,b_hat\n";
  for (size_t i = 0; i < traj.size(); i += std::max<size_t>(1, traj.size() / 2000)) {
    auto pa = prop_a1_values(traj[i].tau);
    f << traj[i].tau << "," << pa.a0 << "," << traj[i].a2 << "," << pa.a4 << ",0," << traj[i].b_hat
      << "\n";
  }
  run.gate("a2_ode_ran", !traj.empty());
  auto prof = second_order_profile(-100.0, 0.0);
  run.gate("thmA5_algebra", std::abs(prof.coeff(0) - 1.0 / (2 * kSqrt2 * 1e4)) < 1e-18);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"translab: numerical laboratory for noncollapsed translators in R^4"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool csv_only = false, dry_run = false;
  app.add_option("--config", config_path, "config file (flat key = value)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "RNG seed override");
  app.add_flag("--csv-only", csv_only, "suppress SVG plots");
  app.add_flag("--dry-run", dry_run, "validate the config and exit");

  auto* spectral = app.add_subcommand("spectral", "Hermite/OU constants, reaction terms, flows");
  auto* bowlc = app.add_subcommand("bowl", "bowl soliton profiles");
  auto* solvec = app.add_subcommand("solve", "2-D translator pipeline");
  auto* linearc = app.add_subcommand("linear", "Dirichlet suite: upper-lower, obstruction");
  auto* barrierc = app.add_subcommand("barriers", "barrier certificates");
  auto* normsc = app.add_subcommand("norms", "Gaussian/tip/Holder norm reports");
  auto* asymc = app.add_subcommand("asymptotics", "a2 ODE trajectories");

  CLI11_PARSE(app, argc, argv);

  try {
    Run run;
    run.cfg = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::parse_file(config_path);
    if (app.count("--seed")) run.cfg.seed = seed;
    if (app.count("--csv-only")) run.cfg.csv_only = true;
    if (app.count("--dry-run")) run.cfg.dry_run = true;
    run.cfg.validate();
    if (!out_dir.empty()) run.cfg.out_dir = out_dir;
    run.out = run.cfg.out_dir;

    if (run.cfg.dry_run) {
      std::cout << "config ok (hash " << std::hex << run.cfg.hash() << std::dec << ")\n";
      return 0;
    }

    int rc = 0;
    std::string name;
    if (spectral->parsed()) {
      name = "spectral";
      rc = run_spectral(run);
    } else if (bowlc->parsed()) {
      name = "bowl";
      rc = run_bowl(run);
    } else if (solvec->parsed()) {
      name = "solve";
      rc = run_solve(run);
    } else if (linearc->parsed()) {
      name = "linear";
      rc = run_linear(run);
    } else if (barrierc->parsed()) {
      name = "barriers";
      rc = run_barriers(run);
    } else if (normsc->parsed()) {
      name = "norms";
      rc = run_norms(run);
    } else if (asymc->parsed()) {
      name = "asymptotics";
      rc = run_asymptotics(run);
    }
    if (rc != 0) return rc;
    return run.finish(name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
