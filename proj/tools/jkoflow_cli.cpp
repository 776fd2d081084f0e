#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jko/config.hpp"
#include "jko/experiments.hpp"
#include "jko/fem.hpp"
#include "jko/io.hpp"
#include "jko/jko.hpp"

namespace {

jko::Potential make_pot(const jko::RunConfig& cfg) {
  if (cfg.potential == "zero") return jko::make_potential_zero(cfg.d);
  if (cfg.potential == "quadratic")
    return jko::make_potential_quadratic(cfg.d, cfg.lambda);
  return jko::make_potential_exp1();
}

jko::ScalarField make_density(const jko::RunConfig& cfg) {
  if (cfg.d == 2) return jko::make_initial_density_exp1();
  return jko::make_uniform_density(cfg.d);
}

jko::JkoConfig to_jko(const jko::RunConfig& cfg, int default_quad_points) {
  jko::JkoConfig jc;
  jc.d = cfg.d;
  jc.K = cfg.K;
  jc.tau = cfg.tau;
  jc.T = cfg.T;
  jc.tol = cfg.tol;
  jc.quad_cells = cfg.quad_cells;
  jc.quad_points = cfg.quad_points > 0 ? cfg.quad_points : default_quad_points;
  jc.threads = cfg.threads;
  return jc;
}

std::string out_dir(const jko::RunConfig& cfg) {
  const std::string dir = cfg.out.empty() ? "." : cfg.out;
  std::filesystem::create_directories(dir);
  return dir;
}

int cmd_run(const jko::RunConfig& cfg) {
  const auto model = jko::make_power_pressure(cfg.m);
  const auto pot = make_pot(cfg);
  const auto u0 = make_density(cfg);
  jko::JkoSolver solver(to_jko(cfg, 2), model, pot, u0);
  const auto reports = solver.run();
  int total_newton = 0;
  for (const auto& r : reports) total_newton += r.iterations;
  const std::string dir = out_dir(cfg);
  jko::write_entropy_series(dir + "/decay.dat", cfg.tau, solver.entropy_history());
  jko::write_state_csv(solver.state(), dir + "/state_final.csv");
  std::printf("steps          %d\n", static_cast<int>(reports.size()));
  std::printf("newton iters   %d\n", total_newton);
  std::printf("entropy start  %.16e\n", solver.entropy_history().front());
  std::printf("entropy end    %.16e\n", solver.entropy_history().back());
  double mass = 0.0;
  const auto& st = solver.state();
  for (std::size_t k = 0; k < st.size(); ++k)
    mass += st.grid->ubar[k] * st.grid->weight[k];
  std::printf("mass           %.16e\n", mass);
  std::printf("wrote %s/decay.dat and %s/state_final.csv\n", dir.c_str(), dir.c_str());
  return 0;
}

int cmd_convergence(const jko::RunConfig& cfg) {
  const int quad_points = cfg.quad_points > 0 ? cfg.quad_points : 2;
  const auto res =
      jko::run_convergence(cfg.Ks, cfg.tau, cfg.T, cfg.L, quad_points, cfg.threads);
  const std::string dir = out_dir(cfg);
  jko::write_convergence(dir + "/error.dat", res);
  for (const auto& r : res.records)
    std::printf("K=%-3d  error %.6e   (%.1f s)\n", r.K, r.error, r.seconds);
  std::printf("fitted order   %.3f\n", res.order);
  std::printf("wrote %s/error.dat\n", dir.c_str());
  return 0;
}

int cmd_contractivity(const jko::RunConfig& cfg) {
  const int quad_points = cfg.quad_points > 0 ? cfg.quad_points : 2;
  const auto rec = jko::run_contractivity(cfg.lambda, cfg.K, cfg.tau, cfg.steps,
                                          cfg.seed, 0.5, 0.3, quad_points,
                                          cfg.threads);
  const std::string dir = out_dir(cfg);
  jko::write_contraction(dir + "/distance.dat", rec);
  jko::write_contraction_envelope(dir + "/envelope.dat", rec, cfg.lambda);
  std::printf("d(0)           %.6e\n", rec.distances.front());
  std::printf("d(T)           %.6e\n", rec.distances.back());
  std::printf("fitted rate    %.3f\n", rec.rate);
  std::printf("wrote %s/distance.dat and %s/envelope.dat\n", dir.c_str(), dir.c_str());
  return 0;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_validate(const jko::RunConfig& cfg) {
  std::vector<Check> checks;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
  };
  char buf[128];

  {  // gradient and Hessian against central differences at a feasible point
    const auto model = jko::make_power_pressure(2.0);
    const auto pot = jko::make_potential_exp1();
    const auto u0 = jko::make_initial_density_exp1();
    jko::QuadratureGrid grid = jko::build_gauss_grid(2, 8, 2, u0);
    jko::LagrangianState st = jko::make_identity_state(grid);
    const auto I = jko::make_index_set(2, 4);
    const auto tables =
        jko::build_tables(I, st.pos.data(), st.size(), false, cfg.threads);
    jko::StepFunctional F(st, tables, model, pot, 5e-4);
    jko::Rng rng(cfg.seed);
    const auto M = static_cast<Eigen::Index>(F.dim());
    Eigen::VectorXd z(M);
    for (Eigen::Index j = 0; j < M; ++j) z[j] = 1e-3 * rng.uniform(-1.0, 1.0);
    Eigen::VectorXd g(M);
    F.gradient(z, g);
    double gerr = 0.0;
    const double eps = 1e-6;
    for (Eigen::Index j = 0; j < M; ++j) {
      Eigen::VectorXd zp = z, zm = z;
      zp[j] += eps;
      zm[j] -= eps;
      const double fd = (F.value(zp) - F.value(zm)) / (2.0 * eps);
      gerr = std::max(gerr, std::abs(fd - g[j]) / std::max(1.0, std::abs(g[j])));
    }
    std::snprintf(buf, sizeof buf, "max rel dev %.2e (limit 1e-6)", gerr);
    add("gradient vs finite differences", gerr <= 1e-6, buf);
  }

  {  // gradient Gram matrix close to identity under refined quadrature
    const auto I = jko::make_index_set(2, 4);
    const auto fine = jko::build_gauss_grid(2, 24, 3, jko::make_uniform_density(2));
    const Eigen::MatrixXd G = jko::gram_of_gradients(I, fine);
    const double dev =
        (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
    std::snprintf(buf, sizeof buf, "max |Gram - I| = %.2e (limit 1e-6)", dev);
    add("gradient Gram identity", dev <= 1e-6, buf);
  }

  {  // 20-step micro-run: entropy monotone, mass identity, Newton health
    const auto model = jko::make_power_pressure(2.0);
    const auto pot = jko::make_potential_exp1();
    const auto u0 = jko::make_initial_density_exp1();
    jko::JkoConfig jc = to_jko(cfg, 2);
    jc.d = 2;
    jc.T = 20.0 * jc.tau;
    jko::JkoSolver solver(jc, model, pot, u0);
    bool newton_ok = true;
    double mass_dev = 0.0;
    const auto& st = solver.state();
    double mass0 = 0.0;
    for (std::size_t k = 0; k < st.size(); ++k)
      mass0 += (st.grid->ubar[k] / st.sigma[k]) * st.sigma[k] * st.grid->weight[k];
    for (int n = 0; n < 20; ++n) {
      const auto rep = solver.step();
      newton_ok = newton_ok && rep.converged;
      double mass = 0.0;
      for (std::size_t k = 0; k < st.size(); ++k)
        mass += (st.grid->ubar[k] / st.sigma[k]) * st.sigma[k] * st.grid->weight[k];
      mass_dev = std::max(mass_dev, std::abs(mass - mass0));
    }
    const auto& E = solver.entropy_history();
    double max_rise = -1e300;
    for (std::size_t n = 1; n < E.size(); ++n) max_rise = std::max(max_rise, E[n] - E[n - 1]);
    add("newton convergence (20 steps)", newton_ok, newton_ok ? "all steps converged" : "a step failed");
    std::snprintf(buf, sizeof buf, "max entropy rise %.2e (limit 0)", max_rise);
    add("entropy monotone", max_rise <= 0.0, buf);
    std::snprintf(buf, sizeof buf, "max mass deviation %.2e (limit 1e-14)", mass_dev);
    add("mass identity", mass_dev <= 1e-14, buf);
  }

  bool all = true;
  std::printf("%-36s %-6s %s\n", "check", "status", "detail");
  for (const auto& c : checks) {
    all = all && c.pass;
    std::printf("%-36s %-6s %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                c.detail.c_str());
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian minimizing-movement solver for nonlinear Fokker-Planck equations"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  long long seed_override = -1;
  int threads_override = 0;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--out", out_override, "output directory");
  app.add_option("--seed", seed_override, "random seed override");
  app.add_option("--threads", threads_override, "worker thread count");

  auto* sub_run = app.add_subcommand("run", "single solver run; emits entropy series and final state");
  auto* sub_conv = app.add_subcommand("convergence", "error vs mode cutoff against a FEM reference");
  auto* sub_contr = app.add_subcommand("contractivity", "map distance decay for two perturbed runs");
  auto* sub_val = app.add_subcommand("validate", "built-in invariant suite");
  for (auto* s : {sub_run, sub_conv, sub_contr, sub_val})
    s->fallthrough();  // --config and friends may follow the subcommand

  CLI11_PARSE(app, argc, argv);

  jko::RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config file '" << config_path << "'\n";
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      cfg = jko::parse_config(ss.str());
    } catch (const jko::ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  if (!out_override.empty()) cfg.out = out_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (threads_override > 0) cfg.threads = threads_override;

  try {
    if (sub_run->parsed()) return cmd_run(cfg);
    if (sub_conv->parsed()) return cmd_convergence(cfg);
    if (sub_contr->parsed()) return cmd_contractivity(cfg);
    if (sub_val->parsed()) return cmd_validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
