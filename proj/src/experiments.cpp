#include "jko/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jko/io.hpp"

namespace jko {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double l2_error(const LagrangianState& s, double lag_time, const FemSolver& fem) {
  if (std::abs(lag_time - fem.time()) > 1e-9)
    throw std::invalid_argument("l2_error: solution times differ");
  if (s.d() != 2) throw std::invalid_argument("l2_error: two-dimensional states only");
  const QuadratureGrid& g = *s.grid;
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double ul = g.ubar[k] / s.sigma[k];
    const double ur = fem.interpolate(&s.pos[2 * k]);
    acc += (ul - ur) * (ul - ur) * s.sigma[k] * g.weight[k];
  }
  return std::sqrt(acc);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need two matched samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return sxy / sxx;
}

ConvergenceResult run_convergence(const std::vector<int>& Ks, double tau, double T,
                                  int L, int quad_points, int threads) {
  if (Ks.empty()) throw std::invalid_argument("run_convergence: empty cutoff list");
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_zero(2);
  const ScalarField u0 = make_initial_density_exp1();

  FemConfig fc;
  fc.L = L;
  fc.tau = tau;
  FemSolver fem(fc, model, pot, u0);
  fem.advance_to(T);

  ConvergenceResult out;
  for (int K : Ks) {
    JkoConfig jc;
    jc.d = 2;
    jc.K = K;
    jc.tau = tau;
    jc.T = T;
    jc.quad_points = quad_points;
    jc.threads = threads;
    JkoSolver solver(jc, model, pot, u0);
    const auto t0 = std::chrono::steady_clock::now();
    solver.run();
    ErrorRecord rec;
    rec.K = K;
    rec.T = T;
    rec.seconds = seconds_since(t0);
    rec.error = l2_error(solver.state(), solver.state().n * tau, fem);
    out.records.push_back(rec);
  }

  std::vector<double> lx, ly;
  for (const auto& r : out.records) {
    lx.push_back(std::log(static_cast<double>(r.K)));
    ly.push_back(std::log(r.error));
  }
  out.order = -fit_slope(lx, ly);
  return out;
}

ContractionRecord run_contractivity(double lambda, int K, double tau, int steps,
                                    std::uint64_t seed, double det_floor,
                                    double amplitude, int quad_points, int threads) {
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_quadratic(2, lambda);
  const ScalarField ub = make_uniform_density(2);

  JkoConfig jc;
  jc.d = 2;
  jc.K = K;
  jc.tau = tau;
  jc.T = steps * tau;
  jc.quad_points = quad_points;
  jc.threads = threads;
  JkoSolver A(jc, model, pot, ub);
  JkoSolver B(jc, model, pot, ub);

  const IndexSet& I = A.modes();
  const auto M = static_cast<Eigen::Index>(I.size());
  const QuadratureGrid& g = A.grid();
  const BasisTables ident = build_tables(I, g.node.data(), g.size(), false, threads);

  Rng rng(seed);
  auto draw = [&]() {
    Eigen::VectorXd z0(M);
    for (Eigen::Index j = 0; j < M; ++j) z0[j] = rng.uniform(-1.0, 1.0);
    auto min_det = [&](double c) {
      double mn = std::numeric_limits<double>::infinity();
      const Eigen::VectorXd zc = c * z0;
      for (std::size_t k = 0; k < g.size(); ++k)
        mn = std::min(mn, jacobian_det(ident, zc, k));
      return mn;
    };
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (min_det(hi) >= det_floor && ++guard < 60) hi *= 2.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (min_det(mid) >= det_floor)
        lo = mid;
      else
        hi = mid;
    }
    return Eigen::VectorXd(amplitude * lo * z0);
  };

  A.apply_increment(draw());
  B.apply_increment(draw());

  ContractionRecord rec;
  rec.times.push_back(0.0);
  rec.distances.push_back(map_distance(A.state(), B.state()));
  for (int n = 1; n <= steps; ++n) {
    A.step();
    B.step();
    rec.times.push_back(n * tau);
    rec.distances.push_back(map_distance(A.state(), B.state()));
  }

  std::vector<double> ft, fl;
  for (std::size_t i = 5; i < rec.distances.size(); ++i) {
    ft.push_back(rec.times[i]);
    fl.push_back(std::log(rec.distances[i]));
  }
  rec.rate = -fit_slope(ft, fl);
  return rec;
}

QualitativeResult run_qualitative(int K, double tau, double T,
                                  const std::vector<double>& snapshot_times, int L,
                                  const std::string& outdir, int quad_points,
                                  int threads) {
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_exp1();
  const ScalarField u0 = make_initial_density_exp1();

  JkoConfig jc;
  jc.d = 2;
  jc.K = K;
  jc.tau = tau;
  jc.T = T;
  jc.quad_points = quad_points;
  jc.threads = threads;
  JkoSolver solver(jc, model, pot, u0);

  FemConfig fc;
  fc.L = L;
  fc.tau = tau;
  FemSolver fem(fc, model, pot, u0);

  const int nsteps = step_count(T, tau);
  QualitativeResult out;
  for (double t : snapshot_times) {
    int n = static_cast<int>(std::lround(t / tau));
    if (n < 0) n = 0;
    if (n > nsteps) n = nsteps;
    out.snapshot_steps.push_back(n);
  }
  const bool emit = !outdir.empty();
  auto snap = [&](int n) {
    for (std::size_t i = 0; i < out.snapshot_steps.size(); ++i) {
      if (out.snapshot_steps[i] != n) continue;
      if (!emit) continue;
      const std::string tag = std::to_string(i);
      write_state_csv(solver.state(), outdir + "/particles_" + tag + ".csv");
      fem.write_snapshot_csv(outdir + "/fem_" + tag + ".csv");
    }
  };

  out.entropy_fem.push_back(fem.entropy());
  snap(0);
  for (int n = 1; n <= nsteps; ++n) {
    solver.step();
    fem.step();
    out.entropy_fem.push_back(fem.entropy());
    snap(n);
  }
  out.entropy_lag = solver.entropy_history();

  const double e0 = std::abs(out.entropy_lag.front());
  double dev = 0.0;
  for (std::size_t n = 0; n < out.entropy_lag.size(); ++n)
    dev = std::max(dev, std::abs(out.entropy_lag[n] - out.entropy_fem[n]) / e0);
  out.overlay_max_rel = dev;

  if (emit) {
    write_entropy_series(outdir + "/decay_lagrangian.dat", tau, out.entropy_lag);
    write_entropy_series(outdir + "/decay_fem.dat", tau, out.entropy_fem);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < out.snapshot_steps.size(); ++i)
      rows.push_back({static_cast<double>(i), out.snapshot_steps[i] * tau});
    write_columns(outdir + "/snapshots.dat", "index t", rows);
  }
  return out;
}

void write_convergence(const std::string& path, const ConvergenceResult& r) {
  std::vector<std::vector<double>> rows;
  for (const auto& rec : r.records)
    rows.push_back({static_cast<double>(rec.K), rec.error});
  write_columns(path, "K error", rows);
}

void write_contraction(const std::string& path, const ContractionRecord& r) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.times.size(); ++i)
    rows.push_back({r.times[i], r.distances[i]});
  write_columns(path, "t distance", rows);
}

void write_contraction_envelope(const std::string& path, const ContractionRecord& r,
                                double lambda) {
  std::vector<std::vector<double>> rows;
  const double d0 = r.distances.empty() ? 0.0 : r.distances.front();
  for (std::size_t i = 0; i < r.times.size(); ++i)
    rows.push_back({r.times[i], d0 * std::exp(-lambda * r.times[i])});
  write_columns(path, "t envelope", rows);
}

}  // namespace jko
