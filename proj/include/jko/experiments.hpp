#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jko/fem.hpp"
#include "jko/jko.hpp"

namespace jko {

struct ErrorRecord {
  int K = 0;
  double T = 0.0;
  double error = 0.0;
  double seconds = 0.0;
};

struct ConvergenceResult {
  std::vector<ErrorRecord> records;
  double order = 0.0;  // fitted p in error ~ K^(-p)
};

struct ContractionRecord {
  std::vector<double> times;      // n tau, including t = 0
  std::vector<double> distances;  // map distance per step
  double rate = 0.0;              // fitted decay rate, first 5 steps discarded
};

struct QualitativeResult {
  std::vector<double> entropy_lag;
  std::vector<double> entropy_fem;
  double overlay_max_rel = 0.0;  // max |E_lag - E_fem| / |E_lag(0)|
  std::vector<int> snapshot_steps;
};

// Eulerian L2 distance between the particle density and the FEM field,
// integrated through the transport map:
//   sqrt( sum_k (ubar_k/sigma_k - u_ref(x_k))^2 sigma_k w_k ).
// The two solution times must agree to 1e-9.
double l2_error(const LagrangianState& s, double lag_time, const FemSolver& fem);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Zero potential, experiment-1 initial density, FEM reference at lattice L;
// errors at final time T for each cutoff in Ks plus the fitted decay order.
ConvergenceResult run_convergence(const std::vector<int>& Ks, double tau, double T,
                                  int L, int quad_points = 2, int threads = 1);

// Quadratic well V = (lambda/2)|x|^2, uniform reference density. Two runs from
// seeded random initial maps, each drawn i.i.d. uniform and scaled by bisection
// to the det_floor constraint, then damped by `amplitude`. The map-distance
// contraction at a rate near lambda needs initial maps close to each other;
// at the full bisection amplitude the displacements are too large and the
// observed rate drops to about lambda/2.
ContractionRecord run_contractivity(double lambda, int K, double tau, int steps,
                                    std::uint64_t seed, double det_floor = 0.5,
                                    double amplitude = 0.3, int quad_points = 2,
                                    int threads = 1);

// Experiment-1 potential and density; particle/FEM snapshots at the requested
// times, both entropy series, and their maximum relative deviation. Files are
// written under outdir unless it is empty.
QualitativeResult run_qualitative(int K, double tau, double T,
                                  const std::vector<double>& snapshot_times, int L,
                                  const std::string& outdir, int quad_points = 2,
                                  int threads = 1);

void write_convergence(const std::string& path, const ConvergenceResult& r);
void write_contraction(const std::string& path, const ContractionRecord& r);
void write_contraction_envelope(const std::string& path, const ContractionRecord& r,
                                double lambda);

}  // namespace jko
