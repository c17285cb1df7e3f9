#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "medsolve/solver.hpp"

namespace medsolve {

/// Minimizes Tr Z - sum_i w_i log det(Z - p_i rho_i) for a decreasing weight sequence.
struct BarrierConfig {
  double initial_weight = 1e-3;
  double weight_decay = 0.1;
  double inner_tol = 1e-12;  // half squared Newton decrement
  double outer_tol = 1e-7;   // stop once the duality gap bound sum_i w_i n drops below
  int max_outer = 6;
  int max_inner = 200;
  double start_shift = 1e-2;  // Z0 = sum_i p_i rho_i + start_shift I
};

struct BarrierResult {
  ComplexMatrix z;
  double p_success_upper = 0.0;  // Tr Z
  int outer_iterations = 0;
  int inner_iterations = 0;
  std::vector<double> trace_history;  // Tr Z after each outer loop
};

BarrierResult barrier_solve(const Ensemble& e, const BarrierConfig& cfg = {});

struct BaselineResult {
  Povm povm;
  double p_success = 0.0;
};

/// Spectral projectors of p_1 rho_1 - p_2 rho_2; the null space goes to the first element.
BaselineResult helstrom_two_state(const Ensemble& e);

/// Brute-force search over projective measurements with the ensemble's rank profile
/// (n <= 3). With at most 5 unitary parameters the search runs over a grid with `grid`
/// points per parameter; otherwise `grid` Haar-random unitaries are drawn. With `refine`
/// the best point is then polished by a compass search over unitary perturbations.
BaselineResult exhaustive_search(const Ensemble& e, int grid, std::uint64_t seed = 0,
                                 bool refine = true);

/// Number of real parameters of projective measurements with the profile: n^2 - sum r_i^2.
int projective_parameter_count(const RankProfile& profile);

struct BenchConfig {
  std::vector<int> sizes{4, 8, 12, 16};
  int repeats = 3;
  std::uint64_t seed = 1;
  std::vector<std::string> solvers{"newton", "homotopy", "barrier"};
  int block_rank = 2;
};

struct BenchRow {
  std::string solver;
  int n = 0;
  std::string profile;
  double median_seconds = 0.0;
  double p_success = 0.0;  // mean over repeats
};

struct ScalingReport {
  std::vector<BenchRow> rows;
  std::map<std::string, double> slopes;  // least-squares slope of log t against log n

  std::string to_csv() const;
};

/// Profile of `block_rank` blocks filling n, with one smaller trailing block if needed.
RankProfile bench_profile(int n, int block_rank);

ScalingReport bench_scaling(const BenchConfig& cfg);

}  // namespace medsolve
