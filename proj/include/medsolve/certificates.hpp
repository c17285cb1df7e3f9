#pragma once

#include <vector>

#include "medsolve/ensemble.hpp"

namespace medsolve {

struct ProjectivityResiduals {
  double projectivity = 0.0;   // max_{i,j} ||P_i P_j - delta_ij P_i||_F
  double completeness = 0.0;   // ||sum_i P_i - I||_F
  std::vector<int> ranks;      // numerical rank of each element
  std::vector<bool> rank_ok;
};

ProjectivityResiduals check_projective(const Povm& povm, const RankProfile& profile);

struct ZOperator {
  ComplexMatrix z;              // sum_i p_i rho_i P_i, as computed (not symmetrized)
  double hermiticity_residual;  // ||Z - Z^dagger||_F; vanishes at stationary points
};

ZOperator compute_z(const Ensemble& e, const Povm& povm);

struct Certificate {
  double projectivity_residual = 0.0;
  double completeness_residual = 0.0;
  std::vector<bool> rank_ok;
  double stationarity_residual = 0.0;  // max_{i,j} ||P_j (p_j rho_j - p_i rho_i) P_i||_F
  double z_min_eigenvalue = 0.0;
  double global_min_eigenvalue = 0.0;  // min_i lambda_min(Z - p_i rho_i)
  double p_success = 0.0;
  bool passed = false;
};

/// Optimality check: projective with matching ranks, Holevo stationarity, Z > 0, and
/// the global inequalities Z >= p_i rho_i as an independent cross-check.
Certificate check_optimal(const Ensemble& e, const Povm& povm, double tol = 1e-8,
                          double eig_margin = 1e-10);

struct DualValue {
  double trace;
  double feasibility_margin;  // min_i lambda_min(Z - p_i rho_i); >= 0 when feasible
};

DualValue dual_objective(const Ensemble& e, const ComplexMatrix& z);

}  // namespace medsolve
