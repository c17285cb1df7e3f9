#pragma once

#include "medsolve/solver.hpp"

namespace medsolve {

/// Image Q = {q_i, sigma_i} of an ensemble under the rotation map, together with the
/// vectors |chi_ij> = sum_k X^(ii)_kj |psi_ik> it is built from (their Gram matrix is D G D).
struct MappedEnsemble {
  Ensemble ensemble;
  PureDecomposition chi;
};

MappedEnsemble map_r(const Ensemble& e, const SolverSolution& sol, const PureDecomposition& d);

/// Pretty good measurement S^{-1/2} q_i sigma_i S^{-1/2}, S = sum_j q_j sigma_j.
Povm pgm(const Ensemble& e);

/// Largest element-wise Frobenius distance between PGM(R(P)) and the solver POVM.
double pgm_theorem_residual(const Ensemble& e, const SolverSolution& sol,
                            const PureDecomposition& d);
bool verify_pgm_theorem(const Ensemble& e, const SolverSolution& sol, const PureDecomposition& d,
                        double tol = 1e-8);

/// Closed-form inverse: |psi_ij> = c sum_k ((H^(ii))^{-1/2})_kj |chi_ik>, where H^(ii)
/// are the diagonal blocks of F^{1/2}, F the Gram matrix of a resolution of Q.
Ensemble map_r_inverse(const Ensemble& q);

/// True iff every eigenvalue of every diagonal block of G^{1/2} equals one common value.
bool pgm_is_optimal(const Ensemble& e, double tol = 1e-8);

struct AlignedPureDecomposition {
  Ensemble pure;                // profile (1, ..., 1), one state per decomposition vector
  Povm rank_one;                // |w'_ij><w'_ij|
  ComplexMatrix block_unitary;  // U'_D diagonalizing every X^(ii)
  ComplexMatrix diagonal_d;     // U'_D^dagger D U'_D
  PureDecomposition vectors;    // |psi'_ij> = sum_k U'_kj |psi_ik>
};

/// Rotates the decomposition so every X^(ii) becomes diagonal; the resulting pure ensemble
/// has the rank-one refinement of the mixed optimum as its own optimum.
AlignedPureDecomposition aligned_pure_decomposition(const Ensemble& e, const SolverSolution& sol,
                                                    const PureDecomposition& d);

}  // namespace medsolve
