#pragma once

#include <optional>
#include <vector>

#include "medsolve/gram.hpp"

namespace medsolve {

struct SolverConfig {
  double tol = 1e-12;   // residual threshold ||blockdiag(M) - D^2||_F
  int max_iters = 200;
  double damping = 0.5; // backtracking factor of the Newton line search
  int taylor_order = 4;
  std::optional<int> intervals_override;
};

/// Block-diagonal D > 0 with blockdiag(sqrt(D G D)) = D^2, and M = sqrt(D G D).
struct SolverSolution {
  RankProfile profile;
  ComplexMatrix d;
  ComplexMatrix m;
  double residual = 0.0;
  int iterations = 0;   // Newton iterations
  int taylor_steps = 0; // accepted continuation steps (homotopy only)
};

struct ResidualValue {
  double value = 0.0;
  ComplexMatrix m;
};

/// ||blockdiag(sqrt(D G D)) - D^2||_F together with the principal root.
ResidualValue residual(const ComplexMatrix& d, const GramMatrix& g);

/// Closed-form starting point: the diagonal blocks of G^{1/2}. Exact when G is
/// block diagonal or when those blocks share a single eigenvalue.
ComplexMatrix default_initial_d(const GramMatrix& g);

SolverSolution newton_solve(const GramMatrix& g, const SolverConfig& cfg = {},
                            const std::optional<ComplexMatrix>& init = std::nullopt);

/// Jacobian of the residual map in block-diagonal coordinates, assembled from the
/// Frechet derivative of the principal square root.
RealMatrix residual_jacobian(const ComplexMatrix& d, const GramMatrix& g);

/// G(t) = (1 - t) G0 + t G1.
struct GramPath {
  GramMatrix g0;
  GramMatrix g1;

  GramMatrix at(double t) const;
  ComplexMatrix slope() const { return g1.matrix - g0.matrix; }
};

/// Full coordinate vector of a solution pair (D, M): the Hermitian coordinates of the D
/// blocks followed by (re, im) of every strictly upper off-diagonal block of M. n^2 reals.
RealVector solution_coords(const ComplexMatrix& d, const ComplexMatrix& m,
                           const RankProfile& profile);

/// Taylor coefficients of D(t + s) and M(t + s) in s, orders 0..K.
struct TaylorCoefficients {
  std::vector<ComplexMatrix> d;
  std::vector<ComplexMatrix> m;

  ComplexMatrix evaluate_d(double s) const;
};

TaylorCoefficients taylor_coefficients(const GramPath& path, double t, const ComplexMatrix& d,
                                       int order);

/// k-th total derivatives (k = 1..order) of the solution coordinates along the path at t.
std::vector<RealVector> taylor_derivatives(const GramPath& path, double t,
                                           const ComplexMatrix& d, int order);

/// Continuation from G0 = blockdiag(G_target) to G_target, then one Newton polish.
SolverSolution homotopy_solve(const GramMatrix& g_target, const SolverConfig& cfg = {});

/// Optimal projectors through the expansion in the |omega> vectors built from D^{-1}
/// and the dual basis.
Povm povm_from_solution(const SolverSolution& sol, const PureDecomposition& d,
                        const DualBasis& dual);

/// Same projectors assembled from exactly unitary factors:
/// |w_ij> = (Psi G^{-1/2}) W with W the unitary satisfying D G^{1/2} W = M.
Povm optimal_povm(const SolverSolution& sol, const PureDecomposition& d);

/// Orthonormal vectors |w_ij> (columns) whose block sums give the optimal projectors.
ComplexMatrix optimal_basis(const SolverSolution& sol, const PureDecomposition& d);

enum class Method { Newton, Homotopy };

struct MedResult {
  PureDecomposition decomposition;
  GramMatrix gram;
  SolverSolution solution;
  Povm povm;
  double p_success = 0.0;
};

/// Decompose, build G, solve the fixed-point equation and assemble the optimal POVM.
MedResult solve_ensemble(const Ensemble& e, Method method = Method::Newton,
                         const SolverConfig& cfg = {});

}  // namespace medsolve
