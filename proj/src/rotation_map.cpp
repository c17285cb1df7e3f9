#include "medsolve/rotation_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace medsolve {

namespace {

Ensemble ensemble_from_columns(const ComplexMatrix& vectors, const RankProfile& profile,
                               double normalizer) {
  Ensemble out{profile, {}, {}};
  for (int i = 0; i < profile.blocks(); ++i) {
    const ComplexMatrix cols = vectors.middleCols(profile.offset(i), profile.rank(i));
    const ComplexMatrix weighted = hermitian_part(cols * cols.adjoint()) / normalizer;
    const double p = weighted.trace().real();
    out.priors.push_back(p);
    out.states.push_back(weighted / p);
  }
  return out;
}

}  // namespace

MappedEnsemble map_r(const Ensemble& e, const SolverSolution& sol, const PureDecomposition& d) {
  if (!(e.profile == sol.profile) || !(d.profile == sol.profile)) {
    throw MedError(ErrorKind::ProfileMismatch, "ensemble, decomposition and solution disagree");
  }
  const ComplexMatrix chi = d.vectors * sol.d;
  const double total = chi.squaredNorm();
  return MappedEnsemble{ensemble_from_columns(chi, e.profile, total),
                        PureDecomposition{e.profile, chi}};
}

Povm pgm(const Ensemble& e) {
  ComplexMatrix s_inv_half;
  try {
    s_inv_half = inverse_sqrt(e.average());
  } catch (const MedError& err) {
    throw MedError(ErrorKind::SingularAverage, err.detail());
  }
  Povm out{e.profile, {}};
  for (int i = 0; i < e.size(); ++i) {
    out.elements.push_back(hermitian_part(s_inv_half * e.weighted(i) * s_inv_half));
  }
  return out;
}

double pgm_theorem_residual(const Ensemble& e, const SolverSolution& sol,
                            const PureDecomposition& d) {
  const Povm from_map = pgm(map_r(e, sol, d).ensemble);
  const Povm optimal = optimal_povm(sol, d);
  double worst = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    worst = std::max(worst, (from_map.elements[i] - optimal.elements[i]).norm());
  }
  return worst;
}

bool verify_pgm_theorem(const Ensemble& e, const SolverSolution& sol, const PureDecomposition& d,
                        double tol) {
  return pgm_theorem_residual(e, sol, d) <= tol;
}

Ensemble map_r_inverse(const Ensemble& q) {
  const auto& profile = q.profile;
  const PureDecomposition zeta = decompose(q);
  const ComplexMatrix f = hermitian_part(zeta.vectors.adjoint() * zeta.vectors);
  const ComplexMatrix f_half = principal_sqrt(f);

  std::vector<ComplexMatrix> da_blocks;
  double norm_sq = 0.0;  // sum_s Tr(H_ss^{-1/2} F_ss H_ss^{-1/2})
  for (int s = 0; s < profile.blocks(); ++s) {
    const ComplexMatrix h_inv_half = inverse_sqrt(block_view(f_half, profile, s, s));
    norm_sq += (h_inv_half * block_view(f, profile, s, s) * h_inv_half).trace().real();
    da_blocks.push_back(h_inv_half);
  }
  const double c = 1.0 / std::sqrt(norm_sq);
  const ComplexMatrix psi = c * zeta.vectors * assemble_block_diagonal(da_blocks, profile);
  return ensemble_from_columns(psi, profile, 1.0);
}

bool pgm_is_optimal(const Ensemble& e, double tol) {
  const PureDecomposition d = decompose(e);
  const ComplexMatrix g_half = principal_sqrt(hermitian_part(d.vectors.adjoint() * d.vectors));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < e.size(); ++i) {
    const auto eig = hermitian_eig(block_view(g_half, e.profile, i, i));
    lo = std::min(lo, eig.values.minCoeff());
    hi = std::max(hi, eig.values.maxCoeff());
  }
  return hi - lo <= tol;
}

AlignedPureDecomposition aligned_pure_decomposition(const Ensemble& e, const SolverSolution& sol,
                                                    const PureDecomposition& d) {
  const auto& profile = sol.profile;
  if (!(e.profile == profile) || !(d.profile == profile)) {
    throw MedError(ErrorKind::ProfileMismatch, "ensemble, decomposition and solution disagree");
  }
  const int n = profile.dim();
  std::vector<ComplexMatrix> unitaries;
  for (int i = 0; i < profile.blocks(); ++i) {
    unitaries.push_back(hermitian_eig(block_view(sol.d, profile, i, i)).vectors);
  }
  const ComplexMatrix u = assemble_block_diagonal(unitaries, profile);

  AlignedPureDecomposition out;
  out.block_unitary = u;
  out.diagonal_d = u.adjoint() * sol.d * u;
  out.vectors = PureDecomposition{profile, d.vectors * u};

  const ComplexMatrix basis = optimal_basis(sol, d) * u;
  const RankProfile ones(std::vector<int>(n, 1));
  out.pure.profile = ones;
  out.rank_one.profile = ones;
  for (int k = 0; k < n; ++k) {
    const ComplexVector v = out.vectors.vectors.col(k);
    const double lam = v.squaredNorm();
    out.pure.priors.push_back(lam);
    out.pure.states.push_back(v * v.adjoint() / lam);
    const ComplexVector w = basis.col(k);
    out.rank_one.elements.push_back(w * w.adjoint());
  }
  return out;
}

}  // namespace medsolve
