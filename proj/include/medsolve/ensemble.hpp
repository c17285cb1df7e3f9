#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medsolve/linalg.hpp"

namespace medsolve {

/// Weighted set of density matrices {p_i, rho_i} whose supports are linearly
/// independent and span the space. States are ordered by non-increasing rank.
struct Ensemble {
  RankProfile profile;
  std::vector<double> priors;
  std::vector<ComplexMatrix> states;

  int dim() const { return profile.dim(); }
  int size() const { return profile.blocks(); }
  /// p_i * rho_i
  ComplexMatrix weighted(int i) const { return priors.at(i) * states.at(i); }
  ComplexMatrix average() const;

  /// Builds an ensemble, reading the rank profile off the numerical ranks of the states.
  static Ensemble from_states(std::vector<double> priors, std::vector<ComplexMatrix> states);
};

/// Unnormalized vectors |psi_ij> stored as the columns of an n x n matrix in
/// two-tier order: block i occupies columns offset(i) .. offset(i) + r_i - 1.
struct PureDecomposition {
  RankProfile profile;
  ComplexMatrix vectors;

  ComplexVector vector(BlockIndex index) const {
    return vectors.col(flat_index(profile, index));
  }
  ComplexMatrix block_columns(int i) const {
    return vectors.middleCols(profile.offset(i), profile.rank(i));
  }
};

struct Povm {
  RankProfile profile;
  std::vector<ComplexMatrix> elements;
};

struct MembershipReport {
  bool passed = false;
  std::vector<std::string> failures;
  double prior_sum_residual = 0.0;
  double min_prior = 0.0;
  double max_hermiticity_residual = 0.0;
  double min_state_eigenvalue = 0.0;
  double max_trace_residual = 0.0;
  std::vector<int> numerical_ranks;
  int span_rank = 0;
};

MembershipReport validate(const Ensemble& e, double tol = 1e-8);

/// Congruence image T P T^dagger of the fixed orthogonal seed set for the profile
/// (maximally mixed states on disjoint coordinate blocks).
Ensemble congruence_ensemble(const RankProfile& profile, const ComplexMatrix& t);

/// Random member of the ensemble space: T has i.i.d. complex standard normal entries and
/// is re-drawn while its condition number exceeds 1e6.
Ensemble random_ensemble(const RankProfile& profile, std::uint64_t seed);

/// Resolution |psi_ij> = sqrt(p_i lambda_ij) |v_ij> over the nonzero eigenpairs of rho_i.
PureDecomposition decompose(const Ensemble& e);
Ensemble recompose(const PureDecomposition& d);

double success_probability(const Ensemble& e, const Povm& povm);
double error_probability(const Ensemble& e, const Povm& povm);

/// Frobenius distance between ensembles (sum over p_i rho_i), minimized over
/// permutations among states of equal rank.
double ensemble_distance(const Ensemble& a, const Ensemble& b);

/// Conjugates every state (or POVM element) by a unitary.
Ensemble rotate(const Ensemble& e, const ComplexMatrix& u);
Povm rotate(const Povm& povm, const ComplexMatrix& u);

}  // namespace medsolve
