#include "medsolve/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace medsolve {

ComplexMatrix Ensemble::average() const {
  ComplexMatrix s = ComplexMatrix::Zero(dim(), dim());
  for (int i = 0; i < size(); ++i) s += weighted(i);
  return s;
}

Ensemble Ensemble::from_states(std::vector<double> priors, std::vector<ComplexMatrix> states) {
  if (states.empty()) throw MedError(ErrorKind::InvalidEnsemble, "no states");
  if (priors.size() != states.size()) {
    throw MedError(ErrorKind::ShapeMismatch, "prior count does not match state count");
  }
  const Eigen::Index n = states.front().rows();
  std::vector<int> ranks;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].rows() != n || states[i].cols() != n) {
      throw MedError(ErrorKind::ShapeMismatch, "state " + std::to_string(i) + " is not " +
                                                   std::to_string(n) + "x" + std::to_string(n));
    }
    ranks.push_back(numerical_rank(states[i]));
  }
  for (std::size_t i = 1; i < ranks.size(); ++i) {
    if (ranks[i] > ranks[i - 1]) {
      throw MedError(ErrorKind::InvalidEnsemble,
                     "states must be ordered by non-increasing rank (state " + std::to_string(i) +
                         " has rank " + std::to_string(ranks[i]) + ")");
    }
  }
  if (std::find(ranks.begin(), ranks.end(), 0) != ranks.end()) {
    throw MedError(ErrorKind::InvalidEnsemble, "zero state");
  }
  const int total = std::accumulate(ranks.begin(), ranks.end(), 0);
  if (total != n) {
    throw MedError(ErrorKind::InvalidEnsemble, "state ranks sum to " + std::to_string(total) +
                                                   " but the dimension is " + std::to_string(n));
  }
  return Ensemble{RankProfile(std::move(ranks)), std::move(priors), std::move(states)};
}

MembershipReport validate(const Ensemble& e, double tol) {
  MembershipReport rep;
  const int n = e.dim();
  auto fail = [&rep](std::string msg) { rep.failures.push_back(std::move(msg)); };

  if (static_cast<int>(e.priors.size()) != e.size() ||
      static_cast<int>(e.states.size()) != e.size()) {
    fail("shape: prior/state count does not match profile");
    return rep;
  }
  const double total = std::accumulate(e.priors.begin(), e.priors.end(), 0.0);
  rep.prior_sum_residual = std::abs(total - 1.0);
  rep.min_prior = *std::min_element(e.priors.begin(), e.priors.end());
  if (rep.prior_sum_residual > tol) fail("priors: sum differs from 1");
  if (rep.min_prior <= 0.0) fail("priors: non-positive prior");

  rep.min_state_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 0; i < e.size(); ++i) {
    const auto& rho = e.states[i];
    if (rho.rows() != n || rho.cols() != n) {
      fail("shape: state " + std::to_string(i) + " has wrong size");
      return rep;
    }
    rep.max_hermiticity_residual = std::max(rep.max_hermiticity_residual, hermiticity_residual(rho));
    rep.min_state_eigenvalue = std::min(rep.min_state_eigenvalue, min_eigenvalue(rho));
    rep.max_trace_residual = std::max(rep.max_trace_residual, std::abs(rho.trace() - Complex(1.0)));
    const int rank = numerical_rank(hermitian_part(rho));
    rep.numerical_ranks.push_back(rank);
    if (rank != e.profile.rank(i)) fail("rank: state " + std::to_string(i) + " rank mismatch");
  }
  if (rep.max_hermiticity_residual > tol) fail("hermiticity: state not Hermitian");
  if (rep.min_state_eigenvalue < -tol) fail("positivity: negative eigenvalue");
  if (rep.max_trace_residual > tol) fail("trace: state trace differs from 1");

  if (rep.failures.empty()) {
    // Stack the eigen-resolution of every state; full rank means the supports are
    // linearly independent and span the space.
    ComplexMatrix stacked(n, n);
    for (int i = 0; i < e.size(); ++i) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian_part(e.weighted(i)));
      const int r = e.profile.rank(i);
      for (int k = 0; k < r; ++k) {
        const double lam = std::max(eig.eigenvalues()(n - 1 - k), 0.0);
        stacked.col(e.profile.offset(i) + k) = std::sqrt(lam) * eig.eigenvectors().col(n - 1 - k);
      }
    }
    rep.span_rank = numerical_rank(stacked);
    if (rep.span_rank != n) fail("independence: supports are linearly dependent");
  }
  rep.passed = rep.failures.empty();
  return rep;
}

Ensemble congruence_ensemble(const RankProfile& profile, const ComplexMatrix& t) {
  const int n = profile.dim();
  if (t.rows() != n || t.cols() != n) {
    throw MedError(ErrorKind::ShapeMismatch, "transform does not match profile dimension");
  }
  std::vector<ComplexMatrix> images;
  std::vector<double> traces;
  for (int i = 0; i < profile.blocks(); ++i) {
    const ComplexMatrix seed = block_selector(profile, i) / static_cast<double>(profile.rank(i));
    ComplexMatrix image = hermitian_part(t * seed * t.adjoint());
    traces.push_back(image.trace().real());
    images.push_back(std::move(image));
  }
  const double total = std::accumulate(traces.begin(), traces.end(), 0.0);
  Ensemble e{profile, {}, {}};
  for (int i = 0; i < profile.blocks(); ++i) {
    e.priors.push_back(traces[i] / total);
    e.states.push_back(images[i] / traces[i]);
  }
  return e;
}

Ensemble random_ensemble(const RankProfile& profile, std::uint64_t seed) {
  const int n = profile.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (int attempt = 0; attempt < 100; ++attempt) {
    ComplexMatrix t(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) t(r, c) = Complex(normal(rng), normal(rng));
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(t);
    const auto& s = svd.singularValues();
    if (s(n - 1) > 0.0 && s(0) / s(n - 1) <= 1e6) return congruence_ensemble(profile, t);
  }
  throw MedError(ErrorKind::DegenerateDraw, "no well-conditioned transform in 100 draws");
}

PureDecomposition decompose(const Ensemble& e) {
  const int n = e.dim();
  PureDecomposition d{e.profile, ComplexMatrix(n, n)};
  for (int i = 0; i < e.size(); ++i) {
    const int r = e.profile.rank(i);
    const int rank = numerical_rank(e.states[i]);
    if (rank != r) {
      throw MedError(ErrorKind::RankMismatch, "state " + std::to_string(i) + " has rank " +
                                                  std::to_string(rank) + ", expected " +
                                                  std::to_string(r));
    }
    auto eig = hermitian_eig(e.states[i]);
    // Largest eigenvalues first.
    for (int k = 0; k < r; ++k) {
      const double lam = std::max(eig.values(n - 1 - k), 0.0);
      d.vectors.col(e.profile.offset(i) + k) =
          std::sqrt(e.priors[i] * lam) * eig.vectors.col(n - 1 - k);
    }
  }
  return d;
}

Ensemble recompose(const PureDecomposition& d) {
  Ensemble e{d.profile, {}, {}};
  for (int i = 0; i < d.profile.blocks(); ++i) {
    const ComplexMatrix cols = d.block_columns(i);
    const ComplexMatrix weighted = cols * cols.adjoint();
    const double p = weighted.trace().real();
    e.priors.push_back(p);
    e.states.push_back(weighted / p);
  }
  return e;
}

double success_probability(const Ensemble& e, const Povm& povm) {
  if (static_cast<int>(povm.elements.size()) != e.size()) {
    throw MedError(ErrorKind::ShapeMismatch, "POVM has " + std::to_string(povm.elements.size()) +
                                                 " elements for " + std::to_string(e.size()) +
                                                 " states");
  }
  double ps = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    if (povm.elements[i].rows() != e.dim() || povm.elements[i].cols() != e.dim()) {
      throw MedError(ErrorKind::ShapeMismatch, "POVM element has wrong size");
    }
    ps += e.priors[i] * (e.states[i] * povm.elements[i]).trace().real();
  }
  return ps;
}

double error_probability(const Ensemble& e, const Povm& povm) {
  return 1.0 - success_probability(e, povm);
}

double ensemble_distance(const Ensemble& a, const Ensemble& b) {
  if (!(a.profile == b.profile)) {
    throw MedError(ErrorKind::ProfileMismatch, "ensembles have different rank profiles");
  }
  double total_sq = 0.0;
  int start = 0;
  while (start < a.size()) {
    int end = start;
    while (end < a.size() && a.profile.rank(end) == a.profile.rank(start)) ++end;
    std::vector<int> perm(end - start);
    std::iota(perm.begin(), perm.end(), start);
    double best = std::numeric_limits<double>::infinity();
    do {
      double sq = 0.0;
      for (int k = start; k < end; ++k) {
        sq += (a.weighted(k) - b.weighted(perm[k - start])).squaredNorm();
      }
      best = std::min(best, sq);
    } while (std::next_permutation(perm.begin(), perm.end()));
    total_sq += best;
    start = end;
  }
  return std::sqrt(total_sq);
}

Ensemble rotate(const Ensemble& e, const ComplexMatrix& u) {
  Ensemble out = e;
  for (auto& rho : out.states) rho = u * rho * u.adjoint();
  return out;
}

Povm rotate(const Povm& povm, const ComplexMatrix& u) {
  Povm out = povm;
  for (auto& el : out.elements) el = u * el * u.adjoint();
  return out;
}

}  // namespace medsolve
