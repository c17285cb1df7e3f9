#pragma once

// Reference computations that avoid the code paths under test.

#include <cmath>
#include <random>

#include "medsolve/ensemble.hpp"

namespace oracle {

using medsolve::Complex;
using medsolve::ComplexMatrix;
using medsolve::ComplexVector;
using medsolve::Ensemble;
using medsolve::RankProfile;

// Denman-Beavers iteration; converges to the principal root of a positive definite matrix.
inline ComplexMatrix db_sqrt(const ComplexMatrix& a) {
  const auto n = a.rows();
  ComplexMatrix y = a;
  ComplexMatrix z = ComplexMatrix::Identity(n, n);
  for (int k = 0; k < 100; ++k) {
    const ComplexMatrix yi = y.inverse();
    const ComplexMatrix zi = z.inverse();
    const ComplexMatrix y_next = 0.5 * (y + zi);
    z = 0.5 * (z + yi);
    const double change = (y_next - y).norm();
    y = y_next;
    if (change <= 1e-15 * y.norm()) break;
  }
  return 0.5 * (y + y.adjoint());
}

inline ComplexMatrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix a(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) a(r, c) = Complex(normal(rng), normal(rng));
  }
  return a;
}

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const ComplexMatrix a = gaussian(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(n, n, rng));
  return qr.householderQ();
}

inline ComplexMatrix block_diag_unitary(const RankProfile& p, std::mt19937_64& rng) {
  ComplexMatrix u = ComplexMatrix::Zero(p.dim(), p.dim());
  for (int i = 0; i < p.blocks(); ++i) {
    u.block(p.offset(i), p.offset(i), p.rank(i), p.rank(i)) = random_unitary(p.rank(i), rng);
  }
  return u;
}

// Ensemble from stacked unnormalized vectors: p_i rho_i = sum_j |psi_ij><psi_ij|.
inline Ensemble from_vectors(const RankProfile& p, const ComplexMatrix& psi) {
  const double total = psi.squaredNorm();
  Ensemble e{p, {}, {}};
  for (int i = 0; i < p.blocks(); ++i) {
    const ComplexMatrix cols = psi.middleCols(p.offset(i), p.rank(i)) / std::sqrt(total);
    ComplexMatrix w = cols * cols.adjoint();
    w = 0.5 * (w + w.adjoint());
    const double prior = w.trace().real();
    e.priors.push_back(prior);
    e.states.push_back(w / prior);
  }
  return e;
}

// Gram matrix S^2 with S = I + strength * (Hermitian, zero on diagonal blocks): the diagonal
// blocks of G^{1/2} are all proportional to the identity.
inline Ensemble pgm_optimal_ensemble(const RankProfile& p, std::mt19937_64& rng,
                                     double strength = 0.15) {
  const int n = p.dim();
  ComplexMatrix h = random_hermitian(n, rng);
  for (int i = 0; i < p.blocks(); ++i) {
    h.block(p.offset(i), p.offset(i), p.rank(i), p.rank(i)).setZero();
  }
  h /= h.norm();
  const ComplexMatrix s = ComplexMatrix::Identity(n, n) + strength * h;
  return from_vectors(p, random_unitary(n, rng) * s);
}

// Pure pair with priors (p, 1-p) and real overlap gamma.
inline Ensemble pure_pair(double p, double gamma) {
  ComplexVector a(2), b(2);
  a << 1.0, 0.0;
  b << gamma, std::sqrt(1.0 - gamma * gamma);
  return Ensemble{RankProfile({1, 1}), {p, 1.0 - p}, {a * a.adjoint(), b * b.adjoint()}};
}

// Optimal success probability of a pure pair: (1 + sqrt(1 - 4 p1 p2 |gamma|^2)) / 2.
inline double pure_pair_success(double p, double gamma) {
  return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * p * (1.0 - p) * gamma * gamma));
}

// Orthogonal ensemble: maximally mixed states on consecutive coordinate blocks.
inline Ensemble orthogonal_ensemble(const RankProfile& p, std::vector<double> priors) {
  Ensemble e{p, std::move(priors), {}};
  for (int i = 0; i < p.blocks(); ++i) {
    ComplexMatrix s = ComplexMatrix::Zero(p.dim(), p.dim());
    for (int k = 0; k < p.rank(i); ++k) s(p.offset(i) + k, p.offset(i) + k) = 1.0 / p.rank(i);
    e.states.push_back(s);
  }
  return e;
}

inline ComplexMatrix support_projector(const RankProfile& p, int i) {
  ComplexMatrix s = ComplexMatrix::Zero(p.dim(), p.dim());
  for (int k = 0; k < p.rank(i); ++k) s(p.offset(i) + k, p.offset(i) + k) = 1.0;
  return s;
}

inline double max_element_distance(const std::vector<ComplexMatrix>& a,
                                   const std::vector<ComplexMatrix>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).norm());
  return worst;
}

}  // namespace oracle
