#include "medsolve/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace medsolve {

RankProfile::RankProfile(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  if (ranks_.empty()) throw MedError(ErrorKind::InvalidProfile, "empty rank profile");
  offsets_.reserve(ranks_.size());
  for (std::size_t i = 0; i < ranks_.size(); ++i) {
    if (ranks_[i] < 1) {
      throw MedError(ErrorKind::InvalidProfile, "rank " + std::to_string(ranks_[i]) + " < 1");
    }
    if (i > 0 && ranks_[i] > ranks_[i - 1]) {
      throw MedError(ErrorKind::InvalidProfile, "ranks must be non-increasing");
    }
    offsets_.push_back(dim_);
    dim_ += ranks_[i];
  }
}

int RankProfile::block_diagonal_params() const {
  int total = 0;
  for (int r : ranks_) total += r * r;
  return total;
}

int flat_index(const RankProfile& profile, BlockIndex index) {
  if (index.block < 0 || index.block >= profile.blocks() || index.inner < 0 ||
      index.inner >= profile.rank(index.block)) {
    throw MedError(ErrorKind::IndexOutOfRange, "block index out of range");
  }
  return profile.offset(index.block) + index.inner;
}

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw MedError(ErrorKind::ShapeMismatch, "matrix is not square");
  return (m - m.adjoint()).norm();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

namespace {

void fix_phases(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      // Strict comparison with a small slack keeps the choice stable under round-off.
      if (a > best_abs * (1.0 + 1e-12)) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs > 0.0) vectors.col(c) *= std::conj(vectors(best, c)) / best_abs;
  }
}

double scaled_tol(const ComplexMatrix& m, double tol) { return tol * std::max(1.0, m.norm()); }

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw MedError(ErrorKind::ShapeMismatch, "matrix is not square");
  const double asym = hermiticity_residual(m);
  if (asym > scaled_tol(m, tol)) {
    throw MedError(ErrorKind::NotHermitian, "symmetry residual " + std::to_string(asym));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  fix_phases(out.vectors);
  return out;
}

ComplexMatrix principal_sqrt(const ComplexMatrix& m, double tol) {
  auto eig = hermitian_eig(m, tol);
  const double floor = scaled_tol(m, tol);
  RealVector roots(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double v = eig.values(k);
    if (v < -floor) {
      throw MedError(ErrorKind::NotPositiveSemidefinite, "eigenvalue " + std::to_string(v));
    }
    roots(k) = std::sqrt(std::max(v, 0.0));
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix inverse_sqrt(const ComplexMatrix& m, double tol) {
  auto eig = hermitian_eig(m, tol);
  RealVector roots(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double v = eig.values(k);
    if (v <= tol * std::max(1.0, eig.values.cwiseAbs().maxCoeff())) {
      throw MedError(ErrorKind::NotPositiveDefinite, "eigenvalue " + std::to_string(v));
    }
    roots(k) = 1.0 / std::sqrt(v);
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool is_positive_definite(const ComplexMatrix& m, double tol) {
  if (hermiticity_residual(m) > scaled_tol(m, tol)) return false;
  return min_eigenvalue(m) > tol;
}

int numerical_rank(const ComplexMatrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double cutoff = s(0) * static_cast<double>(std::max(m.rows(), m.cols())) * kRankEps;
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cutoff) ++rank;
  }
  return rank;
}

ComplexMatrix polar_unitary(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix block_view(const ComplexMatrix& m, const RankProfile& profile, int i, int j) {
  if (m.rows() != profile.dim() || m.cols() != profile.dim()) {
    throw MedError(ErrorKind::ShapeMismatch, "matrix does not match profile dimension");
  }
  if (i < 0 || j < 0 || i >= profile.blocks() || j >= profile.blocks()) {
    throw MedError(ErrorKind::IndexOutOfRange, "block (" + std::to_string(i) + "," +
                                                   std::to_string(j) + ") out of range");
  }
  return m.block(profile.offset(i), profile.offset(j), profile.rank(i), profile.rank(j));
}

ComplexMatrix assemble_block_diagonal(std::span<const ComplexMatrix> blocks,
                                      const RankProfile& profile) {
  if (static_cast<int>(blocks.size()) != profile.blocks()) {
    throw MedError(ErrorKind::ShapeMismatch, "block count does not match profile");
  }
  ComplexMatrix out = ComplexMatrix::Zero(profile.dim(), profile.dim());
  for (int i = 0; i < profile.blocks(); ++i) {
    const int r = profile.rank(i);
    if (blocks[i].rows() != r || blocks[i].cols() != r) {
      throw MedError(ErrorKind::ShapeMismatch, "block " + std::to_string(i) + " is not " +
                                                   std::to_string(r) + "x" + std::to_string(r));
    }
    out.block(profile.offset(i), profile.offset(i), r, r) = blocks[i];
  }
  return out;
}

ComplexMatrix block_diagonal_part(const ComplexMatrix& m, const RankProfile& profile) {
  const auto blocks = diagonal_blocks(m, profile);
  return assemble_block_diagonal(blocks, profile);
}

std::vector<ComplexMatrix> diagonal_blocks(const ComplexMatrix& m, const RankProfile& profile) {
  std::vector<ComplexMatrix> out;
  out.reserve(profile.blocks());
  for (int i = 0; i < profile.blocks(); ++i) out.push_back(block_view(m, profile, i, i));
  return out;
}

ComplexMatrix block_selector(const RankProfile& profile, int block) {
  ComplexMatrix e = ComplexMatrix::Zero(profile.dim(), profile.dim());
  const int off = profile.offset(block);
  for (int k = 0; k < profile.rank(block); ++k) e(off + k, off + k) = 1.0;
  return e;
}

void hermitian_to_coords(const ComplexMatrix& h, double* out) {
  const Eigen::Index r = h.rows();
  Eigen::Index p = 0;
  for (Eigen::Index a = 0; a < r; ++a) out[p++] = h(a, a).real();
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = a + 1; b < r; ++b) {
      out[p++] = h(a, b).real();
      out[p++] = h(a, b).imag();
    }
  }
}

ComplexMatrix hermitian_from_coords(const double* in, int r) {
  ComplexMatrix h(r, r);
  int p = 0;
  for (int a = 0; a < r; ++a) h(a, a) = in[p++];
  for (int a = 0; a < r; ++a) {
    for (int b = a + 1; b < r; ++b) {
      h(a, b) = Complex(in[p], in[p + 1]);
      h(b, a) = std::conj(h(a, b));
      p += 2;
    }
  }
  return h;
}

RealVector block_diagonal_to_coords(const ComplexMatrix& d, const RankProfile& profile) {
  RealVector x(profile.block_diagonal_params());
  int p = 0;
  for (int i = 0; i < profile.blocks(); ++i) {
    const int r = profile.rank(i);
    hermitian_to_coords(d.block(profile.offset(i), profile.offset(i), r, r), x.data() + p);
    p += r * r;
  }
  return x;
}

ComplexMatrix block_diagonal_from_coords(const RealVector& x, const RankProfile& profile) {
  if (x.size() != profile.block_diagonal_params()) {
    throw MedError(ErrorKind::ShapeMismatch, "coordinate vector length mismatch");
  }
  ComplexMatrix d = ComplexMatrix::Zero(profile.dim(), profile.dim());
  int p = 0;
  for (int i = 0; i < profile.blocks(); ++i) {
    const int r = profile.rank(i);
    d.block(profile.offset(i), profile.offset(i), r, r) = hermitian_from_coords(x.data() + p, r);
    p += r * r;
  }
  return d;
}

}  // namespace medsolve
