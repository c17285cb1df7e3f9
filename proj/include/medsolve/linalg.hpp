#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "medsolve/errors.hpp"

namespace medsolve {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Hermiticity and eigenvalue-negativity tolerance used when callers do not pass one.
inline constexpr double kDefaultTol = 1e-10;

/// Relative singular-value cutoff: sigma < sigma_max * n * kRankEps counts as zero.
inline constexpr double kRankEps = 1e-12;

/// Ordered block sizes (r_1, ..., r_m), non-increasing, summing to the space dimension.
class RankProfile {
 public:
  RankProfile() = default;
  explicit RankProfile(std::vector<int> ranks);

  int blocks() const { return static_cast<int>(ranks_.size()); }
  int dim() const { return dim_; }
  int rank(int block) const { return ranks_.at(block); }
  int offset(int block) const { return offsets_.at(block); }
  const std::vector<int>& ranks() const { return ranks_; }

  /// Number of real parameters of a Hermitian block-diagonal matrix (sum of r_i^2).
  int block_diagonal_params() const;

  bool operator==(const RankProfile& other) const { return ranks_ == other.ranks_; }

 private:
  std::vector<int> ranks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

/// Two-tier index: state block and position inside that block (both zero based).
struct BlockIndex {
  int block = 0;
  int inner = 0;
};

int flat_index(const RankProfile& profile, BlockIndex index);

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns, largest-magnitude component real positive
};

double hermiticity_residual(const ComplexMatrix& m);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

EigenDecomposition hermitian_eig(const ComplexMatrix& m, double tol = kDefaultTol);

/// Unique positive semidefinite square root; eigenvalues in [-tol, 0] are clamped to zero.
ComplexMatrix principal_sqrt(const ComplexMatrix& m, double tol = kDefaultTol);

/// Inverse of the principal square root. Requires every eigenvalue above tol.
ComplexMatrix inverse_sqrt(const ComplexMatrix& m, double tol = kDefaultTol);

double min_eigenvalue(const ComplexMatrix& m);
bool is_positive_definite(const ComplexMatrix& m, double tol = kDefaultTol);

int numerical_rank(const ComplexMatrix& m);

/// Unitary factor U of the polar decomposition A = U P.
ComplexMatrix polar_unitary(const ComplexMatrix& a);

ComplexMatrix block_view(const ComplexMatrix& m, const RankProfile& profile, int i, int j);
ComplexMatrix assemble_block_diagonal(std::span<const ComplexMatrix> blocks,
                                      const RankProfile& profile);
/// Keeps the diagonal blocks of m and zeroes everything else.
ComplexMatrix block_diagonal_part(const ComplexMatrix& m, const RankProfile& profile);
std::vector<ComplexMatrix> diagonal_blocks(const ComplexMatrix& m, const RankProfile& profile);

/// Projector onto the coordinates of one block.
ComplexMatrix block_selector(const RankProfile& profile, int block);

// Real coordinates of Hermitian matrices: per r x r block, the r real diagonal entries
// followed by (re, im) of each strictly upper entry in row-major order.
void hermitian_to_coords(const ComplexMatrix& h, double* out);
ComplexMatrix hermitian_from_coords(const double* in, int r);

RealVector block_diagonal_to_coords(const ComplexMatrix& d, const RankProfile& profile);
ComplexMatrix block_diagonal_from_coords(const RealVector& x, const RankProfile& profile);

}  // namespace medsolve
