#include "medsolve/gram.hpp"

#include <algorithm>
#include <cmath>

namespace medsolve {

GramMatrix build_gram(const PureDecomposition& d, double tol) {
  const int n = d.profile.dim();
  if (d.vectors.rows() != n || d.vectors.cols() != n) {
    throw MedError(ErrorKind::ShapeMismatch, "decomposition does not match its profile");
  }
  GramMatrix g{d.profile, hermitian_part(d.vectors.adjoint() * d.vectors)};
  const double lo = min_eigenvalue(g.matrix);
  if (lo <= tol * std::max(1.0, g.matrix.norm())) {
    throw MedError(ErrorKind::NotPositiveDefinite,
                   "decomposition vectors are linearly dependent (min eigenvalue " +
                       std::to_string(lo) + ")");
  }
  return g;
}

DualBasis dual_basis(const PureDecomposition& d, const GramMatrix& g) {
  if (!(d.profile == g.profile)) throw MedError(ErrorKind::ProfileMismatch, "profiles differ");
  Eigen::LLT<ComplexMatrix> llt(g.matrix);
  if (llt.info() != Eigen::Success) {
    throw MedError(ErrorKind::NotPositiveDefinite, "Gram matrix is singular");
  }
  // u = Psi G^{-1}; G is Hermitian so G^{-1} = (G^{-1})^dagger.
  const ComplexMatrix ginv = llt.solve(ComplexMatrix::Identity(g.matrix.rows(), g.matrix.cols()));
  return DualBasis{d.profile, d.vectors * ginv};
}

GramMatrix homotopy_path(const GramMatrix& g0, const GramMatrix& g1, double t) {
  if (!(g0.profile == g1.profile)) throw MedError(ErrorKind::ProfileMismatch, "profiles differ");
  return GramMatrix{g0.profile, (1.0 - t) * g0.matrix + t * g1.matrix};
}

int interval_count(const GramMatrix& g0, const GramMatrix& g1) {
  if (!(g0.profile == g1.profile)) throw MedError(ErrorKind::ProfileMismatch, "profiles differ");
  const double n = g0.profile.dim();
  const double raw = std::ceil((g0.matrix - g1.matrix).norm() * n * n);
  return std::max(1, static_cast<int>(raw));
}

}  // namespace medsolve
