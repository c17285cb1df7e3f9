#pragma once

#include "medsolve/ensemble.hpp"

namespace medsolve {

/// Inner-product matrix G^{(l i)}_{k j} = <psi_lk | psi_ij> of a pure decomposition,
/// in the same two-tier order as the decomposition columns.
struct GramMatrix {
  RankProfile profile;
  ComplexMatrix matrix;

  double trace() const { return matrix.trace().real(); }
  ComplexMatrix normalized() const { return matrix / trace(); }
};

/// Biorthogonal partner set: <psi_i1j1 | u_i2j2> = delta delta. Columns in two-tier order.
struct DualBasis {
  RankProfile profile;
  ComplexMatrix vectors;
};

GramMatrix build_gram(const PureDecomposition& d, double tol = kDefaultTol);
DualBasis dual_basis(const PureDecomposition& d, const GramMatrix& g);

/// Linear path G(t) = (1 - t) G0 + t G1.
GramMatrix homotopy_path(const GramMatrix& g0, const GramMatrix& g1, double t);

/// ceil(||G0 - G1||_F * n^2), clamped below at 1.
int interval_count(const GramMatrix& g0, const GramMatrix& g1);

}  // namespace medsolve
