#include "medsolve/certificates.hpp"

#include <algorithm>
#include <limits>

namespace medsolve {

ProjectivityResiduals check_projective(const Povm& povm, const RankProfile& profile) {
  const int m = profile.blocks();
  const int n = profile.dim();
  if (static_cast<int>(povm.elements.size()) != m) {
    throw MedError(ErrorKind::ShapeMismatch, "POVM size does not match profile");
  }
  ProjectivityResiduals out;
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    const auto& pi = povm.elements[i];
    if (pi.rows() != n || pi.cols() != n) {
      throw MedError(ErrorKind::ShapeMismatch, "POVM element has wrong size");
    }
    total += pi;
    for (int j = 0; j < m; ++j) {
      ComplexMatrix prod = pi * povm.elements[j];
      if (i == j) prod -= pi;
      out.projectivity = std::max(out.projectivity, prod.norm());
    }
    const int rank = numerical_rank(pi);
    out.ranks.push_back(rank);
    out.rank_ok.push_back(rank == profile.rank(i));
  }
  out.completeness = (total - ComplexMatrix::Identity(n, n)).norm();
  return out;
}

ZOperator compute_z(const Ensemble& e, const Povm& povm) {
  if (static_cast<int>(povm.elements.size()) != e.size()) {
    throw MedError(ErrorKind::ShapeMismatch, "POVM size does not match ensemble");
  }
  ComplexMatrix z = ComplexMatrix::Zero(e.dim(), e.dim());
  for (int i = 0; i < e.size(); ++i) z += e.weighted(i) * povm.elements[i];
  const double asym = (z - z.adjoint()).norm();
  return ZOperator{std::move(z), asym};
}

Certificate check_optimal(const Ensemble& e, const Povm& povm, double tol, double eig_margin) {
  Certificate cert;
  const auto proj = check_projective(povm, e.profile);
  cert.projectivity_residual = proj.projectivity;
  cert.completeness_residual = proj.completeness;
  cert.rank_ok = proj.rank_ok;

  for (int i = 0; i < e.size(); ++i) {
    for (int j = 0; j < e.size(); ++j) {
      const ComplexMatrix s =
          povm.elements[j] * (e.weighted(j) - e.weighted(i)) * povm.elements[i];
      cert.stationarity_residual = std::max(cert.stationarity_residual, s.norm());
    }
  }

  const auto zop = compute_z(e, povm);
  const ComplexMatrix zh = hermitian_part(zop.z);
  cert.z_min_eigenvalue = min_eigenvalue(zh);
  cert.global_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 0; i < e.size(); ++i) {
    cert.global_min_eigenvalue = std::min(cert.global_min_eigenvalue,
                                          min_eigenvalue(zh - e.weighted(i)));
  }
  cert.p_success = success_probability(e, povm);

  const bool ranks = std::all_of(cert.rank_ok.begin(), cert.rank_ok.end(), [](bool b) { return b; });
  cert.passed = cert.projectivity_residual <= tol && cert.completeness_residual <= tol && ranks &&
                cert.stationarity_residual <= tol && cert.z_min_eigenvalue > eig_margin &&
                cert.global_min_eigenvalue >= -tol;
  return cert;
}

DualValue dual_objective(const Ensemble& e, const ComplexMatrix& z) {
  const ComplexMatrix zh = hermitian_part(z);
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < e.size(); ++i) margin = std::min(margin, min_eigenvalue(zh - e.weighted(i)));
  return DualValue{zh.trace().real(), margin};
}

}  // namespace medsolve
