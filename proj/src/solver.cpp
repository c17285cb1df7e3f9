#include "medsolve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace medsolve {

namespace {

constexpr double kMinStep = 1.0 / (1 << 20);

// Spectral data of A = D G D used for the root and its Frechet derivative.
struct RootData {
  ComplexMatrix vectors;
  RealVector roots;
};

RootData root_data(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian_part(a));
  const RealVector& lam = eig.eigenvalues();
  if (lam(0) <= 0.0) {
    throw MedError(ErrorKind::NotPositiveDefinite,
                   "D G D has eigenvalue " + std::to_string(lam(0)));
  }
  return RootData{eig.eigenvectors(), lam.cwiseSqrt()};
}

ComplexMatrix root_from(const RootData& rd) {
  return rd.vectors * rd.roots.asDiagonal() * rd.vectors.adjoint();
}

// Solves M X + X M = dA for X with M = V diag(s) V^dagger.
ComplexMatrix root_derivative(const RootData& rd, const ComplexMatrix& da) {
  ComplexMatrix c = rd.vectors.adjoint() * da * rd.vectors;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) /= rd.roots(i) + rd.roots(j);
  }
  return rd.vectors * c * rd.vectors.adjoint();
}

bool blocks_positive(const ComplexMatrix& d, const RankProfile& profile, double floor) {
  for (int i = 0; i < profile.blocks(); ++i) {
    if (min_eigenvalue(block_view(d, profile, i, i)) <= floor) return false;
  }
  return true;
}

void check_square_gram(const GramMatrix& g) {
  if (g.matrix.rows() != g.profile.dim() || g.matrix.cols() != g.profile.dim()) {
    throw MedError(ErrorKind::ShapeMismatch, "Gram matrix does not match profile");
  }
}

// Residual coordinates F(D) = blockdiag(sqrt(DGD)) - D^2.
RealVector residual_coords(const ComplexMatrix& d, const GramMatrix& g, ComplexMatrix* m_out) {
  const ComplexMatrix m = root_from(root_data(d * g.matrix * d));
  const ComplexMatrix f = block_diagonal_part(m - d * d, g.profile);
  if (m_out != nullptr) *m_out = m;
  return block_diagonal_to_coords(hermitian_part(f), g.profile);
}

ComplexMatrix offdiag_from_coords(const double* x, const RankProfile& profile) {
  const int n = profile.dim();
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  int p = 0;
  for (int i = 0; i < profile.blocks(); ++i) {
    for (int j = i + 1; j < profile.blocks(); ++j) {
      for (int a = 0; a < profile.rank(i); ++a) {
        for (int b = 0; b < profile.rank(j); ++b) {
          const Complex v(x[p], x[p + 1]);
          p += 2;
          z(profile.offset(i) + a, profile.offset(j) + b) = v;
          z(profile.offset(j) + b, profile.offset(i) + a) = std::conj(v);
        }
      }
    }
  }
  return z;
}

void offdiag_to_coords(const ComplexMatrix& m, const RankProfile& profile, double* x) {
  int p = 0;
  for (int i = 0; i < profile.blocks(); ++i) {
    for (int j = i + 1; j < profile.blocks(); ++j) {
      for (int a = 0; a < profile.rank(i); ++a) {
        for (int b = 0; b < profile.rank(j); ++b) {
          const Complex v = m(profile.offset(i) + a, profile.offset(j) + b);
          x[p++] = v.real();
          x[p++] = v.imag();
        }
      }
    }
  }
}

}  // namespace

ResidualValue residual(const ComplexMatrix& d, const GramMatrix& g) {
  check_square_gram(g);
  ComplexMatrix m = root_from(root_data(d * g.matrix * d));
  const double value = (block_diagonal_part(m, g.profile) - d * d).norm();
  return ResidualValue{value, std::move(m)};
}

ComplexMatrix default_initial_d(const GramMatrix& g) {
  check_square_gram(g);
  return hermitian_part(block_diagonal_part(principal_sqrt(g.matrix), g.profile));
}

RealMatrix residual_jacobian(const ComplexMatrix& d, const GramMatrix& g) {
  const auto& profile = g.profile;
  const int params = profile.block_diagonal_params();
  const RootData rd = root_data(d * g.matrix * d);
  const ComplexMatrix gd = g.matrix * d;
  const ComplexMatrix dg = d * g.matrix;

  RealMatrix jac(params, params);
  RealVector unit = RealVector::Zero(params);
  for (int k = 0; k < params; ++k) {
    unit.setZero();
    unit(k) = 1.0;
    const ComplexMatrix b = block_diagonal_from_coords(unit, profile);
    const ComplexMatrix da = b * gd + dg * b;
    const ComplexMatrix dm = root_derivative(rd, da);
    const ComplexMatrix df = block_diagonal_part(dm - b * d - d * b, profile);
    jac.col(k) = block_diagonal_to_coords(hermitian_part(df), profile);
  }
  return jac;
}

SolverSolution newton_solve(const GramMatrix& g, const SolverConfig& cfg,
                            const std::optional<ComplexMatrix>& init) {
  check_square_gram(g);
  const auto& profile = g.profile;
  ComplexMatrix d = init ? hermitian_part(*init) : default_initial_d(g);
  if (d.rows() != profile.dim() || d.cols() != profile.dim()) {
    throw MedError(ErrorKind::ShapeMismatch, "initial D does not match profile");
  }
  d = block_diagonal_part(d, profile);
  if (!blocks_positive(d, profile, 0.0)) {
    throw MedError(ErrorKind::NonPositiveIterate, "initial D is not positive definite");
  }

  auto res = residual(d, g);
  int iter = 0;
  while (res.value > cfg.tol) {
    if (iter >= cfg.max_iters) {
      throw MedError(ErrorKind::MaxIterationsExceeded,
                     "residual " + std::to_string(res.value) + " after " +
                         std::to_string(iter) + " iterations");
    }
    ++iter;
    const RealVector f = residual_coords(d, g, nullptr);
    const RealMatrix jac = residual_jacobian(d, g);
    Eigen::FullPivLU<RealMatrix> lu(jac);
    if (!lu.isInvertible()) {
      throw MedError(ErrorKind::SingularLinearSystem, "singular Newton Jacobian");
    }
    const ComplexMatrix step = block_diagonal_from_coords(lu.solve(-f), profile);

    const double floor = kDefaultTol * std::max(1.0, d.norm());
    bool any_positive = false;
    bool accepted = false;
    for (double alpha = 1.0; alpha >= kMinStep; alpha *= cfg.damping) {
      const ComplexMatrix trial = d + alpha * step;
      if (!blocks_positive(trial, profile, floor)) continue;
      any_positive = true;
      const auto trial_res = residual(trial, g);
      if (trial_res.value < (1.0 - 1e-4 * alpha) * res.value) {
        d = trial;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_positive) {
        throw MedError(ErrorKind::NonPositiveIterate,
                       "line search could not keep D positive definite");
      }
      throw MedError(ErrorKind::MaxIterationsExceeded,
                     "line search stalled at residual " + std::to_string(res.value));
    }
  }
  if (min_eigenvalue(res.m) <= 0.0) {
    throw MedError(ErrorKind::NonPositiveIterate, "sqrt(DGD) is not positive definite");
  }
  return SolverSolution{profile, d, res.m, res.value, iter, 0};
}

GramMatrix GramPath::at(double t) const { return homotopy_path(g0, g1, t); }

RealVector solution_coords(const ComplexMatrix& d, const ComplexMatrix& m,
                           const RankProfile& profile) {
  const int bd = profile.block_diagonal_params();
  RealVector x(profile.dim() * profile.dim());
  x.head(bd) = block_diagonal_to_coords(d, profile);
  offdiag_to_coords(m, profile, x.data() + bd);
  return x;
}

ComplexMatrix TaylorCoefficients::evaluate_d(double s) const {
  // Horner
  ComplexMatrix acc = d.back();
  for (int k = static_cast<int>(d.size()) - 2; k >= 0; --k) acc = d[k] + s * acc;
  return hermitian_part(acc);
}

TaylorCoefficients taylor_coefficients(const GramPath& path, double t, const ComplexMatrix& d0,
                                       int order) {
  const auto& profile = path.g0.profile;
  if (!(profile == path.g1.profile)) throw MedError(ErrorKind::ProfileMismatch, "path profiles");
  if (order < 1) throw MedError(ErrorKind::InvalidProfile, "Taylor order must be >= 1");
  const int n = profile.dim();
  const int bd = profile.block_diagonal_params();
  const int unknowns = n * n;

  const ComplexMatrix g = path.at(t).matrix;
  const ComplexMatrix dg = path.slope();
  const ComplexMatrix d = block_diagonal_part(hermitian_part(d0), profile);
  const ComplexMatrix m = root_from(root_data(d * g * d));

  // Linear operator of the top-order unknowns (dD, dZ):
  //   M dN + dN M - (dD G D + D G dD),  dN = blockdiag(D dD + dD D) + offdiag(dZ).
  RealMatrix op(unknowns, unknowns);
  RealVector unit = RealVector::Zero(unknowns);
  ComplexMatrix out(n, n);
  for (int k = 0; k < unknowns; ++k) {
    unit.setZero();
    unit(k) = 1.0;
    const ComplexMatrix dd = block_diagonal_from_coords(unit.head(bd), profile);
    const ComplexMatrix dz = offdiag_from_coords(unit.data() + bd, profile);
    const ComplexMatrix dn = block_diagonal_part(d * dd + dd * d, profile) + dz;
    out = m * dn + dn * m - (dd * g * d + d * g * dd);
    hermitian_to_coords(hermitian_part(out), op.col(k).data());
  }
  Eigen::FullPivLU<RealMatrix> lu(op);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw MedError(ErrorKind::SingularLinearSystem,
                   "continuation system is singular (rcond " + std::to_string(lu.rcond()) + ")");
  }

  TaylorCoefficients tc;
  tc.d.push_back(d);
  tc.m.push_back(m);
  RealVector rhs(unknowns);
  for (int k = 1; k <= order; ++k) {
    // Known part of the t^k coefficient of N^2 - D G(t) D with the order-k unknowns zeroed.
    ComplexMatrix nk = ComplexMatrix::Zero(n, n);
    for (int b = 1; b < k; ++b) nk += tc.d[b] * tc.d[k - b];
    nk = block_diagonal_part(nk, profile);

    ComplexMatrix known = m * nk + nk * m;
    for (int a = 1; a < k; ++a) known += tc.m[a] * tc.m[k - a];
    for (int a = 1; a < k; ++a) known -= tc.d[a] * g * tc.d[k - a];
    for (int a = 0; a <= k - 1; ++a) known -= tc.d[a] * dg * tc.d[k - 1 - a];

    hermitian_to_coords(hermitian_part(known), rhs.data());
    const RealVector x = lu.solve(-rhs);
    const ComplexMatrix dk = block_diagonal_from_coords(x.head(bd), profile);
    const ComplexMatrix zk = offdiag_from_coords(x.data() + bd, profile);
    tc.d.push_back(dk);
    tc.m.push_back(nk + block_diagonal_part(d * dk + dk * d, profile) + zk);
  }
  return tc;
}

std::vector<RealVector> taylor_derivatives(const GramPath& path, double t,
                                           const ComplexMatrix& d, int order) {
  const auto tc = taylor_coefficients(path, t, d, order);
  std::vector<RealVector> out;
  double factorial = 1.0;
  for (int k = 1; k <= order; ++k) {
    factorial *= k;
    out.push_back(factorial * solution_coords(tc.d[k], tc.m[k], path.g0.profile));
  }
  return out;
}

SolverSolution homotopy_solve(const GramMatrix& g_target, const SolverConfig& cfg) {
  check_square_gram(g_target);
  const auto& profile = g_target.profile;
  const GramPath path{GramMatrix{profile, block_diagonal_part(g_target.matrix, profile)},
                      g_target};
  ComplexMatrix d = default_initial_d(path.g0);

  if (path.slope().norm() <= 1e-14 * g_target.matrix.norm()) {
    auto res = residual(d, g_target);
    if (res.value <= cfg.tol) return SolverSolution{profile, d, res.m, res.value, 0, 0};
    return newton_solve(g_target, cfg, d);
  }

  const int intervals = cfg.intervals_override.value_or(interval_count(path.g0, path.g1));
  const double h0 = 1.0 / std::max(1, intervals);
  constexpr int kMaxHalvings = 20;
  constexpr double kStepResidualLimit = 1e-3;

  double t = 0.0;
  double h = h0;
  int steps = 0;
  while (t < 1.0 - 1e-15) {
    const double step = std::min(h, 1.0 - t);
    bool ok = false;
    try {
      const auto tc = taylor_coefficients(path, t, d, cfg.taylor_order);
      const ComplexMatrix trial = block_diagonal_part(tc.evaluate_d(step), profile);
      if (blocks_positive(trial, profile, 0.0)) {
        ok = residual(trial, path.at(t + step)).value <= kStepResidualLimit;
      }
      if (ok) d = trial;
    } catch (const MedError& e) {
      if (e.kind() != ErrorKind::SingularLinearSystem &&
          e.kind() != ErrorKind::NotPositiveDefinite) {
        throw;
      }
    }
    if (ok) {
      t = (step == 1.0 - t) ? 1.0 : t + step;
      ++steps;
      h = std::min(2.0 * h, h0);
    } else {
      h *= 0.5;
      if (h < h0 / static_cast<double>(1 << kMaxHalvings)) {
        throw MedError(ErrorKind::PathBreakdown, "interval halving exceeded 20 levels at t = " +
                                                     std::to_string(t));
      }
    }
  }
  auto sol = newton_solve(g_target, cfg, d);
  sol.taylor_steps = steps;
  return sol;
}

Povm povm_from_solution(const SolverSolution& sol, const PureDecomposition& d,
                        const DualBasis& dual) {
  const auto& profile = sol.profile;
  if (!(d.profile == profile) || !(dual.profile == profile)) {
    throw MedError(ErrorKind::ShapeMismatch, "solution, decomposition and dual basis disagree");
  }
  const int n = profile.dim();
  if (dual.vectors.rows() != n || dual.vectors.cols() != n) {
    throw MedError(ErrorKind::ShapeMismatch, "dual basis has wrong shape");
  }
  // |omega_ij> = sum_lk (D^{-1})_{lk,ij} |u_lk>
  const ComplexMatrix omega = dual.vectors * sol.d.inverse();
  Povm povm{profile, {}};
  for (int i = 0; i < profile.blocks(); ++i) {
    const ComplexMatrix mi = sol.m.middleCols(profile.offset(i), profile.rank(i));
    const ComplexMatrix coeff = mi * mi.adjoint();
    povm.elements.push_back(hermitian_part(omega * coeff * omega.adjoint()));
  }
  return povm;
}

ComplexMatrix optimal_basis(const SolverSolution& sol, const PureDecomposition& d) {
  if (!(d.profile == sol.profile)) {
    throw MedError(ErrorKind::ShapeMismatch, "solution and decomposition disagree");
  }
  const ComplexMatrix gram = d.vectors.adjoint() * d.vectors;
  // D G^{1/2} = M W^dagger, so W^dagger is the unitary polar factor of D G^{1/2}.
  const ComplexMatrix w = polar_unitary(sol.d * principal_sqrt(hermitian_part(gram))).adjoint();
  return polar_unitary(d.vectors) * w;
}

Povm optimal_povm(const SolverSolution& sol, const PureDecomposition& d) {
  const ComplexMatrix basis = optimal_basis(sol, d);
  const auto& profile = sol.profile;
  Povm povm{profile, {}};
  for (int i = 0; i < profile.blocks(); ++i) {
    const ComplexMatrix cols = basis.middleCols(profile.offset(i), profile.rank(i));
    povm.elements.push_back(hermitian_part(cols * cols.adjoint()));
  }
  return povm;
}

MedResult solve_ensemble(const Ensemble& e, Method method, const SolverConfig& cfg) {
  MedResult out{decompose(e), {}, {}, {}, 0.0};
  out.gram = build_gram(out.decomposition);
  out.solution = method == Method::Newton ? newton_solve(out.gram, cfg) : homotopy_solve(out.gram, cfg);
  out.povm = optimal_povm(out.solution, out.decomposition);
  out.p_success = success_probability(e, out.povm);
  return out;
}

}  // namespace medsolve
