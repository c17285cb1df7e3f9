#include <doctest.h>

#include "medsolve/certificates.hpp"
#include "medsolve/solver.hpp"
#include "oracles.hpp"

using namespace medsolve;

namespace {

GramMatrix gram_of(const Ensemble& e) { return build_gram(decompose(e)); }

double independent_residual(const ComplexMatrix& d, const GramMatrix& g) {
  const ComplexMatrix m = oracle::db_sqrt(d * g.matrix * d);
  return (block_diagonal_part(m, g.profile) - d * d).norm();
}

void check_condition_a(const SolverSolution& s, const GramMatrix& g) {
  CHECK(min_eigenvalue(s.m) > 0.0);
  CHECK((s.m * s.m - s.d * g.matrix * s.d).norm() < 1e-10);
  CHECK((block_diagonal_part(s.m, g.profile) - s.d * s.d).norm() < 1e-10);
  for (int i = 0; i < g.profile.blocks(); ++i) {
    CHECK(min_eigenvalue(block_view(s.d, g.profile, i, i)) > 0.0);
  }
}

}  // namespace

TEST_CASE("residual on closed-form cases") {
  const RankProfile p({1, 1});
  const GramMatrix id{p, ComplexMatrix::Identity(2, 2)};
  const auto r = residual(ComplexMatrix::Identity(2, 2), id);
  CHECK(r.value < 1e-15);
  CHECK((r.m - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

  const RankProfile p3({2, 1});
  std::mt19937_64 rng(1);
  const ComplexMatrix a = oracle::gaussian(2, 2, rng);
  ComplexMatrix g = ComplexMatrix::Zero(3, 3);
  g.topLeftCorner(2, 2) = a.adjoint() * a;
  g(2, 2) = 0.7;
  const GramMatrix gb{p3, g};
  CHECK(residual(default_initial_d(gb), gb).value < 1e-12);
}

TEST_CASE("residual agrees with an independently computed root") {
  std::mt19937_64 rng(6);
  const RankProfile p({2, 1, 1});
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = oracle::gaussian(4, 4, rng);
    const GramMatrix g{p, a.adjoint() * a + 0.1 * ComplexMatrix::Identity(4, 4)};
    std::vector<ComplexMatrix> blocks;
    for (int r : p.ranks()) {
      const ComplexMatrix b = oracle::gaussian(r, r, rng);
      blocks.push_back(b.adjoint() * b + 0.1 * ComplexMatrix::Identity(r, r));
    }
    const ComplexMatrix d = assemble_block_diagonal(blocks, p);
    CHECK(residual(d, g).value == doctest::Approx(independent_residual(d, g)).epsilon(1e-8));
  }
}

TEST_CASE("Jacobian matches central differences") {
  const auto g = gram_of(random_ensemble(RankProfile({2, 1, 1}), 13));
  const ComplexMatrix d = default_initial_d(g);
  const RealMatrix jac = residual_jacobian(d, g);
  const RealVector x = block_diagonal_to_coords(d, g.profile);
  const double h = 1e-6;
  auto f = [&](const RealVector& y) {
    const ComplexMatrix dd = block_diagonal_from_coords(y, g.profile);
    const ComplexMatrix m = principal_sqrt(dd * g.matrix * dd);
    return block_diagonal_to_coords(hermitian_part(block_diagonal_part(m - dd * dd, g.profile)),
                                     g.profile);
  };
  for (int k = 0; k < x.size(); ++k) {
    RealVector xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    const RealVector fd = (f(xp) - f(xm)) / (2.0 * h);
    CHECK((fd - jac.col(k)).norm() < 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("newton on the identity Gram matrix") {
  const GramMatrix g{RankProfile({2, 1}), ComplexMatrix::Identity(3, 3)};
  const auto s = newton_solve(g);
  CHECK(s.iterations <= 1);
  CHECK((s.d - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("newton reproduces the two-state optimum") {
  const double gamma = 1.0 / std::sqrt(2.0);
  const auto pair = oracle::pure_pair(0.5, gamma);
  const auto r = solve_ensemble(pair);
  CHECK(r.p_success == doctest::Approx(0.5 * (1.0 + std::sqrt(0.5))).epsilon(1e-12));
  for (double p : {0.1, 0.35, 0.8}) {
    for (double gm : {0.2, 0.7, 0.95}) {
      const auto e = oracle::pure_pair(p, gm);
      CHECK(solve_ensemble(e).p_success ==
            doctest::Approx(oracle::pure_pair_success(p, gm)).epsilon(1e-12));
    }
  }
}

TEST_CASE("solutions satisfy the fixed-point conditions") {
  for (const auto& ranks : std::vector<std::vector<int>>{{1, 1, 1}, {2, 1}, {2, 2}, {3, 2, 1}, {2, 2, 2, 2}}) {
    const RankProfile p(ranks);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto g = gram_of(random_ensemble(p, seed));
      const auto s = newton_solve(g);
      CHECK(s.residual <= 1e-12);
      check_condition_a(s, g);
    }
  }
}

TEST_CASE("newton and homotopy agree") {
  for (const auto& ranks : std::vector<std::vector<int>>{{1, 1}, {2, 1}, {2, 2, 1}, {3, 3, 2}}) {
    const RankProfile p(ranks);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto e = random_ensemble(p, 50 + seed);
      const auto a = solve_ensemble(e, Method::Newton);
      const auto b = solve_ensemble(e, Method::Homotopy);
      CHECK((a.solution.d - b.solution.d).norm() < 1e-6);
      CHECK(std::abs(a.p_success - b.p_success) < 1e-9);
    }
  }
}

TEST_CASE("homotopy on a block-diagonal target takes no steps") {
  const RankProfile p({2, 1});
  const auto e = oracle::orthogonal_ensemble(p, {0.7, 0.3});
  const auto g = gram_of(e);
  const auto s = homotopy_solve(g);
  CHECK(s.taylor_steps == 0);
  CHECK(s.iterations == 0);
  CHECK((s.d - default_initial_d(g)).norm() < 1e-14);
}

TEST_CASE("homotopy output passes the certificate") {
  const auto e = random_ensemble(RankProfile({2, 1, 1}), 77);
  const auto r = solve_ensemble(e, Method::Homotopy);
  CHECK(r.solution.taylor_steps >= 1);
  CHECK(check_optimal(e, r.povm).passed);
}

TEST_CASE("solution moves covariantly under block unitaries") {
  std::mt19937_64 rng(31);
  const RankProfile p({2, 2, 1});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = gram_of(random_ensemble(p, seed));
    const ComplexMatrix u = oracle::block_diag_unitary(p, rng);
    const auto s = newton_solve(g);
    const auto s2 = newton_solve(GramMatrix{p, u.adjoint() * g.matrix * u});
    CHECK((s2.d - u.adjoint() * s.d * u).norm() < 1e-9);
  }
}

TEST_CASE("projectors from the dual basis and from the polar form agree") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto e = random_ensemble(RankProfile({2, 1, 1}), seed);
    const auto r = solve_ensemble(e);
    const auto alt = povm_from_solution(r.solution, r.decomposition,
                                        dual_basis(r.decomposition, r.gram));
    CHECK(oracle::max_element_distance(alt.elements, r.povm.elements) < 1e-8);
    ComplexMatrix total = ComplexMatrix::Zero(4, 4);
    for (const auto& m : r.povm.elements) total += m;
    CHECK((total - ComplexMatrix::Identity(4, 4)).norm() < 1e-9);
    CHECK(check_optimal(e, alt).passed);
  }
}

TEST_CASE("orthogonal ensemble gives support projectors") {
  const RankProfile p({2, 1, 1});
  const auto e = oracle::orthogonal_ensemble(p, {0.5, 0.3, 0.2});
  const auto r = solve_ensemble(e);
  for (int i = 0; i < 3; ++i) {
    CHECK((r.povm.elements[i] - oracle::support_projector(p, i)).norm() < 1e-12);
  }
  CHECK(r.p_success == doctest::Approx(1.0));
}

TEST_CASE("Taylor derivatives vanish on a constant path") {
  const auto g = gram_of(random_ensemble(RankProfile({2, 1}), 2));
  const auto s = newton_solve(g);
  const auto derivs = taylor_derivatives(GramPath{g, g}, 0.5, s.d, 3);
  REQUIRE(derivs.size() == 3);
  for (const auto& v : derivs) CHECK(v.norm() < 1e-12);
}

TEST_CASE("Taylor derivatives on a diagonal path match the closed form") {
  const RankProfile p({1, 1});
  ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 0.3;
  a(1, 1) = 0.7;
  b(0, 0) = 0.6;
  b(1, 1) = 0.4;
  const GramPath path{GramMatrix{p, a}, GramMatrix{p, b}};
  const double t = 0.4;
  // D(t) = G(t)^{1/2} entrywise, M(t) = G(t): no off-diagonal part
  const GramMatrix gt = path.at(t);
  const auto derivs = taylor_derivatives(path, t, default_initial_d(gt), 2);
  for (int k = 0; k < 2; ++k) {
    const double g = gt.matrix(k, k).real();
    const double dg = (b(k, k) - a(k, k)).real();
    CHECK(derivs[0](k) == doctest::Approx(0.5 * dg / std::sqrt(g)).epsilon(1e-9));
    CHECK(derivs[1](k) == doctest::Approx(-0.25 * dg * dg / std::pow(g, 1.5)).epsilon(1e-9));
  }
  CHECK(derivs[0].tail(2).norm() < 1e-12);
}

TEST_CASE("first Taylor derivative matches finite differences of the solution") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g0 = gram_of(random_ensemble(RankProfile({1, 1, 1}), seed));
    const auto g1 = gram_of(random_ensemble(RankProfile({1, 1, 1}), seed + 40));
    const GramPath path{g0, g1};
    const double t = 0.5, h = 1e-5;
    auto coords_at = [&](double s) {
      const auto sol = newton_solve(path.at(s));
      return solution_coords(sol.d, sol.m, g0.profile);
    };
    const RealVector fd = (coords_at(t + h) - coords_at(t - h)) / (2.0 * h);
    const auto sol = newton_solve(path.at(t));
    const RealVector d1 = taylor_derivatives(path, t, sol.d, 1).front();
    CHECK((d1 - fd).norm() <= 1e-4 * fd.norm());
  }
}

TEST_CASE("Newton reports failures") {
  const auto g = gram_of(random_ensemble(RankProfile({2, 1}), 3));
  SolverConfig cfg;
  cfg.max_iters = 0;
  try {
    newton_solve(g, cfg);
    FAIL("expected an exception");
  } catch (const MedError& err) {
    CHECK(err.kind() == ErrorKind::MaxIterationsExceeded);
  }
  ComplexMatrix bad = -ComplexMatrix::Identity(3, 3);
  try {
    newton_solve(g, {}, bad);
    FAIL("expected an exception");
  } catch (const MedError& err) {
    CHECK(err.kind() == ErrorKind::NonPositiveIterate);
  }
}
