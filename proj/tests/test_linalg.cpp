#include <doctest.h>

#include "medsolve/linalg.hpp"
#include "oracles.hpp"

using namespace medsolve;

TEST_CASE("hermitian_eig on fixed matrices") {
  auto id = hermitian_eig(ComplexMatrix::Identity(2, 2));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(1) == doctest::Approx(1.0));
  CHECK((id.vectors.adjoint() * id.vectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  auto e = hermitian_eig(d);
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(3.0));
  CHECK((e.vectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("hermitian_eig reconstructs and fixes phases") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = oracle::random_hermitian(4, rng);
    const auto e = hermitian_eig(h);
    const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK((back - h).norm() < 1e-12 * std::max(1.0, h.norm()));
    for (int k = 0; k < 4; ++k) {
      Eigen::Index at = 0;
      e.vectors.col(k).cwiseAbs().maxCoeff(&at);
      CHECK(std::abs(e.vectors(at, k).imag()) < 1e-14);
      CHECK(e.vectors(at, k).real() > 0.0);
    }
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(m), MedError);
  try {
    hermitian_eig(m);
  } catch (const MedError& err) {
    CHECK(err.kind() == ErrorKind::NotHermitian);
  }
}

TEST_CASE("eigenvalues of A^dagger A are non-negative") {
  std::mt19937_64 rng(3);
  for (int n : {1, 3, 6, 9}) {
    const ComplexMatrix a = oracle::gaussian(n, n, rng);
    CHECK(hermitian_eig(a.adjoint() * a).values.minCoeff() >= -kDefaultTol);
  }
}

TEST_CASE("principal_sqrt on fixed matrices") {
  CHECK((principal_sqrt(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() <
        1e-14);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const ComplexMatrix s = principal_sqrt(d);
  CHECK(s(0, 0).real() == doctest::Approx(2.0));
  CHECK(s(1, 1).real() == doctest::Approx(3.0));
  CHECK(std::abs(s(0, 1)) < 1e-14);
}

TEST_CASE("principal_sqrt squares back and matches an iterative root") {
  std::mt19937_64 rng(5);
  for (int n : {2, 5, 8}) {
    const ComplexMatrix a = oracle::gaussian(n, n, rng);
    const ComplexMatrix g = a.adjoint() * a;
    const ComplexMatrix s = principal_sqrt(g);
    CHECK((s * s - g).norm() <= 1e-10 * std::max(1.0, g.norm()));
    CHECK((s - oracle::db_sqrt(g)).norm() <= 1e-9 * std::max(1.0, s.norm()));
    CHECK(min_eigenvalue(s) > 0.0);
  }
}

TEST_CASE("principal_sqrt clamps tiny negative eigenvalues") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1e-13;
  const ComplexMatrix s = principal_sqrt(m);
  CHECK(std::abs(s(1, 1)) == 0.0);
  m(1, 1) = -1e-3;
  CHECK_THROWS_AS(principal_sqrt(m), MedError);
}

TEST_CASE("inverse_sqrt inverts the root") {
  std::mt19937_64 rng(9);
  const ComplexMatrix a = oracle::gaussian(4, 4, rng);
  const ComplexMatrix g = a.adjoint() * a + ComplexMatrix::Identity(4, 4);
  CHECK((inverse_sqrt(g) * principal_sqrt(g) - ComplexMatrix::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("polar_unitary is unitary and recovers the factor") {
  std::mt19937_64 rng(12);
  const ComplexMatrix a = oracle::gaussian(5, 5, rng);
  const ComplexMatrix u = polar_unitary(a);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(5, 5)).norm() < 1e-12);
  CHECK((u * principal_sqrt(a.adjoint() * a) - a).norm() < 1e-10 * a.norm());
}

TEST_CASE("numerical_rank") {
  std::mt19937_64 rng(2);
  const ComplexMatrix v = oracle::gaussian(5, 2, rng);
  CHECK(numerical_rank(v * v.adjoint()) == 2);
  CHECK(numerical_rank(ComplexMatrix::Identity(4, 4)) == 4);
}

TEST_CASE("block_view on fixed matrices") {
  const RankProfile p({2, 1});
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  CHECK((block_view(id, p, 0, 0) - ComplexMatrix::Identity(2, 2)).norm() == 0.0);
  const ComplexMatrix off = block_view(id, p, 0, 1);
  CHECK(off.rows() == 2);
  CHECK(off.cols() == 1);
  CHECK(off.norm() == 0.0);

  std::mt19937_64 rng(1);
  const ComplexMatrix m = oracle::gaussian(3, 3, rng);
  CHECK((block_view(m, RankProfile({3}), 0, 0) - m).norm() == 0.0);
  CHECK_THROWS_AS(block_view(m, p, 2, 0), MedError);
}

TEST_CASE("assemble_block_diagonal") {
  std::vector<ComplexMatrix> blocks{ComplexMatrix::Constant(1, 1, 2.0),
                                    ComplexMatrix::Constant(1, 1, 3.0)};
  const ComplexMatrix d = assemble_block_diagonal(blocks, RankProfile({1, 1}));
  CHECK(d(0, 0).real() == 2.0);
  CHECK(d(1, 1).real() == 3.0);
  CHECK(d(0, 1) == Complex(0.0));

  std::vector<ComplexMatrix> b2{ComplexMatrix::Identity(2, 2), ComplexMatrix::Constant(1, 1, 5.0)};
  const ComplexMatrix d2 = assemble_block_diagonal(b2, RankProfile({2, 1}));
  ComplexMatrix expect = ComplexMatrix::Identity(3, 3);
  expect(2, 2) = 5.0;
  CHECK((d2 - expect).norm() == 0.0);
}

TEST_CASE("block_view inverts assemble_block_diagonal") {
  std::mt19937_64 rng(4);
  const RankProfile p({3, 2, 2, 1});
  std::vector<ComplexMatrix> blocks;
  for (int r : p.ranks()) blocks.push_back(oracle::gaussian(r, r, rng));
  const ComplexMatrix d = assemble_block_diagonal(blocks, p);
  for (int i = 0; i < p.blocks(); ++i) CHECK((block_view(d, p, i, i) - blocks[i]).norm() == 0.0);
  CHECK_THROWS_AS(assemble_block_diagonal(std::span(blocks).first(2), p), MedError);
}

TEST_CASE("rank profiles") {
  const RankProfile p({3, 2, 2, 1});
  CHECK(p.dim() == 8);
  CHECK(p.offset(3) == 7);
  CHECK(p.block_diagonal_params() == 18);
  CHECK(flat_index(p, BlockIndex{2, 1}) == 6);
  CHECK_THROWS_AS(RankProfile({1, 2}), MedError);
  CHECK_THROWS_AS(RankProfile({2, 0}), MedError);
  CHECK_THROWS_AS(RankProfile(std::vector<int>{}), MedError);
}

TEST_CASE("Hermitian coordinate round trip") {
  std::mt19937_64 rng(8);
  const RankProfile p({2, 2, 1});
  std::vector<ComplexMatrix> blocks;
  for (int r : p.ranks()) blocks.push_back(oracle::random_hermitian(r, rng));
  const ComplexMatrix d = assemble_block_diagonal(blocks, p);
  const RealVector x = block_diagonal_to_coords(d, p);
  CHECK(x.size() == p.block_diagonal_params());
  CHECK((block_diagonal_from_coords(x, p) - d).norm() < 1e-15);
}
