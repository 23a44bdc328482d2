#include "doctest.h"

#include "rfdlab/linalg.hpp"

using namespace rfdlab;

namespace {

const cplx I1(0.0, 1.0);

CMatrix diag2(cplx a, cplx b) { return CMatrix::from_rows({{a, 0.0}, {0.0, b}}); }

// Dyadic-rational entries make products exactly representable, so
// associativity tests can demand bit equality.
CMatrix random_dyadic(int r, int c, Rng& rng) {
  std::uniform_int_distribution<int> d(-8, 8);
  CMatrix m(r, c);
  for (auto& v : m.data()) v = cplx(d(rng) / 4.0, d(rng) / 4.0);
  return m;
}

}  // namespace

TEST_CASE("kronecker product basics") {
  CHECK(tensor(CMatrix::identity(2), CMatrix::identity(3))
            .approx_equal(CMatrix::identity(6), 0.0));

  const CMatrix s = diag2(1.0, -1.0);
  const CMatrix ss = tensor(s, s);
  CHECK(ss.rows() == 4);
  CHECK(ss.at(0, 0) == cplx(1.0));
  CHECK(ss.at(1, 1) == cplx(-1.0));
  CHECK(ss.at(2, 2) == cplx(-1.0));
  CHECK(ss.at(3, 3) == cplx(1.0));

  // Index convention: entry a(i,j) b(k,l) sits at (i*rows(b)+k, j*cols(b)+l).
  const CMatrix a = CMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const CMatrix b = CMatrix::from_rows({{0.0, 5.0}, {6.0, 7.0}});
  const CMatrix ab = tensor(a, b);
  CHECK(ab.at(0, 1) == cplx(5.0));
  CHECK(ab.at(2, 1) == cplx(15.0));
  CHECK(ab.at(3, 3) == cplx(28.0));
}

TEST_CASE("kronecker of unitaries is unitary with multiplicative trace") {
  Rng rng(7);
  for (int it = 0; it < 10; ++it) {
    const CMatrix a = random_unitary(2, rng);
    const CMatrix b = random_unitary(2, rng);
    const CMatrix t = tensor(a, b);
    CHECK(t.is_unitary(1e-12));
    CHECK(std::abs(t.trace() - a.trace() * b.trace()) < 1e-12);
  }
}

TEST_CASE("kronecker associativity is exact on dyadic entries") {
  Rng rng(11);
  for (int it = 0; it < 20; ++it) {
    const CMatrix a = random_dyadic(2, 3, rng);
    const CMatrix b = random_dyadic(3, 2, rng);
    const CMatrix c = random_dyadic(2, 2, rng);
    const CMatrix lhs = tensor(tensor(a, b), c);
    const CMatrix rhs = tensor(a, tensor(b, c));
    REQUIRE(lhs.rows() == rhs.rows());
    for (size_t k = 0; k < lhs.data().size(); ++k)
      CHECK(lhs.data()[k] == rhs.data()[k]);
  }
}

TEST_CASE("mixed-product identity") {
  Rng rng(13);
  const CMatrix a = random_matrix(2, 3, rng), b = random_matrix(2, 2, rng);
  const CMatrix c = random_matrix(3, 2, rng), d = random_matrix(2, 3, rng);
  const CMatrix lhs = tensor(a, b) * tensor(c, d);
  const CMatrix rhs = tensor(a * c, b * d);
  CHECK(lhs.approx_equal(rhs, 1e-10));
}

TEST_CASE("entrywise conjugate") {
  const CMatrix r = CMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(conjugate(r).approx_equal(r, 0.0));

  const CMatrix d = diag2(I1, -I1);
  CHECK(conjugate(d).approx_equal(diag2(-I1, I1), 0.0));
  CHECK(conjugate(conjugate(d)).approx_equal(d, 0.0));

  Rng rng(17);
  const CMatrix u = random_unitary(3, rng);
  CHECK(conjugate(u).is_unitary(1e-12));
  // conj(u) equals (u^*)^T, which differs from u generically.
  CHECK(conjugate(u).approx_equal(u.adjoint().transpose(), 0.0));
}

TEST_CASE("predicates") {
  CHECK(CMatrix::identity(3).is_unitary(0.0));
  CHECK(CMatrix::identity(3).is_hermitian(0.0));
  CHECK(CMatrix::identity(3).is_positive_semidefinite(1e-14));
  const CMatrix h = CMatrix::from_rows({{2.0, I1}, {-I1, 2.0}});
  CHECK(h.is_hermitian(0.0));
  CHECK(h.is_positive_semidefinite(1e-12));  // eigenvalues 1 and 3
  CHECK(!h.is_unitary(1e-9));
  const CMatrix neg = CMatrix::from_rows({{1.0, 0.0}, {0.0, -0.5}});
  CHECK(!neg.is_positive_semidefinite(1e-9));
  Rng rng(19);
  const CMatrix a = random_matrix(3, 3, rng);
  CHECK((a * a.adjoint()).is_positive_semidefinite(1e-9));
}

TEST_CASE("trace and norms") {
  const CMatrix m = diag2(3.0, -1.0);
  CHECK(m.trace() == cplx(2.0));
  CHECK(m.normalized_trace() == cplx(1.0));
  CHECK(m.operator_norm() == doctest::Approx(3.0));
  CHECK(m.frobenius_norm() == doctest::Approx(std::sqrt(10.0)));
  CHECK(m.max_abs() == doctest::Approx(3.0));
}

TEST_CASE("matrix power") {
  const CMatrix s = CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  CHECK(matrix_power(s, 2).approx_equal(CMatrix::identity(2), 0.0));
  CHECK(matrix_power(s, 5).approx_equal(s, 0.0));
  CHECK(matrix_power(s, -1).approx_equal(s, 1e-12));
  CHECK(matrix_power(s, 0).approx_equal(CMatrix::identity(2), 0.0));
}

TEST_CASE("intertwiner space of one-dimensional families") {
  const std::vector<CMatrix> triv{CMatrix::identity(1), CMatrix::identity(1)};
  const std::vector<CMatrix> sign{CMatrix::identity(1), CMatrix::scalar(1, -1.0)};
  auto same = intertwiner_space(triv, triv);
  CHECK(same.dimension == 1);
  CHECK(std::abs(same.basis[0].at(0, 0)) == doctest::Approx(1.0));
  auto cross = intertwiner_space(triv, sign);
  CHECK(cross.dimension == 0);
}

TEST_CASE("intertwiner recovers a conjugating unitary up to phase") {
  Rng rng(23);
  for (int it = 0; it < 10; ++it) {
    // A generic pair of unitaries generates an irreducible family.
    std::vector<CMatrix> fam_a{random_unitary(2, rng), random_unitary(2, rng)};
    const CMatrix w = random_unitary(2, rng);
    std::vector<CMatrix> fam_b;
    for (const auto& m : fam_a) fam_b.push_back(w * m * w.adjoint());
    auto sp = intertwiner_space(fam_a, fam_b);
    REQUIRE(sp.dimension == 1);
    const CMatrix& t = sp.basis[0];
    for (size_t x = 0; x < fam_a.size(); ++x)
      CHECK((t * fam_a[x] - fam_b[x] * t).max_abs() < 1e-10);
    // t is proportional to w: overlap has full modulus.
    cplx ip = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) ip += std::conj(w.at(i, j)) * t.at(i, j);
    CHECK(std::abs(ip) ==
          doctest::Approx(t.frobenius_norm() * w.frobenius_norm()).epsilon(1e-9));
  }
}

TEST_CASE("intertwiner between inequivalent blocks vanishes") {
  Rng rng(29);
  // diag(u, v) family vs itself has commutant dimension 2 when u !~ v.
  std::vector<CMatrix> fam;
  for (int x = 0; x < 2; ++x)
    fam.push_back(direct_sum(random_unitary(2, rng), random_unitary(3, rng)));
  CHECK(commutant_dimension(fam) == 2);
  CHECK(intertwiner_space(fam, fam).dimension == 2);
}

TEST_CASE("commutant dimensions of scalar and abelian families") {
  const std::vector<CMatrix> scalars{CMatrix::identity(3)};
  CHECK(commutant_dimension(scalars) == 9);
  const std::vector<CMatrix> z2{CMatrix::identity(2), diag2(1.0, -1.0)};
  CHECK(commutant_dimension(z2) == 2);
  CHECK(intertwiner_space(z2, z2).dimension == commutant_dimension(z2));
}

TEST_CASE("commutant is invariant under unitary conjugation") {
  Rng rng(31);
  std::vector<CMatrix> fam{random_unitary(3, rng), random_unitary(3, rng)};
  const int d0 = commutant_dimension(fam);
  const CMatrix w = random_unitary(3, rng);
  std::vector<CMatrix> conj_fam;
  for (const auto& m : fam) conj_fam.push_back(w * m * w.adjoint());
  CHECK(commutant_dimension(conj_fam) == d0);
  CHECK(intertwiner_space(fam, fam).dimension == d0);
}

TEST_CASE("hermitian eigensystem") {
  Rng rng(37);
  const CMatrix h = random_hermitian(4, rng);
  auto [evals, vecs] = h.hermitian_eigensystem();
  CHECK(vecs.is_unitary(1e-10));
  CMatrix d(4, 4);
  for (int i = 0; i < 4; ++i) d.at(i, i) = evals[i];
  CHECK((vecs * d * vecs.adjoint()).approx_equal(h, 1e-10));
  CHECK(evals[0] == doctest::Approx(h.min_eigenvalue()));
  for (int i = 1; i < 4; ++i) CHECK(evals[i - 1] <= evals[i]);
}
