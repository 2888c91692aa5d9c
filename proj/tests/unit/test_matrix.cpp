#include <doctest.h>

#include "jlolab/error.hpp"
#include "jlolab/matrix.hpp"
#include "jlolab/random.hpp"
#include "jlolab/spectral.hpp"

using namespace jlolab;

TEST_SUITE("matrix") {
  TEST_CASE("identity has unit eigenvalues and a unitary eigenbasis") {
    const auto eig = hermitian_eigen(identity(3));
    for (int i = 0; i < 3; ++i) CHECK(eig.eigenvalues(i) == doctest::Approx(1.0));
    CHECK((eig.vectors.adjoint() * eig.vectors - identity(3)).norm() < 1e-14);
  }

  TEST_CASE("diagonal eigenvalues come out ascending") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = -1.0;
    const auto eig = hermitian_eigen(m);
    CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(2.0));
  }

  TEST_CASE("random Hermitian reconstruction") {
    RandomSource rng(11);
    const ComplexMatrix x = rng.gaussian(6, 6);
    const ComplexMatrix m = x + x.adjoint();
    const auto eig = hermitian_eigen(m);
    const ComplexMatrix back = eig.vectors * eig.eigenvalues.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    CHECK(operator_norm(back - m) <= 1e-11 * (1.0 + operator_norm(m)));
    for (Eigen::Index i = 1; i < 6; ++i) CHECK(eig.eigenvalues(i - 1) <= eig.eigenvalues(i));
  }

  TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigen(m), NonHermitian);
    CHECK_THROWS_AS(hermitian_eigen(ComplexMatrix::Zero(2, 3)), DimensionMismatch);
  }

  TEST_CASE("kron of identities and the mixed product rule") {
    CHECK(kron(identity(2), identity(3)) == identity(6));
    RandomSource rng(5);
    const ComplexMatrix a = rng.gaussian(2, 2), b = rng.gaussian(2, 2), c = rng.gaussian(2, 2), d = rng.gaussian(2, 2);
    CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm() < 1e-13);
  }

  TEST_CASE("kron with a diagonal sign factor") {
    RandomSource rng(6);
    const ComplexMatrix m = rng.gaussian(3, 3);
    const ComplexMatrix k = kron(GradedSpace(1, 1).grading(), m);
    CHECK(k.topLeftCorner(3, 3) == m);
    CHECK(k.bottomRightCorner(3, 3) == -m);
    CHECK(k.topRightCorner(3, 3).norm() == 0.0);
  }

  TEST_CASE("kron is associative entrywise") {
    RandomSource rng(7);
    const ComplexMatrix a = rng.gaussian(2, 2), b = rng.gaussian(3, 3), c = rng.gaussian(2, 2);
    CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff() <= 1e-14);
  }

  TEST_CASE("graded right factor") {
    const SpectralTripleFD first(GradedSpace(1, 1), ComplexMatrix::Zero(2, 2));
    const GradedSpace second(1, 1);
    CHECK(graded_right_factor(first, ComplexMatrix::Zero(2, 2), second).norm() == 0.0);

    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const ComplexMatrix g = graded_right_factor(first, x, second);
    CHECK(g.topLeftCorner(2, 2) == x);
    CHECK(g.bottomRightCorner(2, 2) == -x);
    CHECK_THROWS_AS(graded_right_factor(first, identity(2), second), ParityError);

    RandomSource rng(8);
    const auto t1 = rng.triple(2, 1), t2 = rng.triple(1, 2);
    const ComplexMatrix d1 = kron(t1.dirac(), identity(3));
    const ComplexMatrix d2 = graded_right_factor(t1, t2.dirac(), t2.space());
    CHECK(operator_norm(d2 * d1 + d1 * d2) < 1e-14);
  }

  TEST_CASE("supertrace basics") {
    const GradedSpace s(1, 1);
    CHECK(std::abs(supertrace(identity(2), s)) == 0.0);
    const GradedSpace s2(3, 1);
    CHECK(supertrace(s2.grading(), s2).real() == doctest::Approx(4.0));
    CHECK(supertrace(identity(4), s2).real() == doctest::Approx(2.0));
    CHECK_THROWS_AS(supertrace(identity(3), s2), DimensionMismatch);

    RandomSource rng(9);
    const GradedSpace g(2, 3);
    const ComplexMatrix x = rng.even_element(g), y = rng.even_element(g);
    CHECK(std::abs(supertrace(x * y, g) - supertrace(y * x, g)) < 1e-13);
    CHECK(std::abs(supertrace(x * y - y * x, g)) <= 1e-10);
  }

  TEST_CASE("parity tagging") {
    const GradedSpace s(2, 1);
    RandomSource rng(10);
    CHECK(parity_of(rng.even_element(s), s) == Parity::Even);
    CHECK(parity_of(rng.odd_hermitian(s), s) == Parity::Odd);
    const ComplexMatrix m = rng.gaussian(3, 3);
    CHECK(parity_of(m, s) == Parity::Mixed);
    CHECK((even_part(m, s) + odd_part(m, s) - m).norm() < 1e-15);
    CHECK(parity_of(even_part(m, s), s) == Parity::Even);
    CHECK(parity_of(odd_part(m, s), s) == Parity::Odd);
  }

  TEST_CASE("permute relabels rows and columns together") {
    ComplexMatrix m(3, 3);
    m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const std::vector<std::size_t> order{2, 0, 1};
    const ComplexMatrix p = permute(m, order);
    CHECK(p(0, 0) == Complex(9.0));
    CHECK(p(0, 1) == Complex(7.0));
    const ComplexMatrix q = permutation_matrix(order);
    CHECK((q * m * q.adjoint() - p).norm() == 0.0);
  }
}
