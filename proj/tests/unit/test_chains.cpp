#include <doctest.h>

#include <cmath>

#include "jlolab/chains.hpp"
#include "jlolab/error.hpp"
#include "jlolab/random.hpp"

using namespace jlolab;

namespace {

double residual(const Chain& a, const Chain& b) { return quotient_residual(a - b); }

}  // namespace

TEST_SUITE("chains") {
  TEST_CASE("construction checks shapes") {
    CHECK_THROWS_AS(Chain::elementary({identity(2), identity(3)}), DimensionMismatch);
    CHECK_THROWS_AS(Chain::elementary({}), DimensionMismatch);
    Chain c(2);
    CHECK_THROWS_AS(c.add(ElementaryChain{1.0, {identity(3)}}), DimensionMismatch);
    CHECK_THROWS_AS(c.append(Chain::unit(3)), DimensionMismatch);
    const Chain u = Chain::unit(3);
    CHECK(u.size() == 1);
    CHECK(u.max_degree() == 0);
  }

  TEST_CASE("Hochschild boundary in degree one") {
    RandomSource rng(1);
    const GradedSpace s(2, 1);
    const ComplexMatrix a0 = rng.even_element(s), a1 = rng.even_element(s);
    const Chain b = hochschild_b(Chain::elementary({a0, a1}));
    const Chain expected = Chain::elementary({a0 * a1}) - Chain::elementary({a1 * a0});
    CHECK(residual(b, expected) < 1e-15);
    CHECK(hochschild_b(Chain::elementary({a0})).empty());
  }

  TEST_CASE("Connes boundary in degree zero and one") {
    RandomSource rng(2);
    const GradedSpace s(1, 2);
    const ComplexMatrix a0 = rng.even_element(s), a1 = rng.even_element(s);
    CHECK(residual(connes_B(Chain::elementary({a0})), Chain::elementary({identity(3), a0})) == 0.0);
    const Chain expected = Chain::elementary({identity(3), a0, a1}) - Chain::elementary({identity(3), a1, a0});
    CHECK(residual(connes_B(Chain::elementary({a0, a1})), expected) < 1e-15);
  }

  TEST_CASE("boundaries square to zero and anticommute") {
    RandomSource rng(3);
    for (std::size_t n = 0; n <= 4; ++n) {
      const Chain a = rng.chain(GradedSpace(2, 1), n, 2);
      CHECK(quotient_residual(hochschild_b(hochschild_b(a))) <= 1e-10);
      CHECK(quotient_residual(connes_B(connes_B(a))) <= 1e-10);
      CHECK(quotient_residual(hochschild_b(connes_B(a)) + connes_B(hochschild_b(a))) <= 1e-10);
    }
  }

  TEST_CASE("normalize drops scalar slots and zero terms") {
    RandomSource rng(4);
    const GradedSpace s(1, 1);
    const ComplexMatrix a = rng.even_element(s), b = rng.even_element(s);
    Chain c(2);
    c.add(ElementaryChain{1.0, {a, identity(2)}});
    c.add(ElementaryChain{2.0, {a, Complex(3.0, 1.0) * identity(2), b}});
    c.add(ElementaryChain{0.0, {a, b}});
    c.add(ElementaryChain{1.0, {identity(2), b}});
    const Chain n = normalize(c);
    REQUIRE(n.size() == 1);
    CHECK(n.terms()[0].factors[1] == b);
    CHECK(quotient_residual(c - n) < 1e-15);
  }

  TEST_CASE("shuffle product of degree-zero chains is the tensor product") {
    RandomSource rng(5);
    const ComplexMatrix a = rng.even_element(GradedSpace(1, 1)), b = rng.even_element(GradedSpace(2, 1));
    const Chain p = shuffle_product(Chain::elementary({a}), Chain::elementary({b}));
    REQUIRE(p.size() == 1);
    CHECK(p.terms()[0].factors[0] == kron(a, b));
    CHECK(p.algebra_dim() == 6);
  }

  TEST_CASE("shuffle product of two degree-one chains") {
    RandomSource rng(6);
    const GradedSpace s(1, 1);
    const ComplexMatrix a0 = rng.even_element(s), a1 = rng.even_element(s);
    const ComplexMatrix b0 = rng.even_element(s), b1 = rng.even_element(s);
    const ComplexMatrix one = identity(2);
    const Chain p = shuffle_product(Chain::elementary({a0, a1}), Chain::elementary({b0, b1}));
    const Chain expected = Chain::elementary({kron(a0, b0), kron(a1, one), kron(one, b1)}) -
                           Chain::elementary({kron(a0, b0), kron(one, b1), kron(a1, one)});
    CHECK(p.size() == 2);
    CHECK(residual(p, expected) < 1e-15);
  }

  TEST_CASE("shuffle product is associative and b is a derivation") {
    RandomSource rng(7);
    const GradedSpace s(1, 1);
    for (std::size_t p = 0; p <= 2; ++p)
      for (std::size_t q = 0; p + q <= 3; ++q) {
        const Chain a = rng.chain(s, p), b = rng.chain(GradedSpace(2, 1), q), c = rng.chain(s, 4 - p - q > 1 ? 1 : 0);
        CHECK(quotient_residual(shuffle_product(shuffle_product(a, b), c) - shuffle_product(a, shuffle_product(b, c))) <=
              1e-10);
        const Chain lhs = hochschild_b(shuffle_product(a, b));
        const Chain rhs =
            shuffle_product(hochschild_b(a), b) + shuffle_product(a, hochschild_b(b)).scaled(p % 2 ? -1.0 : 1.0);
        CHECK(quotient_residual(lhs - rhs) <= 1e-10);
      }
  }

  TEST_CASE("B_1 coincides with the Connes boundary") {
    RandomSource rng(8);
    for (std::size_t n = 0; n <= 3; ++n) {
      const Chain a = rng.chain(GradedSpace(2, 2), n, 2);
      const Chain single[] = {a};
      CHECK(quotient_residual(br_operation(single) - connes_B(a)) <= 1e-12);
    }
  }

  TEST_CASE("B_2 on two degree-zero chains has a single term") {
    RandomSource rng(9);
    const ComplexMatrix a = rng.even_element(GradedSpace(1, 1)), b = rng.even_element(GradedSpace(1, 1));
    const Chain c = cyclic_shuffle_product(Chain::elementary({a}), Chain::elementary({b}));
    const ComplexMatrix one = identity(2);
    REQUIRE(c.size() == 1);
    CHECK(residual(c, Chain::elementary({kron(one, one), kron(a, one), kron(one, b)})) == 0.0);
  }

  TEST_CASE("B_2 on two degree-one chains has twelve terms") {
    RandomSource rng(10);
    const GradedSpace s(1, 1);
    const Chain c = cyclic_shuffle_product(rng.chain(s, 1), rng.chain(s, 1));
    CHECK(c.size() == 12);
    CHECK(c.max_degree() == 4);
    for (const auto& t : c.terms()) CHECK(t.factors[0] == identity(4));
  }

  TEST_CASE("chain operations refuse to exceed the term budget") {
    Chain big(1);
    for (int i = 0; i < 1000; ++i) big.add(ElementaryChain{1.0, {identity(1), identity(1)}});
    CHECK_THROWS_AS(shuffle_product(big, big.scaled(2.0)), ChainTooLarge);
  }

  TEST_CASE("entire norm surrogate") {
    Chain c(2);
    c.add(ElementaryChain{2.0, {identity(2), identity(2)}});
    CHECK(entire_norm(c, 3) == doctest::Approx(6.0));
    Chain d(2);
    d.add(ElementaryChain{1.0, {identity(2), identity(2), 2.0 * identity(2)}});
    CHECK(entire_norm(d, 2) == doctest::Approx(4.0 * 2.0 / std::sqrt(2.0)));
    CHECK_THROWS(entire_norm(c, 0));
  }

  TEST_CASE("quotient residual ignores scalars in higher slots") {
    RandomSource rng(11);
    const GradedSpace s(2, 1);
    const ComplexMatrix a = rng.even_element(s), b = rng.even_element(s);
    const Chain x = Chain::elementary({a, b});
    const Chain y = Chain::elementary({a, b + 5.0 * identity(3)});
    CHECK(quotient_residual(x - y) < 1e-14);
    CHECK(quotient_residual(x) > 0.1);
    CHECK(std::abs(quotient_residual(x) - quotient_tensor_norm(x)) < 1e-14);
  }
}
