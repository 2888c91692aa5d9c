#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "jlolab/combinatorics.hpp"

using namespace jlolab;

TEST_SUITE("combinatorics") {
  TEST_CASE("signed permutations validate and agree on the sign") {
    CHECK_THROWS_AS(SignedPermutation({0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SignedPermutation({0, 3}), std::invalid_argument);
    CHECK(SignedPermutation({1, 0}).sign() == -1);
    CHECK(SignedPermutation({1, 2, 0}).sign() == 1);
    CHECK(SignedPermutation::identity(4).sign() == 1);

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::size_t> images(1 + trial % 9);
      for (std::size_t i = 0; i < images.size(); ++i) images[i] = i;
      std::shuffle(images.begin(), images.end(), rng);
      CHECK(signature_by_cycles(images) == signature_by_inversions(images));
    }
    const SignedPermutation p({2, 0, 1});
    CHECK(p.preimage() == std::vector<std::size_t>{1, 2, 0});
  }

  TEST_CASE("simplex points must be ordered in the unit interval") {
    CHECK_NOTHROW(SimplexPoint({0.1, 0.1, 0.9}));
    CHECK_THROWS_AS(SimplexPoint({0.5, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(SimplexPoint({-0.1}), std::invalid_argument);
    CHECK_THROWS_AS(SimplexPoint({1.5}), std::invalid_argument);
  }

  TEST_CASE("binomial and multinomial") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(8, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    const unsigned parts[] = {2, 1, 1};
    CHECK(multinomial(parts) == 12);
    const unsigned blocks[] = {1, 1};
    CHECK(cyclic_shuffle_count(blocks) == 12);
    CHECK(binomial(66, 33) == 7219428434016265740ULL);
    CHECK_THROWS_AS(binomial(68, 34), std::overflow_error);
    const std::vector<unsigned> many(30, 1);
    CHECK_THROWS_AS(cyclic_shuffle_count(many), std::overflow_error);
  }

  TEST_CASE("shuffle enumeration") {
    CHECK(enumerate_shuffles(2, 2).size() == 6);
    for (unsigned p = 0; p <= 8; ++p)
      for (unsigned q = 0; p + q <= 8; ++q) {
        const auto list = enumerate_shuffles(p, q);
        CHECK(list.size() == binomial(p + q, p));
        CHECK(list.front() == SignedPermutation::identity(p + q));
        std::set<std::vector<std::size_t>> distinct;
        for (const auto& s : list) {
          CHECK(is_shuffle(s, p, q));
          CHECK(s.sign() == signature_by_inversions(s.images()));
          distinct.insert(s.images());
        }
        CHECK(distinct.size() == list.size());
      }
    CHECK_FALSE(is_shuffle(SignedPermutation({1, 0}), 2, 0));
  }

  TEST_CASE("cyclic shuffle enumeration") {
    const unsigned single[] = {0};
    CHECK(enumerate_cyclic_shuffles(single).size() == 1);
    const unsigned pair[] = {1, 1};
    CHECK(enumerate_cyclic_shuffles(pair).size() == 12);

    for (unsigned r = 1; r <= 3; ++r) {
      const unsigned combos = r == 1 ? 4 : r == 2 ? 16 : 64;
      for (unsigned code = 0; code < combos; ++code) {
        std::vector<unsigned> degrees;
        for (unsigned i = 0, c = code; i < r; ++i, c /= 4) degrees.push_back(c % 4);
        // The largest triple blocks are left to the acceptance run.
        if (degrees.size() == 3 && degrees[0] + degrees[1] + degrees[2] > 6) continue;
        const auto list = enumerate_cyclic_shuffles(degrees);
        CHECK(list.size() == cyclic_shuffle_count(degrees));
        CHECK(list.front() == SignedPermutation::identity(list.front().degree()));
        std::set<std::vector<std::size_t>> distinct;
        for (const auto& s : list) {
          CHECK(is_cyclic_shuffle(s, degrees));
          CHECK(s.sign() == signature_by_inversions(s.images()));
          distinct.insert(s.images());
        }
        CHECK(distinct.size() == list.size());
      }
    }
  }

  TEST_CASE("zero-degree blocks keep their order") {
    const unsigned zeros[] = {0, 0};
    const auto list = enumerate_cyclic_shuffles(zeros);
    REQUIRE(list.size() == 1);
    CHECK(list[0] == SignedPermutation::identity(2));
    CHECK_FALSE(is_cyclic_shuffle(SignedPermutation({1, 0}), zeros));
  }

  TEST_CASE("rotation within a single block") {
    const unsigned one[] = {1};
    CHECK(is_cyclic_shuffle(SignedPermutation({1, 0}), one));
    const unsigned two[] = {2};
    const auto list = enumerate_cyclic_shuffles(two);
    CHECK(list.size() == 3);
    for (const auto& s : list) CHECK(s.sign() == 1);
  }

  TEST_CASE("shuffle regions partition the product of simplices") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (unsigned p = 1; p <= 3; ++p)
      for (unsigned q = 1; q <= 2; ++q) {
        const auto list = enumerate_shuffles(p, q);
        for (int k = 0; k < 200; ++k) {
          std::vector<double> s(p), t(q);
          for (auto& x : s) x = unif(rng);
          for (auto& x : t) x = unif(rng);
          std::sort(s.begin(), s.end());
          std::sort(t.begin(), t.end());
          const SimplexPoint sp(s), tp(t);
          const auto hits = std::count_if(list.begin(), list.end(),
                                          [&](const auto& chi) { return shuffle_region_contains(chi, sp, tp); });
          CHECK(hits == 1);
        }
      }
  }

  TEST_CASE("cyclic region location") {
    const unsigned zeros[] = {0, 0};
    const std::vector<SimplexPoint> empty(2);
    const auto id = cyclic_region_locate(zeros, SimplexPoint({0.2, 0.7}), empty);
    REQUIRE(id.has_value());
    CHECK(*id == SignedPermutation::identity(2));

    const unsigned one[] = {1};
    const std::vector<SimplexPoint> t{SimplexPoint({0.5})};
    const auto rot = cyclic_region_locate(one, SimplexPoint({0.8}), t);
    REQUIRE(rot.has_value());
    CHECK(rot->images() == std::vector<std::size_t>{1, 0});
    CHECK(rot->sign() == -1);

    CHECK_FALSE(cyclic_region_locate(one, SimplexPoint({0.5}), std::vector<SimplexPoint>{SimplexPoint({0.0})})
                    .has_value());
  }

  TEST_CASE("cyclic regions have equal volume") {
    const unsigned degrees[] = {1, 1};
    const auto list = enumerate_cyclic_shuffles(degrees);
    std::vector<std::size_t> hits(list.size(), 0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t samples = 100000;
    std::size_t used = 0;
    for (std::size_t k = 0; k < samples; ++k) {
      std::vector<double> s{unif(rng), unif(rng)};
      std::sort(s.begin(), s.end());
      const std::vector<SimplexPoint> t{SimplexPoint({unif(rng)}), SimplexPoint({unif(rng)})};
      const auto found = cyclic_region_locate(degrees, SimplexPoint(s), t);
      REQUIRE(found.has_value());
      const auto it = std::find(list.begin(), list.end(), *found);
      REQUIRE(it != list.end());
      ++hits[static_cast<std::size_t>(it - list.begin())];
      ++used;
    }
    const double expected = 1.0 / static_cast<double>(list.size());
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(used));
    for (std::size_t h : hits) CHECK(std::abs(static_cast<double>(h) / static_cast<double>(used) - expected) <= 4.0 * se);
  }
}
