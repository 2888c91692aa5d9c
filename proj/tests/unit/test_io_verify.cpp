#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "jlolab/error.hpp"
#include "jlolab/json_io.hpp"
#include "jlolab/random.hpp"
#include "jlolab/verify.hpp"

using namespace jlolab;

TEST_SUITE("io_verify") {
  TEST_CASE("matrix round trip") {
    RandomSource rng(1);
    const ComplexMatrix m = rng.gaussian(2, 3);
    const Json j = matrix_to_json(m);
    CHECK(j.at("rows") == 2);
    CHECK(j.at("cols") == 3);
    CHECK(j.at("entries").size() == 6);
    CHECK(j.at("entries")[1][0].get<double>() == m(0, 1).real());
    CHECK(matrix_from_json(j) == m);
  }

  TEST_CASE("malformed matrices raise ParseError") {
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"entries":[[1,0]]})")), ParseError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"entries":[[1,0,3]]})")), ParseError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1})")), ParseError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"entries":[["a",0]]})")), ParseError);
  }

  TEST_CASE("triple, chain and idempotent round trips") {
    RandomSource rng(2);
    const auto t = rng.triple(2, 1);
    const auto back = triple_from_json(triple_to_json(t));
    CHECK(back.space() == t.space());
    CHECK(back.dirac() == t.dirac());
    CHECK(back.generators().size() == t.generators().size());

    const Chain c = rng.chain(t.space(), 2, 3);
    const Chain cb = chain_from_json(chain_to_json(c));
    CHECK(cb.size() == 3);
    CHECK(quotient_residual(cb - c) < 1e-15);

    const Idempotent e = rng.projection(t.space(), 2, 1, 1);
    const Idempotent eb = idempotent_from_json(idempotent_to_json(e));
    CHECK(eb.k == 2);
    CHECK(eb.e == e.e);

    CHECK_THROWS_AS(triple_from_json(Json::parse(R"({"dim_even":1})")), ParseError);
    CHECK_THROWS_AS(idempotent_from_json(Json::parse(R"({"k":0,"e":{"rows":1,"cols":1,"entries":[[1,0]]}})")),
                    ParseError);
  }

  TEST_CASE("permutations serialize with one-based images") {
    const Json j = permutation_to_json(SignedPermutation({1, 2, 0}));
    CHECK(j.at("images") == Json::array({2, 3, 1}));
    CHECK(j.at("sign") == 1);
  }

  TEST_CASE("missing files raise ParseError") {
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), ParseError);
  }

  TEST_CASE("config defaults and validation") {
    const RunConfig d = config_from_json(Json::object());
    CHECK(d.seed == 42);
    CHECK(d.dims.size() == 4);
    CHECK(d.max_degree == 2);
    CHECK(d.trials == 10);
    CHECK(d.tolerance == 1e-8);

    const RunConfig c = config_from_json(Json::parse(R"({"seed":7,"dims":[[1,1]],"trials":3})"));
    CHECK(c.seed == 7);
    CHECK(c.dims.size() == 1);
    CHECK(c.trials == 3);

    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"max_degree":5})")), ParseError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"dims":[[3,2]]})")), ParseError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"dims":[[0,0]]})")), ParseError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"colour":1})")), ParseError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"tolerance":-1})")), ParseError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"trials":"many"})")), ParseError);
    CHECK_THROWS_AS(config_from_json(Json::parse("[1,2]")), ParseError);

    const RunConfig round = config_from_json(config_to_json(c));
    CHECK(round.seed == c.seed);
    CHECK(round.dims == c.dims);
  }

  TEST_CASE("a vacuous run passes with a warning") {
    RunConfig c;
    c.trials = 0;
    const auto r = run_verification(c);
    CHECK(r.checks.empty());
    CHECK(r.all_pass());
    CHECK(r.warnings.size() == 1);
  }

  TEST_CASE("the default suites pass and the report is independent of threads") {
    RunConfig c;
    c.trials = 2;
    const auto one = run_verification(c, 1);
    const auto three = run_verification(c, 3);
    CHECK(one.checks.size() >= 10 * c.trials);
    CHECK(one.all_pass());
    CHECK(one.to_json("t").dump() == three.to_json("t").dump());

    const Json j = one.to_json("2026-01-01T00:00:00Z");
    CHECK(j.at("schema") == 1);
    const auto& first = j.at("checks")[0];
    for (const char* key : {"identity", "residual", "tolerance", "pass", "seed", "params"}) CHECK(first.contains(key));
    CHECK(one.text_table().find("0 failed") != std::string::npos);
  }

  TEST_CASE("an unattainable tolerance fails") {
    RunConfig c;
    c.trials = 1;
    c.tolerance = 1e-30;
    const auto r = run_verification(c);
    CHECK_FALSE(r.all_pass());
    CHECK(r.failures() > 0);
  }

  TEST_CASE("suite names are unique") {
    const auto names = suite_names();
    CHECK(names.size() >= 10);
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j) CHECK(names[i] != names[j]);
    CHECK_THROWS(run_check("no_such_suite", RunConfig{}, 1));
  }

  TEST_CASE("seeds are derived deterministically") {
    CHECK(trial_seed(42, 0) == trial_seed(42, 0));
    CHECK(trial_seed(42, 0) != trial_seed(42, 1));
    CHECK(trial_seed(42, 0) != trial_seed(43, 0));
  }
}
