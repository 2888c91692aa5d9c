#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jlolab/json_io.hpp"

namespace jlolab {

/// Settings of a randomized verification run.
struct RunConfig {
  std::uint64_t seed = 42;
  std::vector<std::pair<std::size_t, std::size_t>> dims{{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  std::size_t max_degree = 2;
  std::size_t trials = 10;
  double tolerance = 1e-8;
  std::size_t mc_samples = 20000;
  std::string report_path;
};

inline constexpr std::size_t kMaxConfigDegree = 4;
inline constexpr std::size_t kMaxProductDim = 16;

/// Missing keys keep their defaults; unknown keys and out-of-range values
/// raise ParseError.
RunConfig config_from_json(const Json& j, RunConfig base = {});
Json config_to_json(const RunConfig& config);
/// Throws ParseError if the config violates its invariants.
void validate_config(const RunConfig& config);

struct CheckResult {
  std::string identity;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  Json params = Json::object();
};

struct VerifyReport {
  RunConfig config;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  bool all_pass() const;
  std::size_t failures() const;
  Json to_json(const std::string& timestamp) const;
  std::string text_table() const;
};

/// Names of the identity suites, in report order.
std::vector<std::string> suite_names();

/// Runs every suite `config.trials` times. Trial t of suite s draws its
/// objects from trial_seed(trial_seed(seed, t), s). Work is spread over
/// `threads` workers; the report order does not depend on it.
VerifyReport run_verification(const RunConfig& config, std::size_t threads = 1);

/// Runs a single suite for one trial seed.
CheckResult run_check(const std::string& suite, const RunConfig& config, std::uint64_t seed);

/// min(hardware concurrency, JLOLAB_THREADS) with a floor of 1.
std::size_t worker_count();

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace jlolab
