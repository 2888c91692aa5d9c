#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "jlolab/chains.hpp"
#include "jlolab/spectral.hpp"

namespace jlolab {

/// SplitMix64 step; used to derive independent per-trial seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of trial `trial` for a run started with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Deterministic generator of test objects.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return unif_(engine_); }
  double normal() { return norm_(engine_); }
  std::mt19937_64& engine() noexcept { return engine_; }

  /// Entries i.i.d. standard complex Gaussian.
  ComplexMatrix gaussian(std::size_t rows, std::size_t cols);
  /// Even (block diagonal) matrix with operator norm 1.
  ComplexMatrix even_element(const GradedSpace& space);
  /// Even Hermitian matrix with operator norm 1.
  ComplexMatrix even_hermitian(const GradedSpace& space);
  /// Odd Hermitian matrix with operator norm `scale`.
  ComplexMatrix odd_hermitian(const GradedSpace& space, double scale = 1.0);

  /// Triple with a random odd D of norm `dirac_scale` and `generators` even
  /// Hermitian generators.
  SpectralTripleFD triple(std::size_t dim_even, std::size_t dim_odd, double dirac_scale = 1.0,
                          std::size_t generators = 2);

  /// `terms` elementary terms of the given degree with even factors.
  Chain chain(const GradedSpace& space, std::size_t degree, std::size_t terms = 1);

  /// Even orthogonal projection on H (x) C^k with the given ranks on the even
  /// and odd parts.
  Idempotent projection(const GradedSpace& space, std::size_t k, std::size_t rank_even, std::size_t rank_odd);

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace jlolab
