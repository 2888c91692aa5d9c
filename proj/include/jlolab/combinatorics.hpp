#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace jlolab {

/// A permutation of {0, ..., n-1} together with its sign.
///
/// image(i) is the position that element i is sent to. Elements are indexed in
/// the lexicographic order of the shuffle (or cyclic shuffle) index set, so
/// "element i" is the i-th tensor slot after the zeroth one.
class SignedPermutation {
 public:
  SignedPermutation() = default;
  /// Computes the sign from the cycle structure. Throws std::invalid_argument if
  /// `images` is not a bijection.
  explicit SignedPermutation(std::vector<std::size_t> images);

  static SignedPermutation identity(std::size_t n);

  std::size_t degree() const noexcept { return images_.size(); }
  std::size_t image(std::size_t i) const { return images_.at(i); }
  const std::vector<std::size_t>& images() const noexcept { return images_; }
  int sign() const noexcept { return sign_; }

  /// preimage()[k] = element that lands in position k.
  std::vector<std::size_t> preimage() const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  std::vector<std::size_t> images_;
  int sign_ = 1;
};

/// Signature via transposition count n - #cycles.
int signature_by_cycles(std::span<const std::size_t> images);
/// Signature via inversion count; independent of the cycle route.
int signature_by_inversions(std::span<const std::size_t> images);

/// A point 0 <= t^1 <= ... <= t^n <= 1 of the standard n-simplex.
class SimplexPoint {
 public:
  SimplexPoint() = default;
  /// Throws std::invalid_argument unless the coordinates are ordered in [0, 1].
  explicit SimplexPoint(std::vector<double> coords);

  std::size_t degree() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const noexcept { return coords_; }

 private:
  std::vector<double> coords_;
};

std::uint64_t binomial(unsigned n, unsigned k);
/// (sum of parts)! / prod(part!)
std::uint64_t multinomial(std::span<const unsigned> parts);
/// (r + sum p_i)! / (r! p_1! ... p_r!), the number of (p_1..p_r)-cyclic shuffles.
std::uint64_t cyclic_shuffle_count(std::span<const unsigned> block_degrees);

/// All (p, q)-shuffles in lexicographic order of the positions taken by the
/// first block. The identity comes first.
std::vector<SignedPermutation> enumerate_shuffles(unsigned p, unsigned q);

/// All (p_1, ..., p_r)-cyclic shuffles of the set
/// {(0,1), ..., (p_1,1), ..., (0,r), ..., (p_r,r)} in lexicographic order.
///
/// Ordered by the rotation offsets (j_1, ..., j_r) and then by the
/// interleaving; the identity comes first.
std::vector<SignedPermutation> enumerate_cyclic_shuffles(std::span<const unsigned> block_degrees);

/// True iff chi applied to the concatenation (s, t) is nondecreasing.
bool shuffle_region_contains(const SignedPermutation& chi, const SimplexPoint& s, const SimplexPoint& t);

/// Forms (s^1, s^1 + t_1^1, ..., s^r + t_r^{p_r}) modulo 1 and returns the cyclic
/// shuffle that sorts it, or nullopt on ties or when the sorting permutation
/// is not a cyclic shuffle (s unsorted).
std::optional<SignedPermutation> cyclic_region_locate(std::span<const unsigned> block_degrees,
                                                      const SimplexPoint& s,
                                                      std::span<const SimplexPoint> t);

/// True iff sigma satisfies both defining conditions of a cyclic shuffle.
bool is_cyclic_shuffle(const SignedPermutation& sigma, std::span<const unsigned> block_degrees);
bool is_shuffle(const SignedPermutation& chi, unsigned p, unsigned q);

}  // namespace jlolab
