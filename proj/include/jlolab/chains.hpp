#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "jlolab/matrix.hpp"

namespace jlolab {

/// Hard cap on the number of elementary terms any chain operation may produce.
inline constexpr std::size_t kMaxChainTerms = 1'000'000;

/// coeff * (a^0, a^1, ..., a^n) with all factors d x d.
struct ElementaryChain {
  Complex coeff{1.0, 0.0};
  std::vector<ComplexMatrix> factors;

  std::size_t degree() const noexcept { return factors.empty() ? 0 : factors.size() - 1; }
};

/// Finite formal linear combination of elementary tensors over M_d.
///
/// Terms are stored as representatives of A (x) (A/C)^n; equality of chains is
/// only meaningful after projecting slots >= 1 modulo scalars (see
/// quotient_residual).
class Chain {
 public:
  Chain() = default;
  explicit Chain(std::size_t algebra_dim) : dim_(algebra_dim) {}
  Chain(std::size_t algebra_dim, std::vector<ElementaryChain> terms);

  /// Single elementary term. All factors must be square of equal size.
  static Chain elementary(std::vector<ComplexMatrix> factors, Complex coeff = 1.0);
  /// The degree-zero chain (1) over M_d.
  static Chain unit(std::size_t algebra_dim);

  std::size_t algebra_dim() const noexcept { return dim_; }
  const std::vector<ElementaryChain>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t max_degree() const noexcept;

  /// Terms of exactly degree n, in stored order.
  Chain degree_part(std::size_t n) const;

  void add(ElementaryChain term);
  void append(const Chain& other);

  Chain operator+(const Chain& other) const;
  Chain operator-(const Chain& other) const;
  Chain scaled(Complex factor) const;

 private:
  std::size_t dim_ = 0;
  std::vector<ElementaryChain> terms_;
};

/// b(a^0..a^n) = sum_{i<n} (-1)^i (.., a^i a^{i+1}, ..) + (-1)^n (a^n a^0, a^1, .., a^{n-1}).
Chain hochschild_b(const Chain& chain);

/// B(a^0..a^n) = sum_i (-1)^{n i} (1, a^i, .., a^n, a^0, .., a^{i-1}).
Chain connes_B(const Chain& chain);

/// Drops zero terms and terms with a scalar multiple of the identity in some
/// slot >= 1 (detected to relative tolerance `tol`).
Chain normalize(const Chain& chain, double tol = 1e-12);

/// Shuffle product over M_{d1} (x) M_{d2}, factors embedded with kron.
Chain shuffle_product(const Chain& alpha, const Chain& beta);

/// B_r(alpha_1, ..., alpha_r) over M_{d1} (x) ... (x) M_{dr}.
Chain br_operation(std::span<const Chain> chains);

/// alpha x' beta = B_2(alpha, beta).
Chain cyclic_shuffle_product(const Chain& alpha, const Chain& beta);

/// sum_n lambda^n ||alpha_n|| / sqrt(n!) with the surrogate norm
/// ||sum c (a^0..a^n)|| = sum |c| prod ||a^k||_op.
double entire_norm(const Chain& chain, unsigned lambda);

/// Applies f to every factor (for basis changes).
Chain map_factors(const Chain& chain, const std::function<ComplexMatrix(const ComplexMatrix&)>& f);

/// Size of a chain as an element of the quotient A (x) (A/C)^n.
///
/// Slots >= 1 are projected onto trace-free matrices, which realizes M_d / C.
/// When the dense tensor is small enough the Frobenius norm of the projected
/// tensor is returned; otherwise the maximum over `probes` random rank-one
/// functionals (unit Frobenius norm per slot, fixed seed) is used.
double quotient_residual(const Chain& chain, std::size_t probes = 16, std::uint64_t seed = 0x5eedULL);

/// Frobenius norm of the dense projected tensor; throws ChainTooLarge when a
/// degree part would exceed `max_entries` entries.
double quotient_tensor_norm(const Chain& chain, std::size_t max_entries = std::size_t{1} << 22);

}  // namespace jlolab
