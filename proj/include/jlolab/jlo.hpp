#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "jlolab/chains.hpp"
#include "jlolab/combinatorics.hpp"
#include "jlolab/spectral.hpp"

namespace jlolab {

inline constexpr std::size_t kMaxJloDegree = 12;

struct Estimate {
  Complex value{};
  double std_error = 0.0;  // zero for exact evaluation
  std::size_t samples = 0;
};

/// ClusterSum: dynamic program over eigenvalue-cluster occupation counts,
/// exponential in the degree when D^2 has many distinct eigenvalues.
/// BlockExponential: the path integral is the corner block of exp(M) for the
/// block bidiagonal M with -D^2 on the diagonal and the derivations above it.
enum class ExactMethod { Automatic, ClusterSum, BlockExponential };

/// Exact and Monte-Carlo evaluation of the JLO cochain of one triple.
///
/// Exact evaluation expands every heat factor in the spectral projections of
/// D^2. The simplex integral of a product of exponentials only depends on the
/// multiset of eigenvalues visited, so the sum over eigenvalue strings is
/// accumulated per multiset (a dynamic program over occupation counts) and
/// each multiset is weighted once by divided_diff_exp. Eigenvalues closer than
/// `cluster_tol * (1 + max eigenvalue)` share a spectral projection. When the
/// number of multisets is large the block exponential is used instead.
///
/// The evaluator is safe to share between threads.
class JloEvaluator {
 public:
  explicit JloEvaluator(SpectralTripleFD triple, double cluster_tol = 1e-11);

  const SpectralTripleFD& triple() const noexcept { return triple_; }
  std::size_t cluster_count() const noexcept { return clusters_.size(); }

  /// Str(a0 e^{-t1 D^2} da1 e^{-(t2-t1) D^2} ... dan e^{-(1-tn) D^2}).
  /// `first` may be odd; the remaining factors must be even.
  Complex integrand(const ComplexMatrix& first, std::span<const ComplexMatrix> rest, const SimplexPoint& t) const;

  /// Ch^n_D(a0, ..., an), integrated exactly.
  Complex elementary(const ComplexMatrix& first, std::span<const ComplexMatrix> rest,
                     ExactMethod method = ExactMethod::Automatic) const;
  /// Method Automatic picks for a given degree.
  ExactMethod method_for(std::size_t degree) const;

  /// Linear extension of elementary() over the chain.
  Complex cochain(const Chain& chain) const;
  /// Same integrals with every first slot replaced by [D, a0].
  Complex bch(const Chain& chain) const;
  /// cochain + bch / sqrt(2).
  Complex perturbed(const Chain& chain) const;
  /// cochain(chain + delta(chain)), the second route to perturbed().
  Complex perturbed_via_delta(const Chain& chain) const;

  /// Monte-Carlo quadrature over the simplex: n sorted uniforms per sample.
  Estimate monte_carlo(const Chain& chain, std::size_t samples, std::uint64_t seed) const;

  /// Simplex integral cache for a multiset of spectral clusters.
  double simplex_weight(const std::vector<std::uint8_t>& counts) const;

 private:
  struct Cluster {
    double eigenvalue = 0.0;
    std::size_t begin = 0;  // column range in the eigenbasis
    std::size_t size = 0;
  };

  std::vector<ComplexMatrix> rotated_derivations(std::span<const ComplexMatrix> rest) const;
  Complex cluster_sum(const ComplexMatrix& first_rotated, const std::vector<ComplexMatrix>& derivations) const;
  // Integral over the simplex of e^{-s0 L} X1 e^{-s1 L} ... Xn e^{-sn L}, eigenbasis.
  ComplexMatrix path_integral(const std::vector<ComplexMatrix>& derivations) const;
  Complex elementary_rotated(const ComplexMatrix& first_rotated, std::span<const ComplexMatrix> rest,
                             ExactMethod method = ExactMethod::Automatic) const;
  void check_chain(const Chain& chain) const;

  SpectralTripleFD triple_;
  ComplexMatrix eigvecs_;
  ComplexMatrix gamma_rotated_;
  ComplexMatrix dirac_rotated_;
  RealVector eigenvalues_;
  std::vector<Cluster> clusters_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::vector<std::uint8_t>, double> weight_cache_;
};

/// Single-shot wrappers around JloEvaluator.
Complex jlo_integrand(const SpectralTripleFD& triple, std::span<const ComplexMatrix> factors, const SimplexPoint& t);
Complex jlo_cochain(const SpectralTripleFD& triple, const Chain& chain);
Complex bch_cochain(const SpectralTripleFD& triple, const Chain& chain);
Complex perturbed_cochain(const SpectralTripleFD& triple, const Chain& chain);

/// delta(a0, ..., an) = (1/sqrt 2) ([D, a0], a1, ..., an).
Chain delta(const SpectralTripleFD& triple, const Chain& chain);

/// Ch_0(e) = (e); Ch_{2n}(e) = (-1)^n (2n)!/n! (e - 1/2, e, ..., e) for
/// 1 <= n <= max_degree / 2. The chain lives on H (x) C^k.
Chain chern_idempotent(const Idempotent& e, std::size_t max_degree);

struct PairingReport {
  Complex value{};
  std::size_t truncation_degree = 0;
  double last_term_magnitude = 0.0;
  long nearest_integer = 0;
  std::optional<long> target_index;  // Fredholm index of pDp
  std::vector<Complex> terms;        // Ch^{2n}(Ch_{2n}(e)), n = 0, 1, ...

  bool agrees(double tol = 0.01) const;
};

/// <Ch_D, Ch(e)> summed until a term drops below 1e-12 (1 + |value|).
/// Throws NonConvergent past degree 12 and NonIntegerIndex if the value is not
/// within `tol` of an integer.
PairingReport index_pairing(const SpectralTripleFD& triple, const Idempotent& e, double tol = 0.01);

struct TheoremResidual {
  Complex lhs{};
  Complex rhs{};
  double residual = 0.0;  // |lhs - rhs|
  std::size_t product_terms = 0;
};

/// Part 1: Ch_{D1 x ... x Dr}(a1 x ... x ar) against prod Ch_{Di}(ai).
/// Part 2: Ch_{D1 x ... x Dr}(B_r(a1, ..., ar)) against (1/r!) prod BCh_{Di}(ai).
/// Chains are given in the working bases of the (non-product) factors.
TheoremResidual verify_theorem_ainf(std::span<const SpectralTripleFD> triples, std::span<const Chain> chains,
                                    int part);

/// Left-nested product T1 x T2 x ... x Tr.
SpectralTripleFD product_of(std::span<const SpectralTripleFD> triples);

}  // namespace jlolab
