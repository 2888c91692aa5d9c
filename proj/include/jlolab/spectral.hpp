#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "jlolab/chains.hpp"
#include "jlolab/matrix.hpp"

namespace jlolab {

/// Finite-dimensional spectral triple (A, H, D).
///
/// H carries the canonical grading of `space`, D is odd and Hermitian, and the
/// algebra is generated by even matrices. The constructor only checks shapes;
/// use validate_triple() for the analytic conditions.
///
/// Triples built by product_triple() live in a re-sorted basis so that the
/// grading stays canonical. natural_order() maps a position in that basis to
/// the position in the plain Kronecker basis of the underlying factors, and
/// embed() carries a matrix from the Kronecker basis into the working basis.
class SpectralTripleFD {
 public:
  SpectralTripleFD() = default;
  SpectralTripleFD(GradedSpace space, ComplexMatrix dirac, std::vector<ComplexMatrix> generators = {});
  SpectralTripleFD(GradedSpace space, ComplexMatrix dirac, std::vector<ComplexMatrix> generators,
                   std::vector<std::size_t> natural_order);

  const GradedSpace& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  const ComplexMatrix& dirac() const noexcept { return dirac_; }
  ComplexMatrix grading() const { return space_.grading(); }
  ComplexMatrix laplacian() const { return dirac_ * dirac_; }
  const std::vector<ComplexMatrix>& generators() const noexcept { return generators_; }
  const std::vector<std::size_t>& natural_order() const noexcept { return natural_order_; }

  /// Eigendecomposition of D^2, computed once and shared between copies.
  const HermitianEigen& laplacian_spectrum() const;

  /// Matrix in the Kronecker basis -> working basis.
  ComplexMatrix embed(const ComplexMatrix& natural) const;
  /// Working basis -> Kronecker basis.
  ComplexMatrix to_natural(const ComplexMatrix& working) const;
  /// embed() applied to every factor.
  Chain embed(const Chain& natural) const;

 private:
  struct SpectrumCache {
    std::once_flag once;
    HermitianEigen eigen;
  };

  GradedSpace space_;
  ComplexMatrix dirac_;
  std::vector<ComplexMatrix> generators_;
  std::vector<std::size_t> natural_order_;
  std::shared_ptr<SpectrumCache> spectrum_ = std::make_shared<SpectrumCache>();
};

/// Idempotent e in A (x) M_k acting on H (x) C^k, H-index major.
struct Idempotent {
  ComplexMatrix e;
  std::size_t k = 1;
};

struct TripleDiagnostics {
  double oddness_violation = 0.0;      // ||gDg + D||
  double hermitian_violation = 0.0;    // ||D - D*||
  std::vector<double> generator_evenness;  // ||g a g - a|| per generator
  std::vector<double> generator_norms;     // ||a|| + ||[D, a]|| per generator
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
};

/// Never throws on analytic failures; reports residuals and a failure list.
TripleDiagnostics validate_triple(const SpectralTripleFD& triple, double tol = kParityTolerance);

/// gamma_1 (x) X, the matrix of 1 (x)^ X for odd X on the second factor.
ComplexMatrix graded_right_factor(const SpectralTripleFD& first, const ComplexMatrix& x,
                                  const GradedSpace& second_space);

/// Graded product (A1 (x) A2, H1 (x)^ H2, D1 x D2) with D = D1 (x) 1 + g1 (x) D2,
/// re-sorted to the canonical grading.
SpectralTripleFD product_triple(const SpectralTripleFD& t1, const SpectralTripleFD& t2);

/// Stable reordering of the Kronecker basis of H1 (x) H2 that puts the even
/// vectors first: result[s] = Kronecker index placed at sorted position s.
std::vector<std::size_t> product_sort_order(const GradedSpace& s1, const GradedSpace& s2);

/// kron(a, b) expressed in the working basis of product_triple(t1, t2); a and b
/// are given in the working bases of t1 and t2.
ComplexMatrix product_element(const SpectralTripleFD& t1, const SpectralTripleFD& t2, const ComplexMatrix& a,
                              const ComplexMatrix& b);

/// [D, a] for even a; throws ParityError otherwise.
ComplexMatrix commutator_d(const SpectralTripleFD& triple, const ComplexMatrix& a);

/// exp(-t D^2).
ComplexMatrix heat(const SpectralTripleFD& triple, double t);

struct KernelProjection {
  ComplexMatrix projection;
  double threshold = 0.0;
  std::size_t rank = 0;
  bool gap_warning = false;  // some eigenvalue of D^2 in [eps, 10 eps)
};

/// Projection onto ker(D^2). With no explicit eps the threshold is
/// max(1e-9 * max|lambda|, 1e-12).
KernelProjection kernel_projection(const SpectralTripleFD& triple, std::optional<double> eps = std::nullopt);

/// round(Str(P_ker)); throws NonIntegerIndex if off by >= 0.01.
long index(const SpectralTripleFD& triple);

/// (A (x) M_k, H (x) C^k, D (x) 1).
SpectralTripleFD ampliate(const SpectralTripleFD& triple, std::size_t k);

/// Restriction of the ampliated triple to the range of a self-adjoint even
/// idempotent: operator pDp, generators p a p.
SpectralTripleFD compress_by_idempotent(const SpectralTripleFD& triple, const Idempotent& p);

/// Checks e* = e, e^2 = e and evenness on H (x) C^k.
void require_projection(const SpectralTripleFD& triple, const Idempotent& p, double tol = kDefaultTolerance);

/// e1 (x) e2 as an idempotent over the product triple, ampliation k1 * k2.
Idempotent product_idempotent(const SpectralTripleFD& t1, const Idempotent& e1,
                              const SpectralTripleFD& t2, const Idempotent& e2);

}  // namespace jlolab
