#include "jlolab/spectral.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "jlolab/error.hpp"

namespace jlolab {

namespace {

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

void require_dim(const ComplexMatrix& m, std::size_t dim, const char* what) {
  if (m.rows() != static_cast<Eigen::Index>(dim) || m.cols() != static_cast<Eigen::Index>(dim))
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                            ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

}  // namespace

SpectralTripleFD::SpectralTripleFD(GradedSpace space, ComplexMatrix dirac, std::vector<ComplexMatrix> generators)
    : SpectralTripleFD(space, std::move(dirac), std::move(generators), identity_order(space.dim())) {}

SpectralTripleFD::SpectralTripleFD(GradedSpace space, ComplexMatrix dirac, std::vector<ComplexMatrix> generators,
                                   std::vector<std::size_t> natural_order)
    : space_(space),
      dirac_(std::move(dirac)),
      generators_(std::move(generators)),
      natural_order_(std::move(natural_order)) {
  require_dim(dirac_, space_.dim(), "SpectralTripleFD: D");
  for (const auto& g : generators_) require_dim(g, space_.dim(), "SpectralTripleFD: generator");
  if (natural_order_.size() != space_.dim()) throw DimensionMismatch("SpectralTripleFD: natural order has wrong length");
}

const HermitianEigen& SpectralTripleFD::laplacian_spectrum() const {
  std::call_once(spectrum_->once, [this] { spectrum_->eigen = hermitian_eigen(laplacian()); });
  return spectrum_->eigen;
}

ComplexMatrix SpectralTripleFD::embed(const ComplexMatrix& natural) const {
  require_dim(natural, dim(), "embed");
  return permute(natural, natural_order_);
}

ComplexMatrix SpectralTripleFD::to_natural(const ComplexMatrix& working) const {
  require_dim(working, dim(), "to_natural");
  std::vector<std::size_t> inverse(natural_order_.size());
  for (std::size_t i = 0; i < natural_order_.size(); ++i) inverse[natural_order_[i]] = i;
  return permute(working, inverse);
}

Chain SpectralTripleFD::embed(const Chain& natural) const {
  if (natural.algebra_dim() != dim()) throw DimensionMismatch("embed: chain algebra dimension differs from triple");
  return map_factors(natural, [this](const ComplexMatrix& m) { return permute(m, natural_order_); });
}

TripleDiagnostics validate_triple(const SpectralTripleFD& triple, double tol) {
  TripleDiagnostics diag;
  const ComplexMatrix g = triple.grading();
  const ComplexMatrix& d = triple.dirac();
  const double dnorm = operator_norm(d);
  diag.oddness_violation = operator_norm(g * d * g + d);
  diag.hermitian_violation = operator_norm(d - d.adjoint());
  if (diag.oddness_violation > tol * std::max(1.0, dnorm))
    diag.failures.push_back("D is not odd: ||gDg + D|| = " + std::to_string(diag.oddness_violation));
  if (diag.hermitian_violation > tol * std::max(1.0, dnorm))
    diag.failures.push_back("D is not Hermitian: ||D - D*|| = " + std::to_string(diag.hermitian_violation));
  for (std::size_t i = 0; i < triple.generators().size(); ++i) {
    const auto& a = triple.generators()[i];
    const double anorm = operator_norm(a);
    const double evenness = operator_norm(g * a * g - a);
    diag.generator_evenness.push_back(evenness);
    diag.generator_norms.push_back(anorm + operator_norm(d * a - a * d));
    if (evenness > tol * std::max(1.0, anorm))
      diag.failures.push_back("generator " + std::to_string(i) + " is not even: ||gag - a|| = " +
                              std::to_string(evenness));
  }
  return diag;
}

ComplexMatrix graded_right_factor(const SpectralTripleFD& first, const ComplexMatrix& x,
                                  const GradedSpace& second_space) {
  if (operator_norm(even_part(x, second_space)) > 1e-12 * std::max(1.0, operator_norm(x)))
    throw ParityError("graded_right_factor: X must be odd on the second factor");
  return kron(first.grading(), x);
}

std::vector<std::size_t> product_sort_order(const GradedSpace& s1, const GradedSpace& s2) {
  std::vector<std::size_t> even, odd;
  for (std::size_t a = 0; a < s1.dim(); ++a)
    for (std::size_t b = 0; b < s2.dim(); ++b) {
      const std::size_t k = a * s2.dim() + b;
      (s1.sign(a) * s2.sign(b) > 0 ? even : odd).push_back(k);
    }
  even.insert(even.end(), odd.begin(), odd.end());
  return even;
}

SpectralTripleFD product_triple(const SpectralTripleFD& t1, const SpectralTripleFD& t2) {
  const GradedSpace& s1 = t1.space();
  const GradedSpace& s2 = t2.space();
  const std::size_t n2 = s2.dim();
  const auto order = product_sort_order(s1, s2);
  const ComplexMatrix one1 = identity(s1.dim());
  const ComplexMatrix one2 = identity(n2);

  const ComplexMatrix dirac = kron(t1.dirac(), one2) + kron(t1.grading(), t2.dirac());
  std::vector<ComplexMatrix> generators;
  for (const auto& a : t1.generators()) generators.push_back(permute(kron(a, one2), order));
  for (const auto& b : t2.generators()) generators.push_back(permute(kron(one1, b), order));

  std::vector<std::size_t> natural(order.size());
  for (std::size_t s = 0; s < order.size(); ++s) {
    const std::size_t a = order[s] / n2;
    const std::size_t b = order[s] % n2;
    natural[s] = t1.natural_order()[a] * n2 + t2.natural_order()[b];
  }
  GradedSpace space(s1.dim_even() * s2.dim_even() + s1.dim_odd() * s2.dim_odd(),
                    s1.dim_even() * s2.dim_odd() + s1.dim_odd() * s2.dim_even());
  return SpectralTripleFD(space, permute(dirac, order), std::move(generators), std::move(natural));
}

ComplexMatrix product_element(const SpectralTripleFD& t1, const SpectralTripleFD& t2, const ComplexMatrix& a,
                              const ComplexMatrix& b) {
  require_dim(a, t1.dim(), "product_element: first factor");
  require_dim(b, t2.dim(), "product_element: second factor");
  return permute(kron(a, b), product_sort_order(t1.space(), t2.space()));
}

ComplexMatrix commutator_d(const SpectralTripleFD& triple, const ComplexMatrix& a) {
  require_dim(a, triple.dim(), "commutator_d");
  if (parity_of(a, triple.space()) != Parity::Even) throw ParityError("commutator_d: algebra element must be even");
  return triple.dirac() * a - a * triple.dirac();
}

ComplexMatrix heat(const SpectralTripleFD& triple, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat: t must be >= 0");
  if (t == 0.0) return identity(triple.dim());
  return hermitian_function(triple.laplacian_spectrum(), [t](double lambda) { return Complex(std::exp(-t * lambda)); });
}

KernelProjection kernel_projection(const SpectralTripleFD& triple, std::optional<double> eps) {
  const auto& spectrum = triple.laplacian_spectrum();
  double max_abs = 0.0;
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) max_abs = std::max(max_abs, std::abs(spectrum.eigenvalues(i)));
  KernelProjection out;
  out.threshold = eps ? *eps : std::max(1e-9 * max_abs, 1e-12);
  if (!(out.threshold > 0.0)) throw std::invalid_argument("kernel_projection: eps must be positive");
  const auto n = static_cast<Eigen::Index>(triple.dim());
  out.projection = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = std::abs(spectrum.eigenvalues(i));
    if (lam < out.threshold) {
      out.projection += spectrum.vectors.col(i) * spectrum.vectors.col(i).adjoint();
      ++out.rank;
    } else if (lam < 10.0 * out.threshold) {
      out.gap_warning = true;
    }
  }
  return out;
}

long index(const SpectralTripleFD& triple) {
  const auto kernel = kernel_projection(triple);
  const double value = supertrace(kernel.projection, triple.space()).real();
  const double rounded = std::round(value);
  if (std::abs(value - rounded) >= 0.01)
    throw NonIntegerIndex("index: Str(P) = " + std::to_string(value) + " is not an integer", value);
  return static_cast<long>(rounded);
}

SpectralTripleFD ampliate(const SpectralTripleFD& triple, std::size_t k) {
  if (k == 0) throw std::invalid_argument("ampliate: k must be >= 1");
  if (k == 1) return triple;
  const ComplexMatrix one = identity(k);
  std::vector<ComplexMatrix> generators;
  for (const auto& g : triple.generators()) generators.push_back(kron(g, one));
  std::vector<std::size_t> natural;
  natural.reserve(triple.dim() * k);
  for (std::size_t s = 0; s < triple.dim(); ++s)
    for (std::size_t c = 0; c < k; ++c) natural.push_back(triple.natural_order()[s] * k + c);
  GradedSpace space(triple.space().dim_even() * k, triple.space().dim_odd() * k);
  return SpectralTripleFD(space, kron(triple.dirac(), one), std::move(generators), std::move(natural));
}

void require_projection(const SpectralTripleFD& triple, const Idempotent& p, double tol) {
  const std::size_t n = triple.dim() * p.k;
  require_dim(p.e, n, "idempotent");
  const double scale = tol * std::max(1.0, operator_norm(p.e));
  if (operator_norm(p.e - p.e.adjoint()) > scale) throw NotSelfAdjoint("idempotent is not self-adjoint");
  if (operator_norm(p.e * p.e - p.e) > scale) throw NotIdempotent("e^2 != e");
  const GradedSpace space(triple.space().dim_even() * p.k, triple.space().dim_odd() * p.k);
  if (parity_of(p.e, space, tol) != Parity::Even) throw ParityError("idempotent must commute with the grading");
}

namespace {

// Orthonormal basis of the range of a projection block.
ComplexMatrix range_basis(const ComplexMatrix& block) {
  if (block.rows() == 0) return ComplexMatrix(0, 0);
  const auto eig = hermitian_eigen(0.5 * (block + block.adjoint()));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > 0.5) cols.push_back(i);
  ComplexMatrix basis(block.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(cols[c]);
  return basis;
}

}  // namespace

SpectralTripleFD compress_by_idempotent(const SpectralTripleFD& triple, const Idempotent& p) {
  require_projection(triple, p);
  const SpectralTripleFD amp = ampliate(triple, p.k);
  const auto ne = static_cast<Eigen::Index>(amp.space().dim_even());
  const auto no = static_cast<Eigen::Index>(amp.space().dim_odd());
  const ComplexMatrix v0 = range_basis(p.e.topLeftCorner(ne, ne));
  const ComplexMatrix v1 = range_basis(p.e.bottomRightCorner(no, no));
  ComplexMatrix v = ComplexMatrix::Zero(ne + no, v0.cols() + v1.cols());
  v.topLeftCorner(ne, v0.cols()) = v0;
  v.bottomRightCorner(no, v1.cols()) = v1;

  const ComplexMatrix vh = v.adjoint();
  std::vector<ComplexMatrix> generators;
  for (const auto& g : amp.generators()) generators.push_back(vh * g * v);
  GradedSpace space(static_cast<std::size_t>(v0.cols()), static_cast<std::size_t>(v1.cols()));
  return SpectralTripleFD(space, vh * amp.dirac() * v, std::move(generators));
}

Idempotent product_idempotent(const SpectralTripleFD& t1, const Idempotent& e1, const SpectralTripleFD& t2,
                              const Idempotent& e2) {
  require_dim(e1.e, t1.dim() * e1.k, "product_idempotent: e1");
  require_dim(e2.e, t2.dim() * e2.k, "product_idempotent: e2");
  // kron(e1, e2) is indexed by (h1, c1, h2, c2); the product triple ampliated by
  // k1 k2 wants (sorted(h1, h2), c1, c2).
  const auto sorted = product_sort_order(t1.space(), t2.space());
  const std::size_t n2 = t2.dim();
  const std::size_t k1 = e1.k, k2 = e2.k;
  std::vector<std::size_t> order;
  order.reserve(sorted.size() * k1 * k2);
  for (std::size_t s : sorted) {
    const std::size_t h1 = s / n2, h2 = s % n2;
    for (std::size_t c1 = 0; c1 < k1; ++c1)
      for (std::size_t c2 = 0; c2 < k2; ++c2) order.push_back(((h1 * k1 + c1) * n2 + h2) * k2 + c2);
  }
  return Idempotent{permute(kron(e1.e, e2.e), order), k1 * k2};
}

}  // namespace jlolab
