#include "jlolab/random.hpp"

#include <stdexcept>

namespace jlolab {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t state = seed ^ (trial * 0xd1b54a32d192ed03ULL);
  splitmix64(state);
  return splitmix64(state);
}

ComplexMatrix RandomSource::gaussian(std::size_t rows, std::size_t cols) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = normal();
      m(i, j) = Complex(re, normal());
    }
  return m;
}

namespace {

ComplexMatrix normalized(ComplexMatrix m, double scale) {
  const double n = operator_norm(m);
  if (n > 0.0) m *= scale / n;
  return m;
}

}  // namespace

ComplexMatrix RandomSource::even_element(const GradedSpace& space) {
  const auto ne = static_cast<Eigen::Index>(space.dim_even());
  const auto no = static_cast<Eigen::Index>(space.dim_odd());
  ComplexMatrix m = ComplexMatrix::Zero(ne + no, ne + no);
  m.topLeftCorner(ne, ne) = gaussian(space.dim_even(), space.dim_even());
  m.bottomRightCorner(no, no) = gaussian(space.dim_odd(), space.dim_odd());
  return normalized(std::move(m), 1.0);
}

ComplexMatrix RandomSource::even_hermitian(const GradedSpace& space) {
  const ComplexMatrix m = even_element(space);
  return normalized(m + m.adjoint(), 1.0);
}

ComplexMatrix RandomSource::odd_hermitian(const GradedSpace& space, double scale) {
  const auto ne = static_cast<Eigen::Index>(space.dim_even());
  const auto no = static_cast<Eigen::Index>(space.dim_odd());
  ComplexMatrix m = ComplexMatrix::Zero(ne + no, ne + no);
  const ComplexMatrix x = gaussian(space.dim_even(), space.dim_odd());
  m.topRightCorner(ne, no) = x;
  m.bottomLeftCorner(no, ne) = x.adjoint();
  return normalized(std::move(m), scale);
}

SpectralTripleFD RandomSource::triple(std::size_t dim_even, std::size_t dim_odd, double dirac_scale,
                                      std::size_t generators) {
  const GradedSpace space(dim_even, dim_odd);
  ComplexMatrix d = odd_hermitian(space, dirac_scale);
  std::vector<ComplexMatrix> gens;
  for (std::size_t i = 0; i < generators; ++i) gens.push_back(even_hermitian(space));
  return SpectralTripleFD(space, std::move(d), std::move(gens));
}

Chain RandomSource::chain(const GradedSpace& space, std::size_t degree, std::size_t terms) {
  Chain out(space.dim());
  for (std::size_t t = 0; t < terms; ++t) {
    ElementaryChain term;
    term.coeff = Complex(normal(), normal());
    for (std::size_t i = 0; i <= degree; ++i) term.factors.push_back(even_element(space));
    out.add(std::move(term));
  }
  return out;
}

Idempotent RandomSource::projection(const GradedSpace& space, std::size_t k, std::size_t rank_even,
                                    std::size_t rank_odd) {
  const std::size_t ne = space.dim_even() * k;
  const std::size_t no = space.dim_odd() * k;
  if (rank_even > ne || rank_odd > no) throw std::invalid_argument("projection: rank exceeds dimension");
  auto block = [this](std::size_t n, std::size_t rank) {
    if (rank == 0) return ComplexMatrix(ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    const ComplexMatrix q = gaussian(n, rank).householderQr().householderQ() *
                            ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rank));
    return ComplexMatrix(q * q.adjoint());
  };
  // Blocks live in the grading-sorted order of H (x) C^k, H-index major.
  ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(ne + no), static_cast<Eigen::Index>(ne + no));
  e.topLeftCorner(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(ne)) = block(ne, rank_even);
  e.bottomRightCorner(static_cast<Eigen::Index>(no), static_cast<Eigen::Index>(no)) = block(no, rank_odd);
  return Idempotent{std::move(e), k};
}

}  // namespace jlolab
