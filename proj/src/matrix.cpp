#include "jlolab/matrix.hpp"

#include <numeric>
#include <string>

#include "jlolab/error.hpp"

namespace jlolab {

ComplexMatrix GradedSpace::grading() const {
  ComplexMatrix g = ComplexMatrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) g(i, i) = static_cast<double>(sign(i));
  return g;
}

const char* to_string(Parity parity) noexcept {
  switch (parity) {
    case Parity::Even:
      return "even";
    case Parity::Odd:
      return "odd";
    case Parity::Mixed:
      return "mixed";
  }
  return "mixed";
}

namespace {

// g M g has entries sign(i) sign(j) M(i, j); no matrix products needed.
ComplexMatrix conjugate_by_grading(const ComplexMatrix& m, const GradedSpace& space) {
  ComplexMatrix out = m;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (space.sign(static_cast<std::size_t>(i)) != space.sign(static_cast<std::size_t>(j))) out(i, j) = -out(i, j);
  return out;
}

void require_graded_shape(const ComplexMatrix& m, const GradedSpace& space) {
  if (m.rows() != static_cast<Eigen::Index>(space.dim()) || m.cols() != static_cast<Eigen::Index>(space.dim()))
    throw DimensionMismatch("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            " but the graded space has dimension " + std::to_string(space.dim()));
}

}  // namespace

Parity parity_of(const ComplexMatrix& m, const GradedSpace& space, double tol) {
  require_graded_shape(m, space);
  const ComplexMatrix gmg = conjugate_by_grading(m, space);
  const double scale = tol * std::max(1.0, operator_norm(m));
  if (operator_norm(gmg - m) <= scale) return Parity::Even;
  if (operator_norm(gmg + m) <= scale) return Parity::Odd;
  return Parity::Mixed;
}

ComplexMatrix even_part(const ComplexMatrix& m, const GradedSpace& space) {
  require_graded_shape(m, space);
  return 0.5 * (m + conjugate_by_grading(m, space));
}

ComplexMatrix odd_part(const ComplexMatrix& m, const GradedSpace& space) {
  require_graded_shape(m, space);
  return 0.5 * (m - conjugate_by_grading(m, space));
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  require_square(m, "hermitian_eigen");
  if (m.rows() == 0) return {RealVector(0), ComplexMatrix(0, 0)};
  const double asym = operator_norm(m - m.adjoint());
  if (asym > 1e-10 * operator_norm(m))
    throw NonHermitian("hermitian_eigen: ||M - M*|| = " + std::to_string(asym));
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw Error("hermitian_eigen: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Complex supertrace(const ComplexMatrix& x, const GradedSpace& space) {
  require_graded_shape(x, space);
  Complex sum{};
  for (std::size_t i = 0; i < space.dim(); ++i) sum += static_cast<double>(space.sign(i)) * x(i, i);
  return sum;
}

Complex supertrace(const ComplexMatrix& x, const ComplexMatrix& gamma) {
  require_square(x, "supertrace");
  require_same_shape(x, gamma, "supertrace");
  return (gamma * x).trace();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix identity(std::size_t n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix permutation_matrix(const std::vector<std::size_t>& order) {
  const auto n = static_cast<Eigen::Index>(order.size());
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, static_cast<Eigen::Index>(order[i])) = 1.0;
  return p;
}

ComplexMatrix permute(const ComplexMatrix& m, const std::vector<std::size_t>& order) {
  const auto n = static_cast<Eigen::Index>(order.size());
  if (m.rows() != n || m.cols() != n) throw DimensionMismatch("permute: size mismatch");
  ComplexMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      out(i, j) = m(static_cast<Eigen::Index>(order[i]), static_cast<Eigen::Index>(order[j]));
  return out;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(what) + ": expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()) + " differ");
}

}  // namespace jlolab
