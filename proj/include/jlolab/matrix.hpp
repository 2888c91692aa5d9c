#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace jlolab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kParityTolerance = 1e-12;

/// Finite-dimensional Z/2-graded Hilbert space C^{dim_even} (+) C^{dim_odd}.
///
/// The grading operator is always diag(+1, ..., +1, -1, ..., -1) with the even
/// block first.
class GradedSpace {
 public:
  GradedSpace() = default;
  GradedSpace(std::size_t dim_even, std::size_t dim_odd) : dim_even_(dim_even), dim_odd_(dim_odd) {}

  std::size_t dim_even() const noexcept { return dim_even_; }
  std::size_t dim_odd() const noexcept { return dim_odd_; }
  std::size_t dim() const noexcept { return dim_even_ + dim_odd_; }

  ComplexMatrix grading() const;
  /// +1 for an even basis vector, -1 for an odd one.
  int sign(std::size_t basis_index) const noexcept { return basis_index < dim_even_ ? 1 : -1; }

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;

 private:
  std::size_t dim_even_ = 0;
  std::size_t dim_odd_ = 0;
};

enum class Parity { Even, Odd, Mixed };

const char* to_string(Parity parity) noexcept;

/// Classifies M as even (commutes with the grading), odd (anticommutes) or
/// mixed. The residual test is relative: ||gMg -+ M|| <= tol * max(1, ||M||).
Parity parity_of(const ComplexMatrix& m, const GradedSpace& space, double tol = kParityTolerance);

/// Even and odd parts of M: (M + gMg)/2 and (M - gMg)/2.
ComplexMatrix even_part(const ComplexMatrix& m, const GradedSpace& space);
ComplexMatrix odd_part(const ComplexMatrix& m, const GradedSpace& space);

struct HermitianEigen {
  RealVector eigenvalues;  // ascending
  ComplexMatrix vectors;   // columns are orthonormal eigenvectors
};

/// Eigendecomposition of a Hermitian matrix, M = U diag(lambda) U*.
/// Throws NonHermitian if ||M - M*|| > 1e-10 ||M||.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

/// f(M) = U f(lambda) U* for Hermitian M.
template <typename F>
ComplexMatrix hermitian_function(const HermitianEigen& eig, F&& f) {
  const auto n = eig.eigenvalues.size();
  Eigen::VectorXcd values(n);
  for (Eigen::Index i = 0; i < n; ++i) values(i) = f(eig.eigenvalues(i));
  return eig.vectors * values.asDiagonal() * eig.vectors.adjoint();
}

/// Standard Kronecker product with A as the outer (slow) index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// trace(gamma * X).
Complex supertrace(const ComplexMatrix& x, const GradedSpace& space);
Complex supertrace(const ComplexMatrix& x, const ComplexMatrix& gamma);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

ComplexMatrix identity(std::size_t n);

/// Permutation matrix P with (P x)[i] = x[order[i]].
ComplexMatrix permutation_matrix(const std::vector<std::size_t>& order);

/// P M P^T for the permutation above, i.e. result(i, j) = M(order[i], order[j]).
ComplexMatrix permute(const ComplexMatrix& m, const std::vector<std::size_t>& order);

void require_square(const ComplexMatrix& m, const char* what);
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);

}  // namespace jlolab
