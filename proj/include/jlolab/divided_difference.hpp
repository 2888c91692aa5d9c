#pragma once

#include <span>

#include "jlolab/matrix.hpp"

namespace jlolab {

/// Integral over the standard n-simplex of
///   exp(-t^1 mu_0 - (t^2 - t^1) mu_1 - ... - (1 - t^n) mu_n),
/// i.e. the divided difference of exp at the nodes -mu_0, ..., -mu_n.
///
/// Computed as the (n, 0) entry of exp(L) for the lower bidiagonal matrix L
/// with -mu on the diagonal and ones below it. The exponential is formed by
/// scaling and squaring after shifting L to an entrywise nonnegative matrix,
/// so every intermediate sum is free of cancellation and repeated nodes need
/// no special handling. Requires mu_i >= 0.
double divided_diff_exp(std::span<const double> mu);

/// Full exp(L) for the node list; entry (i, j), i >= j, is the simplex integral
/// for the contiguous nodes mu_j, ..., mu_i.
Eigen::MatrixXd opitz_exp_table(std::span<const double> mu);

}  // namespace jlolab
