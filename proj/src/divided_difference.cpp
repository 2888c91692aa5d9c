#include "jlolab/divided_difference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jlolab {

Eigen::MatrixXd opitz_exp_table(std::span<const double> mu) {
  const auto m = static_cast<Eigen::Index>(mu.size());
  if (m == 0) throw std::invalid_argument("divided_diff_exp: need at least one node");
  double shift = 0.0;
  for (double x : mu) {
    if (!(x >= 0.0)) throw std::invalid_argument("divided_diff_exp: nodes must be nonnegative");
    shift = std::max(shift, x);
  }

  // L + shift*I is entrywise nonnegative, and so is its exponential series.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) b(i, i) = shift - mu[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < m; ++i) b(i, i - 1) = 1.0;

  int squarings = 0;
  double norm = shift + 1.0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  b *= scale;

  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m, m);
  for (int k = 1; k < 64; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
    // Every entry of the series is a sum of nonnegative terms.
    if ((term.array() <= 1e-18 * sum.array()).all()) break;
  }
  sum *= std::exp(-shift * scale);
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

double divided_diff_exp(std::span<const double> mu) {
  const Eigen::MatrixXd table = opitz_exp_table(mu);
  return table(table.rows() - 1, 0);
}

}  // namespace jlolab
