#include "jlolab/jlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <utility>

#include "jlolab/divided_difference.hpp"
#include "jlolab/error.hpp"

namespace jlolab {

namespace {

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

JloEvaluator::JloEvaluator(SpectralTripleFD triple, double cluster_tol) : triple_(std::move(triple)) {
  const auto& spectrum = triple_.laplacian_spectrum();
  eigvecs_ = spectrum.vectors;
  eigenvalues_ = spectrum.eigenvalues.cwiseMax(0.0);
  gamma_rotated_ = eigvecs_.adjoint() * triple_.grading() * eigvecs_;
  dirac_rotated_ = eigvecs_.adjoint() * triple_.dirac() * eigvecs_;

  const auto n = static_cast<std::size_t>(eigenvalues_.size());
  const double top = n == 0 ? 0.0 : eigenvalues_.maxCoeff();
  const double tol = cluster_tol * (1.0 + top);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && eigenvalues_(static_cast<Eigen::Index>(j)) - eigenvalues_(static_cast<Eigen::Index>(j - 1)) <= tol)
      ++j;
    double mean = 0.0;
    for (std::size_t k = i; k < j; ++k) mean += eigenvalues_(static_cast<Eigen::Index>(k));
    clusters_.push_back(Cluster{mean / static_cast<double>(j - i), i, j - i});
    i = j;
  }
}

double JloEvaluator::simplex_weight(const std::vector<std::uint8_t>& counts) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (auto it = weight_cache_.find(counts); it != weight_cache_.end()) return it->second;
  }
  std::vector<double> nodes;
  for (std::size_t c = 0; c < counts.size(); ++c) nodes.insert(nodes.end(), counts[c], clusters_.at(c).eigenvalue);
  const double w = divided_diff_exp(nodes);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  weight_cache_.emplace(counts, w);
  return w;
}

void JloEvaluator::check_chain(const Chain& chain) const {
  if (chain.algebra_dim() != triple_.dim())
    throw DimensionMismatch("chain over M_" + std::to_string(chain.algebra_dim()) + " evaluated on a triple of dimension " +
                            std::to_string(triple_.dim()));
  for (const auto& term : chain.terms()) {
    if (term.degree() > kMaxJloDegree)
      throw DegreeTooLarge("chain degree " + std::to_string(term.degree()) + " exceeds " + std::to_string(kMaxJloDegree));
    for (std::size_t i = 1; i < term.factors.size(); ++i)
      if (parity_of(term.factors[i], triple_.space()) != Parity::Even)
        throw ParityError("chain factor " + std::to_string(i) + " is not even");
  }
}

std::vector<ComplexMatrix> JloEvaluator::rotated_derivations(std::span<const ComplexMatrix> rest) const {
  std::vector<ComplexMatrix> out;
  out.reserve(rest.size());
  for (const auto& a : rest) {
    const ComplexMatrix ar = eigvecs_.adjoint() * a * eigvecs_;
    out.push_back(dirac_rotated_ * ar - ar * dirac_rotated_);
  }
  return out;
}

ExactMethod JloEvaluator::method_for(std::size_t degree) const {
  if (clusters_.size() <= 1 || degree <= 1) return ExactMethod::ClusterSum;
  const double nc = static_cast<double>(clusters_.size());
  const double n = static_cast<double>(degree);
  const double scale = static_cast<double>(triple_.dim()) / 8.0;
  // Fitted timings: the cluster sum visits C(nc + n, n + 1) multisets.
  const double multisets = std::exp(std::lgamma(nc + n + 1.0) - std::lgamma(n + 2.0) - std::lgamma(nc));
  const double cluster_cost = 2.5 * multisets * n * scale;
  const double block_cost = 25.0 * (n * n + 2.0) * std::pow(scale, 2.3);
  return cluster_cost <= block_cost ? ExactMethod::ClusterSum : ExactMethod::BlockExponential;
}

Complex JloEvaluator::cluster_sum(const ComplexMatrix& first_rotated, const std::vector<ComplexMatrix>& derivations) const {
  const std::size_t nc = clusters_.size();
  if (nc == 0) return Complex{};
  auto block = [&](const ComplexMatrix& m, std::size_t r, std::size_t c) {
    return m.block(static_cast<Eigen::Index>(clusters_[r].begin), static_cast<Eigen::Index>(clusters_[c].begin),
                   static_cast<Eigen::Index>(clusters_[r].size), static_cast<Eigen::Index>(clusters_[c].size));
  };

  std::vector<std::vector<bool>> nonzero(derivations.size(), std::vector<bool>(nc * nc));
  for (std::size_t i = 0; i < derivations.size(); ++i) {
    const double cutoff = 1e-15 * std::max(1.0, derivations[i].cwiseAbs().maxCoeff());
    for (std::size_t r = 0; r < nc; ++r)
      for (std::size_t c = 0; c < nc; ++c)
        nonzero[i][r * nc + c] = block(derivations[i], r, c).cwiseAbs().maxCoeff() > cutoff;
  }

  using Key = std::pair<std::vector<std::uint8_t>, std::size_t>;
  std::map<Key, ComplexMatrix> states;
  const ComplexMatrix g = gamma_rotated_ * first_rotated;
  for (std::size_t c = 0; c < nc; ++c) {
    std::vector<std::uint8_t> counts(nc, 0);
    counts[c] = 1;
    states.emplace(Key{counts, c}, g.middleCols(static_cast<Eigen::Index>(clusters_[c].begin),
                                                static_cast<Eigen::Index>(clusters_[c].size)));
  }
  for (std::size_t i = 0; i < derivations.size(); ++i) {
    std::map<Key, ComplexMatrix> next;
    for (const auto& [key, y] : states) {
      const std::size_t from = key.second;
      for (std::size_t to = 0; to < nc; ++to) {
        if (!nonzero[i][from * nc + to]) continue;
        Key k{key.first, to};
        ++k.first[to];
        ComplexMatrix step = y * block(derivations[i], from, to);
        auto it = next.find(k);
        if (it == next.end())
          next.emplace(std::move(k), std::move(step));
        else
          it->second += step;
      }
    }
    states = std::move(next);
  }

  Complex total{};
  for (const auto& [key, y] : states) {
    const auto& cl = clusters_[key.second];
    const Complex tr =
        y.middleRows(static_cast<Eigen::Index>(cl.begin), static_cast<Eigen::Index>(cl.size)).trace();
    total += simplex_weight(key.first) * tr;
  }
  return total;
}

ComplexMatrix JloEvaluator::path_integral(const std::vector<ComplexMatrix>& derivations) const {
  const std::size_t n = derivations.size();
  const Eigen::Index dim = eigenvalues_.size();
  const std::size_t w = n + 1;
  const Eigen::VectorXd lambda = eigenvalues_;
  if (n == 0) return (-lambda).array().exp().matrix().cast<Complex>().asDiagonal();

  double norm = dim == 0 ? 0.0 : lambda.maxCoeff();
  double xnorm = 0.0;
  for (const auto& x : derivations) xnorm = std::max(xnorm, x.cwiseAbs().colwise().sum().maxCoeff());
  norm += xnorm;
  const int squarings = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
  const double h = std::ldexp(1.0, -squarings);

  // Strictly upper blocks of exp(hM), index i * w + j; the diagonal blocks are exp(-h L) exactly.
  std::vector<ComplexMatrix> p(w * w), term(w * w);
  Eigen::VectorXd diag_term = Eigen::VectorXd::Ones(dim);
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = i + 1; j < w; ++j) {
      p[i * w + j] = ComplexMatrix::Zero(dim, dim);
      term[i * w + j] = ComplexMatrix::Zero(dim, dim);
    }
  const Eigen::VectorXd minus_hl = -h * lambda;
  for (int k = 1; k <= 40; ++k) {
    // term <- term * hM / k, updating far blocks first so term_{i,j-1} is still the old power.
    double largest = 0.0;
    for (std::size_t d = n; d >= 1; --d)
      for (std::size_t i = 0; i + d < w; ++i) {
        const std::size_t j = i + d;
        ComplexMatrix& t = term[i * w + j];
        ComplexMatrix next = t * minus_hl.cast<Complex>().asDiagonal();
        if (d == 1)
          next.noalias() += diag_term.cast<Complex>().asDiagonal() * (h * derivations[j - 1]);
        else
          next.noalias() += term[i * w + j - 1] * (h * derivations[j - 1]);
        t = next / static_cast<double>(k);
        p[i * w + j] += t;
        largest = std::max(largest, t.cwiseAbs().maxCoeff());
      }
    diag_term = diag_term.cwiseProduct(minus_hl) / static_cast<double>(k);
    if (k >= static_cast<int>(n) && largest < 1e-20 && diag_term.cwiseAbs().maxCoeff() < 1e-20) break;
  }

  Eigen::VectorXd heat = minus_hl.array().exp().matrix();
  for (int s = 0; s < squarings; ++s) {
    const bool last = s + 1 == squarings;
    std::vector<ComplexMatrix> q(w * w);
    for (std::size_t i = 0; i < (last ? 1 : w); ++i)
      for (std::size_t j = i + 1; j < w; ++j) {
        const ComplexMatrix& pij = p[i * w + j];
        ComplexMatrix acc = heat.cast<Complex>().asDiagonal() * pij;
        acc.noalias() += pij * heat.cast<Complex>().asDiagonal();
        for (std::size_t k = i + 1; k < j; ++k) acc.noalias() += p[i * w + k] * p[k * w + j];
        q[i * w + j] = std::move(acc);
      }
    p = std::move(q);
    heat = heat.cwiseProduct(heat);
  }
  return p[n];
}

Complex JloEvaluator::elementary_rotated(const ComplexMatrix& first_rotated, std::span<const ComplexMatrix> rest,
                                         ExactMethod method) const {
  if (clusters_.empty()) return Complex{};
  const auto derivations = rotated_derivations(rest);
  if (method == ExactMethod::Automatic) method = method_for(rest.size());
  if (method == ExactMethod::ClusterSum) return cluster_sum(first_rotated, derivations);
  return (gamma_rotated_ * first_rotated * path_integral(derivations)).trace();
}

Complex JloEvaluator::elementary(const ComplexMatrix& first, std::span<const ComplexMatrix> rest,
                                 ExactMethod method) const {
  const auto n = static_cast<Eigen::Index>(triple_.dim());
  if (first.rows() != n || first.cols() != n) throw DimensionMismatch("elementary: first factor has wrong shape");
  if (rest.size() > kMaxJloDegree) throw DegreeTooLarge("elementary: degree exceeds " + std::to_string(kMaxJloDegree));
  for (const auto& a : rest) {
    if (a.rows() != n || a.cols() != n) throw DimensionMismatch("elementary: factor has wrong shape");
    if (parity_of(a, triple_.space()) != Parity::Even) throw ParityError("elementary: factors after the first must be even");
  }
  return elementary_rotated(eigvecs_.adjoint() * first * eigvecs_, rest, method);
}

Complex JloEvaluator::cochain(const Chain& chain) const {
  check_chain(chain);
  Complex total{};
  for (const auto& term : chain.terms()) {
    if (term.factors.empty()) continue;
    std::span<const ComplexMatrix> rest(term.factors.data() + 1, term.factors.size() - 1);
    total += term.coeff * elementary_rotated(eigvecs_.adjoint() * term.factors[0] * eigvecs_, rest);
  }
  return total;
}

Complex JloEvaluator::bch(const Chain& chain) const {
  check_chain(chain);
  Complex total{};
  for (const auto& term : chain.terms()) {
    if (term.factors.empty()) continue;
    const ComplexMatrix a0 = eigvecs_.adjoint() * term.factors[0] * eigvecs_;
    std::span<const ComplexMatrix> rest(term.factors.data() + 1, term.factors.size() - 1);
    total += term.coeff * elementary_rotated(dirac_rotated_ * a0 - a0 * dirac_rotated_, rest);
  }
  return total;
}

Complex JloEvaluator::perturbed(const Chain& chain) const {
  check_chain(chain);
  if (clusters_.empty()) return Complex{};
  const double r = 1.0 / std::sqrt(2.0);
  Complex total{};
  for (const auto& term : chain.terms()) {
    if (term.factors.empty()) continue;
    const ComplexMatrix a0 = eigvecs_.adjoint() * term.factors[0] * eigvecs_;
    const ComplexMatrix first = a0 + r * (dirac_rotated_ * a0 - a0 * dirac_rotated_);
    std::span<const ComplexMatrix> rest(term.factors.data() + 1, term.factors.size() - 1);
    total += term.coeff * elementary_rotated(first, rest);
  }
  return total;
}

Complex JloEvaluator::perturbed_via_delta(const Chain& chain) const {
  return cochain(chain + delta(triple_, chain));
}

Complex JloEvaluator::integrand(const ComplexMatrix& first, std::span<const ComplexMatrix> rest,
                                const SimplexPoint& t) const {
  if (t.degree() != rest.size()) throw DimensionMismatch("integrand: simplex point degree differs from chain degree");
  const auto n = static_cast<Eigen::Index>(triple_.dim());
  if (first.rows() != n || first.cols() != n) throw DimensionMismatch("integrand: first factor has wrong shape");
  auto heat_rotated = [this](double s) { return (-s * eigenvalues_.array()).exp().matrix().cast<Complex>(); };
  ComplexMatrix acc = gamma_rotated_ * (eigvecs_.adjoint() * first * eigvecs_);
  double prev = 0.0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i].rows() != n || rest[i].cols() != n) throw DimensionMismatch("integrand: factor has wrong shape");
    acc = acc * heat_rotated(t[i] - prev).asDiagonal();
    const ComplexMatrix ar = eigvecs_.adjoint() * rest[i] * eigvecs_;
    acc = acc * (dirac_rotated_ * ar - ar * dirac_rotated_);
    prev = t[i];
  }
  acc = acc * heat_rotated(1.0 - prev).asDiagonal();
  return acc.trace();
}

Estimate JloEvaluator::monte_carlo(const Chain& chain, std::size_t samples, std::uint64_t seed) const {
  check_chain(chain);
  if (samples == 0) throw std::invalid_argument("monte_carlo: samples must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  struct Rotated {
    Complex weight;
    ComplexMatrix head;
    std::vector<ComplexMatrix> derivations;
  };
  std::vector<Rotated> terms;
  for (const auto& term : chain.terms()) {
    if (term.factors.empty()) continue;
    Rotated r{term.coeff / factorial(term.degree()), gamma_rotated_ * (eigvecs_.adjoint() * term.factors[0] * eigvecs_), {}};
    for (std::size_t i = 1; i < term.factors.size(); ++i) {
      const ComplexMatrix ar = eigvecs_.adjoint() * term.factors[i] * eigvecs_;
      r.derivations.push_back(dirac_rotated_ * ar - ar * dirac_rotated_);
    }
    terms.push_back(std::move(r));
  }

  Complex mean{};
  double m2 = 0.0;
  std::vector<double> coords;
  ComplexMatrix acc;
  for (std::size_t s = 0; s < samples; ++s) {
    Complex value{};
    for (const auto& term : terms) {
      coords.resize(term.derivations.size());
      for (auto& c : coords) c = unif(rng);
      std::sort(coords.begin(), coords.end());
      acc = term.head;
      double prev = 0.0;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        acc = acc * (-(coords[i] - prev) * eigenvalues_.array()).exp().matrix().cast<Complex>().asDiagonal();
        acc = acc * term.derivations[i];
        prev = coords[i];
      }
      acc = acc * (-(1.0 - prev) * eigenvalues_.array()).exp().matrix().cast<Complex>().asDiagonal();
      value += term.weight * acc.trace();
    }
    const Complex d = value - mean;
    mean += d / static_cast<double>(s + 1);
    m2 += std::real(std::conj(d) * (value - mean));
  }
  Estimate est;
  est.value = mean;
  est.samples = samples;
  est.std_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
  return est;
}

Complex jlo_integrand(const SpectralTripleFD& triple, std::span<const ComplexMatrix> factors, const SimplexPoint& t) {
  if (factors.empty()) throw std::invalid_argument("jlo_integrand: need at least one factor");
  return JloEvaluator(triple).integrand(factors[0], factors.subspan(1), t);
}

Complex jlo_cochain(const SpectralTripleFD& triple, const Chain& chain) { return JloEvaluator(triple).cochain(chain); }

Complex bch_cochain(const SpectralTripleFD& triple, const Chain& chain) { return JloEvaluator(triple).bch(chain); }

Complex perturbed_cochain(const SpectralTripleFD& triple, const Chain& chain) {
  return JloEvaluator(triple).perturbed(chain);
}

Chain delta(const SpectralTripleFD& triple, const Chain& chain) {
  if (chain.algebra_dim() != triple.dim()) throw DimensionMismatch("delta: chain and triple dimensions differ");
  Chain out(chain.algebra_dim());
  const double s = 1.0 / std::sqrt(2.0);
  for (const auto& term : chain.terms()) {
    if (term.factors.empty()) continue;
    ElementaryChain t = term;
    t.factors[0] = triple.dirac() * term.factors[0] - term.factors[0] * triple.dirac();
    t.coeff *= s;
    out.add(std::move(t));
  }
  return out;
}

Chain chern_idempotent(const Idempotent& e, std::size_t max_degree) {
  require_square(e.e, "chern_idempotent");
  const auto n = static_cast<std::size_t>(e.e.rows());
  Chain out(n);
  out.add(ElementaryChain{1.0, {e.e}});
  const ComplexMatrix shifted = e.e - 0.5 * identity(n);
  for (std::size_t k = 1; 2 * k <= max_degree; ++k) {
    std::vector<ComplexMatrix> factors{shifted};
    factors.insert(factors.end(), 2 * k, e.e);
    const double c = (k % 2 ? -1.0 : 1.0) * factorial(2 * k) / factorial(k);
    out.add(ElementaryChain{c, std::move(factors)});
  }
  return out;
}

bool PairingReport::agrees(double tol) const {
  return target_index.has_value() && std::abs(value - Complex(static_cast<double>(*target_index), 0.0)) < tol;
}

PairingReport index_pairing(const SpectralTripleFD& triple, const Idempotent& e, double tol) {
  require_projection(triple, e);
  const JloEvaluator ev(ampliate(triple, e.k));
  PairingReport report;
  const Chain ch = chern_idempotent(e, kMaxJloDegree);
  bool converged = false;
  for (const auto& term : ch.terms()) {
    std::span<const ComplexMatrix> rest(term.factors.data() + 1, term.factors.size() - 1);
    const Complex value = term.coeff * ev.elementary(term.factors[0], rest);
    report.terms.push_back(value);
    report.value += value;
    report.truncation_degree = term.degree();
    report.last_term_magnitude = std::abs(value);
    if (term.degree() > 0 && std::abs(value) < 1e-12 * (1.0 + std::abs(report.value))) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergent("index pairing did not converge by degree " + std::to_string(kMaxJloDegree) +
                        " (last term " + scientific(report.last_term_magnitude) + ")");
  report.nearest_integer = std::lround(report.value.real());
  if (std::abs(report.value - Complex(static_cast<double>(report.nearest_integer), 0.0)) >= tol)
    throw NonIntegerIndex("index pairing " + std::to_string(report.value.real()) + " is not within " +
                              std::to_string(tol) + " of an integer",
                          report.value.real());
  report.target_index = index(compress_by_idempotent(triple, e));
  return report;
}

SpectralTripleFD product_of(std::span<const SpectralTripleFD> triples) {
  if (triples.empty()) throw std::invalid_argument("product_of: need at least one triple");
  SpectralTripleFD acc = triples[0];
  for (std::size_t i = 1; i < triples.size(); ++i) acc = product_triple(acc, triples[i]);
  return acc;
}

namespace {

// Working position of the left-nested product -> Kronecker index over the
// working bases of the factors.
std::vector<std::size_t> working_to_factor_kron(std::span<const SpectralTripleFD> triples) {
  std::vector<std::size_t> comp(triples[0].dim());
  for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = i;
  GradedSpace space = triples[0].space();
  for (std::size_t k = 1; k < triples.size(); ++k) {
    const GradedSpace& next = triples[k].space();
    const auto sorted = product_sort_order(space, next);
    std::vector<std::size_t> out(sorted.size());
    for (std::size_t s = 0; s < sorted.size(); ++s)
      out[s] = comp[sorted[s] / next.dim()] * next.dim() + sorted[s] % next.dim();
    comp = std::move(out);
    space = GradedSpace(space.dim_even() * next.dim_even() + space.dim_odd() * next.dim_odd(),
                        space.dim_even() * next.dim_odd() + space.dim_odd() * next.dim_even());
  }
  return comp;
}

}  // namespace

TheoremResidual verify_theorem_ainf(std::span<const SpectralTripleFD> triples, std::span<const Chain> chains, int part) {
  if (triples.empty() || triples.size() != chains.size())
    throw std::invalid_argument("verify_theorem_ainf: need one chain per triple");
  if (part != 1 && part != 2) throw std::invalid_argument("verify_theorem_ainf: part must be 1 or 2");
  for (std::size_t i = 0; i < triples.size(); ++i)
    if (chains[i].algebra_dim() != triples[i].dim()) throw DimensionMismatch("verify_theorem_ainf: chain/triple mismatch");

  const SpectralTripleFD prod = product_of(triples);
  const auto comp = working_to_factor_kron(triples);

  Chain kron_chain;
  Complex rhs{1.0, 0.0};
  if (part == 1) {
    kron_chain = chains[0];
    for (std::size_t i = 1; i < chains.size(); ++i) kron_chain = shuffle_product(kron_chain, chains[i]);
    for (std::size_t i = 0; i < triples.size(); ++i) rhs *= jlo_cochain(triples[i], chains[i]);
  } else {
    kron_chain = br_operation(chains);
    for (std::size_t i = 0; i < triples.size(); ++i) rhs *= bch_cochain(triples[i], chains[i]);
    rhs /= factorial(triples.size());
  }
  const Chain embedded = map_factors(kron_chain, [&comp](const ComplexMatrix& m) { return permute(m, comp); });

  TheoremResidual out;
  out.lhs = jlo_cochain(prod, embedded);
  out.rhs = rhs;
  out.residual = std::abs(out.lhs - out.rhs);
  out.product_terms = embedded.size();
  return out;
}

}  // namespace jlolab
