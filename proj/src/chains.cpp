#include "jlolab/chains.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "jlolab/combinatorics.hpp"
#include "jlolab/error.hpp"

namespace jlolab {

namespace {

void check_term(const ElementaryChain& term, std::size_t dim) {
  if (term.factors.empty()) throw DimensionMismatch("chain term has no factors");
  for (const auto& f : term.factors)
    if (f.rows() != static_cast<Eigen::Index>(dim) || f.cols() != static_cast<Eigen::Index>(dim))
      throw DimensionMismatch("chain factor is " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                              ", algebra dimension is " + std::to_string(dim));
}

void check_budget(std::size_t terms, const char* what) {
  if (terms > kMaxChainTerms)
    throw ChainTooLarge(std::string(what) + " would produce " + std::to_string(terms) + " terms (limit " +
                        std::to_string(kMaxChainTerms) + ")");
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace

Chain::Chain(std::size_t algebra_dim, std::vector<ElementaryChain> terms) : dim_(algebra_dim) {
  for (auto& t : terms) check_term(t, dim_);
  terms_ = std::move(terms);
}

Chain Chain::elementary(std::vector<ComplexMatrix> factors, Complex coeff) {
  if (factors.empty()) throw DimensionMismatch("Chain::elementary: no factors");
  const auto d = static_cast<std::size_t>(factors.front().rows());
  Chain c(d);
  c.add(ElementaryChain{coeff, std::move(factors)});
  return c;
}

Chain Chain::unit(std::size_t algebra_dim) { return elementary({identity(algebra_dim)}); }

std::size_t Chain::max_degree() const noexcept {
  std::size_t n = 0;
  for (const auto& t : terms_) n = std::max(n, t.degree());
  return n;
}

Chain Chain::degree_part(std::size_t n) const {
  Chain out(dim_);
  for (const auto& t : terms_)
    if (t.degree() == n) out.terms_.push_back(t);
  return out;
}

void Chain::add(ElementaryChain term) {
  check_term(term, dim_);
  terms_.push_back(std::move(term));
}

void Chain::append(const Chain& other) {
  if (other.empty()) return;
  if (other.dim_ != dim_) throw DimensionMismatch("Chain::append: algebra dimensions differ");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

Chain Chain::operator+(const Chain& other) const {
  if (empty() && dim_ != other.dim_) return other;
  Chain out = *this;
  out.append(other);
  return out;
}

Chain Chain::operator-(const Chain& other) const { return *this + other.scaled(-1.0); }

Chain Chain::scaled(Complex factor) const {
  Chain out = *this;
  for (auto& t : out.terms_) t.coeff *= factor;
  return out;
}

Chain hochschild_b(const Chain& chain) {
  Chain out(chain.algebra_dim());
  for (const auto& term : chain.terms()) {
    const std::size_t n = term.degree();
    if (n == 0) continue;
    const auto& a = term.factors;
    for (std::size_t i = 0; i < n; ++i) {
      ElementaryChain t;
      t.coeff = (i % 2 == 0 ? 1.0 : -1.0) * term.coeff;
      t.factors.reserve(n);
      for (std::size_t k = 0; k < i; ++k) t.factors.push_back(a[k]);
      t.factors.push_back(a[i] * a[i + 1]);
      for (std::size_t k = i + 2; k <= n; ++k) t.factors.push_back(a[k]);
      out.add(std::move(t));
    }
    ElementaryChain last;
    last.coeff = (n % 2 == 0 ? 1.0 : -1.0) * term.coeff;
    last.factors.push_back(a[n] * a[0]);
    for (std::size_t k = 1; k < n; ++k) last.factors.push_back(a[k]);
    out.add(std::move(last));
  }
  return out;
}

Chain connes_B(const Chain& chain) {
  std::size_t budget = 0;
  for (const auto& term : chain.terms()) budget += term.degree() + 1;
  check_budget(budget, "connes_B");
  Chain out(chain.algebra_dim());
  const ComplexMatrix one = identity(chain.algebra_dim());
  for (const auto& term : chain.terms()) {
    const std::size_t n = term.degree();
    for (std::size_t i = 0; i <= n; ++i) {
      ElementaryChain t;
      t.coeff = ((n * i) % 2 == 0 ? 1.0 : -1.0) * term.coeff;
      t.factors.reserve(n + 2);
      t.factors.push_back(one);
      for (std::size_t k = 0; k <= n; ++k) t.factors.push_back(term.factors[(i + k) % (n + 1)]);
      out.add(std::move(t));
    }
  }
  return out;
}

Chain normalize(const Chain& chain, double tol) {
  Chain out(chain.algebra_dim());
  const double d = static_cast<double>(chain.algebra_dim());
  for (const auto& term : chain.terms()) {
    if (term.coeff == Complex{}) continue;
    bool degenerate = false;
    for (std::size_t k = 1; k < term.factors.size() && !degenerate; ++k) {
      const auto& a = term.factors[k];
      const Complex mean = a.trace() / d;
      const double off = (a - mean * ComplexMatrix::Identity(a.rows(), a.cols())).norm();
      degenerate = off <= tol * std::max(1.0, a.norm());
    }
    if (!degenerate) out.add(term);
  }
  return out;
}

Chain shuffle_product(const Chain& alpha, const Chain& beta) {
  const std::size_t d1 = alpha.algebra_dim();
  const std::size_t d2 = beta.algebra_dim();
  std::size_t budget = 0;
  for (const auto& ta : alpha.terms())
    for (const auto& tb : beta.terms())
      budget += binomial(static_cast<unsigned>(ta.degree() + tb.degree()), static_cast<unsigned>(ta.degree()));
  check_budget(budget, "shuffle_product");

  Chain out(d1 * d2);
  const ComplexMatrix one1 = identity(d1);
  const ComplexMatrix one2 = identity(d2);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<SignedPermutation>> shuffles;
  for (const auto& ta : alpha.terms()) {
    for (const auto& tb : beta.terms()) {
      const std::size_t p = ta.degree();
      const std::size_t q = tb.degree();
      auto [it, inserted] = shuffles.try_emplace({p, q});
      if (inserted) it->second = enumerate_shuffles(static_cast<unsigned>(p), static_cast<unsigned>(q));

      const ComplexMatrix head = kron(ta.factors[0], tb.factors[0]);
      std::vector<ComplexMatrix> elements;
      elements.reserve(p + q);
      for (std::size_t k = 1; k <= p; ++k) elements.push_back(kron(ta.factors[k], one2));
      for (std::size_t k = 1; k <= q; ++k) elements.push_back(kron(one1, tb.factors[k]));

      for (const auto& chi : it->second) {
        ElementaryChain t;
        t.coeff = ta.coeff * tb.coeff * static_cast<double>(chi.sign());
        t.factors.resize(p + q + 1);
        t.factors[0] = head;
        for (std::size_t i = 0; i < p + q; ++i) t.factors[1 + chi.image(i)] = elements[i];
        out.add(std::move(t));
      }
    }
  }
  return out;
}

Chain br_operation(std::span<const Chain> chains) {
  if (chains.empty()) throw std::invalid_argument("br_operation: r must be >= 1");
  const std::size_t r = chains.size();
  std::vector<std::size_t> dims(r);
  std::size_t total_dim = 1;
  for (std::size_t i = 0; i < r; ++i) {
    dims[i] = chains[i].algebra_dim();
    total_dim *= dims[i];
  }
  Chain out(total_dim);
  for (const auto& c : chains)
    if (c.empty()) return out;

  // Embedding 1 (x) .. (x) a (x) .. (x) 1 of slot i.
  std::vector<std::size_t> before(r, 1), after(r, 1);
  for (std::size_t i = 1; i < r; ++i) before[i] = before[i - 1] * dims[i - 1];
  for (std::size_t i = r - 1; i-- > 0;) after[i] = after[i + 1] * dims[i + 1];
  auto embed = [&](std::size_t slot, const ComplexMatrix& a) {
    return kron(kron(identity(before[slot]), a), identity(after[slot]));
  };

  // Budget first.
  std::size_t budget = 0;
  std::vector<std::size_t> cursor(r, 0);
  auto advance = [&]() {
    for (std::size_t i = r; i-- > 0;) {
      if (++cursor[i] < chains[i].size()) return true;
      cursor[i] = 0;
    }
    return false;
  };
  do {
    std::vector<unsigned> degrees(r);
    for (std::size_t i = 0; i < r; ++i) degrees[i] = static_cast<unsigned>(chains[i].terms()[cursor[i]].degree());
    budget += cyclic_shuffle_count(degrees);
    check_budget(budget, "br_operation");
  } while (advance());

  const ComplexMatrix one = identity(total_dim);
  std::map<std::vector<unsigned>, std::vector<SignedPermutation>> cache;
  std::fill(cursor.begin(), cursor.end(), 0);
  do {
    std::vector<unsigned> degrees(r);
    Complex coeff{1.0, 0.0};
    std::vector<ComplexMatrix> elements;
    for (std::size_t i = 0; i < r; ++i) {
      const auto& term = chains[i].terms()[cursor[i]];
      degrees[i] = static_cast<unsigned>(term.degree());
      coeff *= term.coeff;
      for (const auto& a : term.factors) elements.push_back(embed(i, a));
    }
    auto [it, inserted] = cache.try_emplace(degrees);
    if (inserted) it->second = enumerate_cyclic_shuffles(degrees);
    for (const auto& sigma : it->second) {
      ElementaryChain t;
      t.coeff = coeff * static_cast<double>(sigma.sign());
      t.factors.resize(elements.size() + 1);
      t.factors[0] = one;
      for (std::size_t k = 0; k < elements.size(); ++k) t.factors[1 + sigma.image(k)] = elements[k];
      out.add(std::move(t));
    }
  } while (advance());
  return out;
}

Chain cyclic_shuffle_product(const Chain& alpha, const Chain& beta) {
  const Chain pair[] = {alpha, beta};
  return br_operation(pair);
}

double entire_norm(const Chain& chain, unsigned lambda) {
  if (lambda < 1) throw std::invalid_argument("entire_norm: lambda must be >= 1");
  std::map<std::size_t, double> by_degree;
  for (const auto& t : chain.terms()) {
    double norm = std::abs(t.coeff);
    for (const auto& f : t.factors) norm *= operator_norm(f);
    by_degree[t.degree()] += norm;
  }
  double total = 0.0;
  for (const auto& [n, norm] : by_degree)
    total += std::pow(static_cast<double>(lambda), static_cast<double>(n)) * norm / std::sqrt(factorial(n));
  return total;
}

Chain map_factors(const Chain& chain, const std::function<ComplexMatrix(const ComplexMatrix&)>& f) {
  std::vector<ElementaryChain> terms;
  terms.reserve(chain.size());
  std::size_t dim = chain.algebra_dim();
  for (const auto& t : chain.terms()) {
    ElementaryChain m{t.coeff, {}};
    m.factors.reserve(t.factors.size());
    for (const auto& a : t.factors) m.factors.push_back(f(a));
    dim = static_cast<std::size_t>(m.factors.front().rows());
    terms.push_back(std::move(m));
  }
  return Chain(dim, std::move(terms));
}

namespace {

Eigen::VectorXcd vectorize(const ComplexMatrix& a, bool trace_free) {
  ComplexMatrix m = a;
  if (trace_free) {
    const Complex mean = a.trace() / static_cast<double>(a.rows());
    m.diagonal().array() -= mean;
  }
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

std::size_t dense_size(std::size_t dim, std::size_t degree) {
  std::size_t size = 1;
  for (std::size_t k = 0; k <= degree; ++k) {
    if (size > (std::size_t{1} << 40) / (dim * dim)) return std::size_t(-1);
    size *= dim * dim;
  }
  return size;
}

}  // namespace

double quotient_tensor_norm(const Chain& chain, std::size_t max_entries) {
  const std::size_t d = chain.algebra_dim();
  double total = 0.0;
  for (std::size_t n = 0; n <= chain.max_degree(); ++n) {
    const Chain part = chain.degree_part(n);
    if (part.empty()) continue;
    const std::size_t size = dense_size(d, n);
    if (size > max_entries) throw ChainTooLarge("quotient_tensor_norm: dense tensor too large");
    Eigen::VectorXcd tensor = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size));
    for (const auto& t : part.terms()) {
      Eigen::VectorXcd acc = t.coeff * vectorize(t.factors[0], false);
      for (std::size_t k = 1; k <= n; ++k) {
        const Eigen::VectorXcd v = vectorize(t.factors[k], true);
        Eigen::VectorXcd next(acc.size() * v.size());
        for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * v.size(), v.size()) = acc(i) * v;
        acc = std::move(next);
      }
      tensor += acc;
    }
    total += tensor.squaredNorm();
  }
  return std::sqrt(total);
}

double quotient_residual(const Chain& chain, std::size_t probes, std::uint64_t seed) {
  const std::size_t d = chain.algebra_dim();
  if (chain.empty()) return 0.0;
  bool dense_ok = true;
  for (std::size_t n = 0; n <= chain.max_degree(); ++n)
    if (dense_size(d, n) > (std::size_t{1} << 22)) dense_ok = false;
  if (dense_ok) return quotient_tensor_norm(chain);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const std::size_t max_degree = chain.max_degree();
  double worst = 0.0;
  for (std::size_t probe = 0; probe < probes; ++probe) {
    std::vector<ComplexMatrix> functionals(max_degree + 1);
    for (std::size_t k = 0; k <= max_degree; ++k) {
      ComplexMatrix r(d, d);
      for (Eigen::Index j = 0; j < r.cols(); ++j)
        for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, j) = Complex(normal(rng), normal(rng));
      if (k > 0) r.diagonal().array() -= r.trace() / static_cast<double>(d);
      functionals[k] = r / r.norm();
    }
    std::map<std::size_t, Complex> by_degree;
    for (const auto& t : chain.terms()) {
      Complex v = t.coeff;
      for (std::size_t k = 0; k < t.factors.size(); ++k)
        v *= (functionals[k].conjugate().array() * t.factors[k].array()).sum();
      by_degree[t.degree()] += v;
    }
    double sq = 0.0;
    for (const auto& [n, v] : by_degree) sq += std::norm(v);
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

}  // namespace jlolab
