#include "jlolab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "jlolab/combinatorics.hpp"
#include "jlolab/error.hpp"
#include "jlolab/jlo.hpp"
#include "jlolab/random.hpp"

namespace jlolab {

RunConfig config_from_json(const Json& j, RunConfig base) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  static const char* const known[] = {"seed", "dims", "max_degree", "trials", "tolerance", "mc_samples", "report_path"};
  for (const auto& [key, value] : j.items())
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw ParseError("config: unknown key '" + key + "'");
  try {
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("dims")) {
      base.dims.clear();
      for (const auto& d : j.at("dims")) {
        if (!d.is_array() || d.size() != 2) throw ParseError("config: dims entries must be [dim_even, dim_odd]");
        base.dims.emplace_back(d.at(0).get<std::size_t>(), d.at(1).get<std::size_t>());
      }
    }
    if (j.contains("max_degree")) base.max_degree = j.at("max_degree").get<std::size_t>();
    if (j.contains("trials")) base.trials = j.at("trials").get<std::size_t>();
    if (j.contains("tolerance")) base.tolerance = j.at("tolerance").get<double>();
    if (j.contains("mc_samples")) base.mc_samples = j.at("mc_samples").get<std::size_t>();
    if (j.contains("report_path")) base.report_path = j.at("report_path").get<std::string>();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  validate_config(base);
  return base;
}

Json config_to_json(const RunConfig& config) {
  Json dims = Json::array();
  for (const auto& [e, o] : config.dims) dims.push_back(Json::array({e, o}));
  return Json{{"seed", config.seed},         {"dims", std::move(dims)},
              {"max_degree", config.max_degree}, {"trials", config.trials},
              {"tolerance", config.tolerance},   {"mc_samples", config.mc_samples},
              {"report_path", config.report_path}};
}

void validate_config(const RunConfig& config) {
  if (config.max_degree > kMaxConfigDegree)
    throw ParseError("config: max_degree must be <= " + std::to_string(kMaxConfigDegree));
  if (config.dims.empty()) throw ParseError("config: dims must not be empty");
  std::size_t largest = 0;
  for (const auto& [e, o] : config.dims) {
    if (e + o == 0) throw ParseError("config: every dims entry needs a positive total dimension");
    largest = std::max(largest, e + o);
  }
  if (largest * largest > kMaxProductDim)
    throw ParseError("config: product triples would exceed total dimension " + std::to_string(kMaxProductDim));
  if (!(config.tolerance > 0.0) || !std::isfinite(config.tolerance))
    throw ParseError("config: tolerance must be a positive number");
  if (config.mc_samples < 2) throw ParseError("config: mc_samples must be >= 2");
}

bool VerifyReport::all_pass() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
}

Json VerifyReport::to_json(const std::string& timestamp) const {
  Json list = Json::array();
  for (const auto& c : checks)
    list.push_back(Json{{"identity", c.identity},
                        {"residual", c.residual},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass},
                        {"seed", c.seed},
                        {"params", c.params}});
  return Json{{"schema", 1},
              {"timestamp", timestamp},
              {"config", config_to_json(config)},
              {"warnings", warnings},
              {"checks", std::move(list)}};
}

std::string VerifyReport::text_table() const {
  std::ostringstream out;
  out << std::left << std::setw(34) << "identity" << std::setw(14) << "residual" << std::setw(12) << "tolerance"
      << "result\n";
  out << std::string(66, '-') << '\n';
  for (const auto& c : checks) {
    out << std::left << std::setw(34) << c.identity << std::scientific << std::setprecision(3) << std::setw(14)
        << c.residual << std::setw(12) << c.tolerance << (c.pass ? "pass" : "FAIL") << '\n';
  }
  out << std::defaultfloat << checks.size() << " checks, " << failures() << " failed\n";
  return out.str();
}

namespace {

using Dims = std::pair<std::size_t, std::size_t>;

struct Context {
  const RunConfig& config;
  RandomSource rng;
  Json params = Json::object();

  Dims pick_dims() { return config.dims[std::uniform_int_distribution<std::size_t>(0, config.dims.size() - 1)(rng.engine())]; }
  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, std::max(lo, hi))(rng.engine());
  }
  SpectralTripleFD triple(Dims d, double scale = 1.0) { return rng.triple(d.first, d.second, scale); }
  double tol(double nominal) const { return std::min(nominal, config.tolerance); }
};

Json dims_json(const SpectralTripleFD& t) { return Json::array({t.space().dim_even(), t.space().dim_odd()}); }

Chain embed_pair(const SpectralTripleFD& t1, const SpectralTripleFD& t2, const Chain& chain) {
  const auto order = product_sort_order(t1.space(), t2.space());
  return map_factors(chain, [&order](const ComplexMatrix& m) { return permute(m, order); });
}

struct Outcome {
  double residual;
  double tolerance;
};

Outcome shuffle_multiplicativity(Context& c) {
  const auto t1 = c.triple(c.pick_dims()), t2 = c.triple(c.pick_dims());
  const std::size_t p = c.pick(0, c.config.max_degree), q = c.pick(0, c.config.max_degree);
  const std::vector<SpectralTripleFD> ts{t1, t2};
  const std::vector<Chain> cs{c.rng.chain(t1.space(), p), c.rng.chain(t2.space(), q)};
  const auto r = verify_theorem_ainf(ts, cs, 1);
  c.params = {{"dims", {dims_json(t1), dims_json(t2)}}, {"degrees", {p, q}}, {"terms", r.product_terms}};
  return {r.residual / (1.0 + std::abs(r.rhs)), c.tol(1e-8)};
}

Outcome cyclic_shuffle_r2(Context& c) {
  const auto t1 = c.triple(c.pick_dims()), t2 = c.triple(c.pick_dims());
  const std::size_t top = std::min<std::size_t>(c.config.max_degree, 2);
  const std::size_t p = c.pick(0, top), q = c.pick(0, top);
  const std::vector<SpectralTripleFD> ts{t1, t2};
  const std::vector<Chain> cs{c.rng.chain(t1.space(), p), c.rng.chain(t2.space(), q)};
  const auto r = verify_theorem_ainf(ts, cs, 2);
  c.params = {{"dims", {dims_json(t1), dims_json(t2)}}, {"degrees", {p, q}}, {"terms", r.product_terms}};
  return {r.residual, c.tol(1e-8)};
}

Outcome cyclic_shuffle_r3(Context& c) {
  const std::size_t top = std::min<std::size_t>(c.config.max_degree, 2);
  std::vector<std::size_t> degrees{c.pick(0, top), c.pick(0, top), c.pick(0, top)};
  const std::size_t total = degrees[0] + degrees[1] + degrees[2];
  std::vector<Dims> small;
  for (const auto& d : c.config.dims)
    if (d.first + d.second <= 3) small.push_back(d);
  std::vector<SpectralTripleFD> ts;
  for (int i = 0; i < 3; ++i) {
    Dims d{1, 1};
    if (total <= 3 && !small.empty()) d = small[c.pick(0, small.size() - 1)];
    ts.push_back(c.triple(d));
  }
  std::vector<Chain> cs;
  for (int i = 0; i < 3; ++i) cs.push_back(c.rng.chain(ts[i].space(), degrees[i]));
  const auto r = verify_theorem_ainf(ts, cs, 2);
  c.params = {{"dims", {dims_json(ts[0]), dims_json(ts[1]), dims_json(ts[2])}},
              {"degrees", degrees},
              {"terms", r.product_terms}};
  return {r.residual, c.tol(1e-8)};
}

Outcome bch_equals_ch_B(Context& c) {
  const auto t = c.triple(c.pick_dims());
  const std::size_t n = c.pick(0, std::min<std::size_t>(c.config.max_degree + 1, 3));
  const Chain a = c.rng.chain(t.space(), n, 2);
  const JloEvaluator ev(t);
  const Complex lhs = ev.bch(a);
  const Complex rhs = ev.cochain(connes_B(a));
  c.params = {{"dims", dims_json(t)}, {"degree", n}};
  return {std::abs(lhs - rhs) / (1.0 + std::abs(rhs)), c.tol(1e-9)};
}

Outcome perturbed_cocycle(Context& c) {
  const auto t = c.triple(c.pick_dims());
  const std::size_t n = c.pick(0, std::min<std::size_t>(c.config.max_degree, 3));
  const Chain a = c.rng.chain(t.space(), n, 2);
  const JloEvaluator ev(t);
  c.params = {{"dims", dims_json(t)}, {"degree", n}};
  return {std::abs(ev.perturbed(hochschild_b(a) + connes_B(a))), c.tol(1e-9)};
}

Outcome perturbed_two_forms(Context& c) {
  const auto t = c.triple(c.pick_dims());
  const std::size_t n = c.pick(0, std::min<std::size_t>(c.config.max_degree + 1, 3));
  const Chain a = c.rng.chain(t.space(), n, 2);
  const JloEvaluator ev(t);
  const Complex direct = ev.perturbed(a);
  c.params = {{"dims", dims_json(t)}, {"degree", n}};
  return {std::abs(direct - ev.perturbed_via_delta(a)) / (1.0 + std::abs(direct)), c.tol(1e-10)};
}

Outcome perturbed_multiplicativity(Context& c) {
  const auto t1 = c.triple(c.pick_dims()), t2 = c.triple(c.pick_dims());
  const std::size_t top = std::min<std::size_t>(c.config.max_degree, 2);
  const std::size_t p = c.pick(0, top), q = c.pick(0, top);
  const Chain a = c.rng.chain(t1.space(), p), b = c.rng.chain(t2.space(), q);
  const auto prod = product_triple(t1, t2);
  const Chain both = embed_pair(t1, t2, shuffle_product(a, b) + cyclic_shuffle_product(a, b));
  const Complex lhs = perturbed_cochain(prod, both);
  const Complex rhs = perturbed_cochain(t1, a) * perturbed_cochain(t2, b);
  c.params = {{"dims", {dims_json(t1), dims_json(t2)}}, {"degrees", {p, q}}};
  return {std::abs(lhs - rhs) / (1.0 + std::abs(rhs)), c.tol(1e-8)};
}

Idempotent random_projection(Context& c, const GradedSpace& space) {
  return c.rng.projection(space, 1, c.pick(0, space.dim_even()), c.pick(0, space.dim_odd()));
}

Outcome index_multiplicativity(Context& c) {
  const auto t1 = c.triple(c.pick_dims(), 0.1), t2 = c.triple(c.pick_dims(), 0.1);
  const Idempotent e1 = random_projection(c, t1.space()), e2 = random_projection(c, t2.space());
  const auto r1 = index_pairing(t1, e1), r2 = index_pairing(t2, e2);
  const auto prod = product_triple(t1, t2);
  const auto r12 = index_pairing(prod, product_idempotent(t1, e1, t2, e2));
  double residual = std::abs(r12.value - r1.value * r2.value);
  bool exact = r1.agrees() && r2.agrees() && r12.agrees() &&
               r12.nearest_integer == r1.nearest_integer * r2.nearest_integer &&
               index(prod) == index(t1) * index(t2);
  c.params = {{"dims", {dims_json(t1), dims_json(t2)}},
              {"indices", {r1.nearest_integer, r2.nearest_integer, r12.nearest_integer}},
              {"integer_law", exact}};
  if (!exact) residual = std::max(residual, 1.0);
  return {residual, c.tol(1e-8)};
}

Outcome heat_factorization(Context& c) {
  const auto t1 = c.triple(c.pick_dims()), t2 = c.triple(c.pick_dims());
  const auto prod = product_triple(t1, t2);
  double worst = 0.0;
  for (double t : {0.1, 1.0, 3.0})
    worst = std::max(worst, operator_norm(heat(prod, t) - product_element(t1, t2, heat(t1, t), heat(t2, t))));
  c.params = {{"dims", {dims_json(t1), dims_json(t2)}}, {"times", {0.1, 1.0, 3.0}}};
  return {worst, c.tol(1e-10)};
}

Outcome derivation_product(Context& c) {
  const auto t1 = c.triple(c.pick_dims()), t2 = c.triple(c.pick_dims());
  const auto prod = product_triple(t1, t2);
  ComplexMatrix lhs_arg = ComplexMatrix::Zero(static_cast<Eigen::Index>(prod.dim()), static_cast<Eigen::Index>(prod.dim()));
  ComplexMatrix rhs = lhs_arg;
  for (int i = 0; i < 2; ++i) {
    const ComplexMatrix b = c.rng.even_element(t1.space()), d = c.rng.even_element(t2.space());
    lhs_arg += product_element(t1, t2, b, d);
    rhs += product_element(t1, t2, commutator_d(t1, b), d) +
           product_element(t1, t2, b * t1.grading(), commutator_d(t2, d));
  }
  c.params = {{"dims", {dims_json(t1), dims_json(t2)}}, {"summands", 2}};
  return {operator_norm(commutator_d(prod, lhs_arg) - rhs), c.tol(1e-10)};
}

Outcome kernel_product(Context& c) {
  const auto t1 = c.triple(c.pick_dims()), t2 = c.triple(c.pick_dims());
  const auto prod = product_triple(t1, t2);
  const auto p = kernel_projection(prod).projection;
  const auto p12 = product_element(t1, t2, kernel_projection(t1).projection, kernel_projection(t2).projection);
  c.params = {{"dims", {dims_json(t1), dims_json(t2)}}, {"index", index(prod)}};
  return {operator_norm(p - p12), c.tol(1e-10)};
}

Outcome mc_oracle(Context& c) {
  const auto t = c.triple(c.pick_dims());
  const std::size_t n = c.pick(0, c.config.max_degree);
  const Chain a = c.rng.chain(t.space(), n);
  const JloEvaluator ev(t);
  const Complex exact = ev.cochain(a);
  const auto mc = ev.monte_carlo(a, c.config.mc_samples, c.rng.engine()());
  const double gap = std::abs(exact - mc.value);
  const double floor = 1e-12 * (1.0 + std::abs(exact));
  c.params = {{"dims", dims_json(t)}, {"degree", n}, {"samples", mc.samples}, {"std_error", mc.std_error}};
  return {gap <= floor ? 0.0 : gap / std::max(mc.std_error, 1e-300), 4.0};
}

Outcome chain_b_squared(Context& c) {
  const auto d = c.pick_dims();
  const Chain a = c.rng.chain(GradedSpace(d.first, d.second), c.pick(0, c.config.max_degree), 2);
  c.params = {{"dims", {d.first, d.second}}, {"degree", a.max_degree()}};
  return {quotient_residual(hochschild_b(hochschild_b(a))), c.tol(1e-10)};
}

Outcome chain_B_squared(Context& c) {
  const auto d = c.pick_dims();
  const Chain a = c.rng.chain(GradedSpace(d.first, d.second), c.pick(0, c.config.max_degree), 2);
  c.params = {{"dims", {d.first, d.second}}, {"degree", a.max_degree()}};
  return {quotient_residual(connes_B(connes_B(a))), c.tol(1e-10)};
}

Outcome chain_bB_anticommute(Context& c) {
  const auto d = c.pick_dims();
  const Chain a = c.rng.chain(GradedSpace(d.first, d.second), c.pick(0, c.config.max_degree), 2);
  c.params = {{"dims", {d.first, d.second}}, {"degree", a.max_degree()}};
  return {quotient_residual(hochschild_b(connes_B(a)) + connes_B(hochschild_b(a))), c.tol(1e-10)};
}

Outcome shuffle_associativity(Context& c) {
  std::size_t budget = c.config.max_degree;
  std::vector<std::size_t> deg(3);
  for (auto& d : deg) {
    d = c.pick(0, budget);
    budget -= d;
  }
  const GradedSpace s(1, 1);
  const Chain a = c.rng.chain(s, deg[0]), b = c.rng.chain(s, deg[1]), d = c.rng.chain(s, deg[2]);
  c.params = {{"degrees", deg}};
  return {quotient_residual(shuffle_product(shuffle_product(a, b), d) - shuffle_product(a, shuffle_product(b, d))),
          c.tol(1e-10)};
}

Outcome b_derivation(Context& c) {
  const auto d1 = c.pick_dims(), d2 = c.pick_dims();
  const std::size_t p = c.pick(0, c.config.max_degree);
  const std::size_t q = c.pick(0, c.config.max_degree - p);
  const Chain a = c.rng.chain(GradedSpace(d1.first, d1.second), p);
  const Chain b = c.rng.chain(GradedSpace(d2.first, d2.second), q);
  const Chain lhs = hochschild_b(shuffle_product(a, b));
  const Chain rhs = shuffle_product(hochschild_b(a), b) + shuffle_product(a, hochschild_b(b)).scaled(p % 2 ? -1.0 : 1.0);
  c.params = {{"dims", {{d1.first, d1.second}, {d2.first, d2.second}}}, {"degrees", {p, q}}};
  return {quotient_residual(lhs - rhs), c.tol(1e-10)};
}

Outcome b1_equals_B(Context& c) {
  const auto d = c.pick_dims();
  const std::size_t n = c.pick(0, std::min<std::size_t>(c.config.max_degree + 1, 3));
  const Chain a = c.rng.chain(GradedSpace(d.first, d.second), n, 2);
  const Chain single[] = {a};
  c.params = {{"dims", {d.first, d.second}}, {"degree", n}};
  return {quotient_residual(br_operation(single) - connes_B(a)), c.tol(1e-12)};
}

Outcome shuffle_counts(Context& c) {
  const std::size_t total = c.pick(0, 8);
  const auto p = static_cast<unsigned>(c.pick(0, total));
  const auto q = static_cast<unsigned>(total - p);
  const auto list = enumerate_shuffles(p, q);
  std::size_t bad = 0;
  for (const auto& s : list)
    if (!is_shuffle(s, p, q) || s.sign() != signature_by_inversions(s.images())) ++bad;
  c.params = {{"p", p}, {"q", q}, {"count", list.size()}, {"expected", binomial(p + q, p)}};
  return {std::abs(static_cast<double>(list.size()) - static_cast<double>(binomial(p + q, p))) + static_cast<double>(bad),
          0.0};
}

Outcome cyclic_counts(Context& c) {
  const std::size_t r = c.pick(1, 3);
  std::vector<unsigned> degrees;
  for (std::size_t i = 0; i < r; ++i) degrees.push_back(static_cast<unsigned>(c.pick(0, 3)));
  if (r == 3) degrees.back() = std::min(degrees.back(), 1u);
  const auto list = enumerate_cyclic_shuffles(degrees);
  std::size_t bad = 0;
  for (const auto& s : list)
    if (!is_cyclic_shuffle(s, degrees) || s.sign() != signature_by_inversions(s.images())) ++bad;
  const auto expected = cyclic_shuffle_count(degrees);
  c.params = {{"degrees", degrees}, {"count", list.size()}, {"expected", expected}};
  return {std::abs(static_cast<double>(list.size()) - static_cast<double>(expected)) + static_cast<double>(bad), 0.0};
}

Outcome shuffle_volumes(Context& c) {
  const auto p = static_cast<unsigned>(c.pick(1, 2)), q = static_cast<unsigned>(c.pick(1, 2));
  const auto list = enumerate_shuffles(p, q);
  std::vector<std::size_t> hits(list.size(), 0);
  std::vector<double> s(p), t(q);
  std::size_t outside = 0;
  for (std::size_t k = 0; k < c.config.mc_samples; ++k) {
    for (auto& x : s) x = c.rng.uniform();
    for (auto& x : t) x = c.rng.uniform();
    std::sort(s.begin(), s.end());
    std::sort(t.begin(), t.end());
    const SimplexPoint sp(s), tp(t);
    std::size_t found = 0;
    for (std::size_t i = 0; i < list.size(); ++i)
      if (shuffle_region_contains(list[i], sp, tp)) {
        ++hits[i];
        ++found;
      }
    if (found != 1) ++outside;
  }
  // Each region has volume 1/(p+q)! inside a product of volume 1/(p! q!).
  const double n = static_cast<double>(c.config.mc_samples);
  const double expected = 1.0 / static_cast<double>(list.size());
  double worst = 0.0;
  for (std::size_t h : hits) {
    const double frac = static_cast<double>(h) / n;
    const double se = std::sqrt(expected * (1.0 - expected) / n);
    worst = std::max(worst, se > 0.0 ? std::abs(frac - expected) / se : 0.0);
  }
  c.params = {{"p", p}, {"q", q}, {"samples", c.config.mc_samples}, {"unpartitioned", outside}};
  return {outside ? 1e300 : worst, 4.0};
}

using Suite = Outcome (*)(Context&);

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> list{
      {"shuffle_multiplicativity", shuffle_multiplicativity},
      {"cyclic_shuffle_r2", cyclic_shuffle_r2},
      {"cyclic_shuffle_r3", cyclic_shuffle_r3},
      {"bch_equals_ch_B", bch_equals_ch_B},
      {"perturbed_cocycle", perturbed_cocycle},
      {"perturbed_delta_form", perturbed_two_forms},
      {"perturbed_multiplicativity", perturbed_multiplicativity},
      {"index_multiplicativity", index_multiplicativity},
      {"heat_factorization", heat_factorization},
      {"derivation_product", derivation_product},
      {"kernel_projection_product", kernel_product},
      {"exact_vs_monte_carlo", mc_oracle},
      {"chain_b_squared", chain_b_squared},
      {"chain_B_squared", chain_B_squared},
      {"chain_bB_anticommute", chain_bB_anticommute},
      {"shuffle_associativity", shuffle_associativity},
      {"b_derivation_over_shuffle", b_derivation},
      {"B1_equals_connes_B", b1_equals_B},
      {"shuffle_counts", shuffle_counts},
      {"cyclic_shuffle_counts", cyclic_counts},
      {"shuffle_partition_volumes", shuffle_volumes},
  };
  return list;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : suites()) names.push_back(name);
  return names;
}

CheckResult run_check(const std::string& suite, const RunConfig& config, std::uint64_t seed) {
  const auto& list = suites();
  auto it = std::find_if(list.begin(), list.end(), [&](const auto& s) { return s.first == suite; });
  if (it == list.end()) throw std::invalid_argument("unknown suite '" + suite + "'");
  Context ctx{config, RandomSource(seed)};
  CheckResult result;
  result.identity = suite;
  result.seed = seed;
  try {
    const Outcome o = it->second(ctx);
    result.residual = o.residual;
    result.tolerance = o.tolerance;
    result.pass = std::isfinite(o.residual) && o.residual <= o.tolerance;
  } catch (const std::exception& e) {
    result.residual = std::numeric_limits<double>::infinity();
    result.pass = false;
    ctx.params["error"] = e.what();
  }
  result.params = std::move(ctx.params);
  return result;
}

VerifyReport run_verification(const RunConfig& config, std::size_t threads) {
  validate_config(config);
  VerifyReport report;
  report.config = config;
  if (config.trials == 0) {
    report.warnings.push_back("trials = 0: no checks were run");
    return report;
  }
  const auto names = suite_names();
  const std::size_t total = names.size() * config.trials;
  report.checks.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t trial = i / names.size();
      const std::size_t suite = i % names.size();
      const std::uint64_t seed = trial_seed(trial_seed(config.seed, trial), suite);
      report.checks[i] = run_check(names[suite], config, seed);
      report.checks[i].params["trial"] = trial;
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, total));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("JLOLAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace jlolab
