#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <span>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jlolab/combinatorics.hpp"
#include "jlolab/error.hpp"
#include "jlolab/jlo.hpp"
#include "jlolab/json_io.hpp"
#include "jlolab/random.hpp"
#include "jlolab/verify.hpp"

namespace {

using namespace jlolab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::size_t> mc_samples;
  std::optional<std::string> report;
  std::optional<std::string> config;
};

int cmd_verify(const GlobalFlags& flags, std::optional<std::size_t> trials) {
  RunConfig config;
  if (flags.config) config = config_from_json(read_json_file(*flags.config));
  if (flags.seed) config.seed = *flags.seed;
  if (flags.tolerance) config.tolerance = *flags.tolerance;
  if (flags.mc_samples) config.mc_samples = *flags.mc_samples;
  if (flags.report) config.report_path = *flags.report;
  if (trials) config.trials = *trials;
  validate_config(config);

  const auto report = run_verification(config, worker_count());
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  const std::string table = report.text_table();
  std::cout << table;
  if (!config.report_path.empty()) {
    write_json_file(config.report_path, report.to_json(utc_timestamp()));
    std::ofstream(config.report_path + ".txt") << table;
  }
  return report.all_pass() ? kExitPass : kExitFail;
}

struct IndexOutcome {
  PairingReport pairing;
  long fredholm = 0;
};

IndexOutcome index_of(const SpectralTripleFD& t, const Idempotent& e, double tol) {
  IndexOutcome out;
  out.pairing = index_pairing(t, e, tol);
  out.fredholm = *out.pairing.target_index;
  return out;
}

void print_index(const std::string& label, const IndexOutcome& r) {
  std::cout << std::setprecision(12) << label << ": pairing " << r.pairing.value.real() << " (imag "
            << r.pairing.value.imag() << ", degree " << r.pairing.truncation_degree << ", last term "
            << r.pairing.last_term_magnitude << "), Fredholm index " << r.fredholm << ", difference "
            << std::abs(r.pairing.value - Complex(static_cast<double>(r.fredholm), 0.0)) << '\n';
}

int cmd_index(const std::string& triple_file, const std::string& idem_file, const std::optional<std::string>& times,
              const std::optional<std::string>& times_idem, double tol) {
  const auto t1 = triple_from_json(read_json_file(triple_file));
  const auto e1 = idempotent_from_json(read_json_file(idem_file));
  const auto diag = validate_triple(t1);
  if (!diag.ok()) {
    for (const auto& f : diag.failures) std::cerr << "invalid triple: " << f << '\n';
    return kExitUsage;
  }
  const auto r1 = index_of(t1, e1, tol);
  print_index("triple", r1);
  bool ok = r1.pairing.agrees(tol);
  if (times) {
    const auto t2 = triple_from_json(read_json_file(*times));
    const Idempotent e2 = times_idem ? idempotent_from_json(read_json_file(*times_idem))
                                     : Idempotent{identity(t2.dim()), 1};
    const auto r2 = index_of(t2, e2, tol);
    print_index("second", r2);
    const auto prod = product_triple(t1, t2);
    const auto r12 = index_of(prod, product_idempotent(t1, e1, t2, e2), tol);
    print_index("product", r12);
    const bool law = r12.fredholm == r1.fredholm * r2.fredholm && r12.pairing.nearest_integer == r12.fredholm;
    std::cout << "product law: " << r12.fredholm << " = " << r1.fredholm << " * " << r2.fredholm << " -> "
              << (law ? "holds" : "FAILS") << '\n';
    ok = ok && r2.pairing.agrees(tol) && r12.pairing.agrees(tol) && law;
  }
  return ok ? kExitPass : kExitFail;
}

std::vector<unsigned> parse_degrees(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    const long v = std::stol(item, &pos);
    if (pos != item.size() || v < 0) throw ParseError("--cyclic expects comma separated degrees, got '" + text + "'");
    out.push_back(static_cast<unsigned>(v));
  }
  if (out.empty()) throw ParseError("--cyclic expects at least one degree");
  return out;
}

constexpr unsigned kMaxDecomposeDegree = 6;
constexpr unsigned kMaxDecomposeTotal = 12;
constexpr std::uint64_t kMaxDecomposeRegions = 1000000;

void check_degrees(const std::vector<unsigned>& degrees) {
  unsigned total = 0;
  for (unsigned d : degrees) {
    if (d > kMaxDecomposeDegree)
      throw DegreeTooLarge("degree " + std::to_string(d) + " exceeds " + std::to_string(kMaxDecomposeDegree));
    total += d;
  }
  if (total > kMaxDecomposeTotal)
    throw DegreeTooLarge("total degree " + std::to_string(total) + " exceeds " + std::to_string(kMaxDecomposeTotal));
}

std::vector<double> sorted_uniforms(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = unif(rng);
  std::sort(v.begin(), v.end());
  return v;
}

std::string images_string(const SignedPermutation& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.degree(); ++i) s += (i ? " " : "") + std::to_string(p.image(i) + 1);
  return s + ")";
}

// Prints per-region hit fractions against the equal share 1/count and returns
// the largest deviation in standard errors.
double print_regions(const std::vector<SignedPermutation>& list, const std::vector<std::size_t>& hits,
                     std::size_t samples, std::size_t list_limit) {
  const double n = static_cast<double>(samples);
  const double expected = 1.0 / static_cast<double>(list.size());
  const double se = std::sqrt(expected * (1.0 - expected) / n);
  double worst = 0.0;
  std::size_t width = 8;
  for (std::size_t i = 0; i < std::min(list.size(), list_limit); ++i)
    width = std::max(width, images_string(list[i]).size() + 2);
  const int w = static_cast<int>(width);
  std::cout << std::left << std::setw(w) << "region" << std::setw(6) << "sign" << std::setw(12) << "fraction"
            << std::setw(12) << "expected" << "z\n";
  for (std::size_t i = 0; i < list.size(); ++i) {
    const double frac = static_cast<double>(hits[i]) / n;
    const double z = se > 0.0 ? (frac - expected) / se : 0.0;
    worst = std::max(worst, std::abs(z));
    if (i < list_limit)
      std::cout << std::left << std::setw(w) << images_string(list[i]) << std::setw(6) << list[i].sign()
                << std::fixed << std::setprecision(6) << std::setw(12) << frac << std::setw(12) << expected
                << std::setprecision(2) << z << std::defaultfloat << '\n';
  }
  if (list.size() > list_limit) std::cout << "... " << list.size() - list_limit << " more regions\n";
  return worst;
}

int cmd_decompose(std::optional<unsigned> p, std::optional<unsigned> q, const std::optional<std::string>& cyclic,
                  std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t limit = 24;
  bool ok = true;
  if (cyclic) {
    const auto degrees = parse_degrees(*cyclic);
    check_degrees(degrees);
    std::uint64_t regions = 0;
    try {
      regions = cyclic_shuffle_count(degrees);
    } catch (const std::overflow_error&) {
      regions = std::numeric_limits<std::uint64_t>::max();
    }
    if (regions > kMaxDecomposeRegions)
      throw DegreeTooLarge("cyclic shuffle count exceeds " + std::to_string(kMaxDecomposeRegions) + " regions");
    const auto list = enumerate_cyclic_shuffles(degrees);
    const auto expected = cyclic_shuffle_count(degrees);
    std::cout << "cyclic shuffles r=" << degrees.size() << " degrees=" << *cyclic << ": count " << list.size()
              << ", multinomial " << expected << (list.size() == expected ? " ok" : " MISMATCH") << '\n';
    ok = list.size() == expected;
    if (samples > 0) {
      std::map<std::vector<std::size_t>, std::size_t> position;
      for (std::size_t i = 0; i < list.size(); ++i) position.emplace(list[i].images(), i);
      std::vector<std::size_t> hits(list.size(), 0);
      std::size_t ties = 0, used = 0;
      for (std::size_t k = 0; k < samples; ++k) {
        const SimplexPoint s(sorted_uniforms(rng, degrees.size()));
        std::vector<SimplexPoint> t;
        for (unsigned d : degrees) t.emplace_back(sorted_uniforms(rng, d));
        const auto found = cyclic_region_locate(degrees, s, t);
        if (!found) {
          ++ties;
          continue;
        }
        ++hits.at(position.at(found->images()));
        ++used;
      }
      const double worst = print_regions(list, hits, used, limit);
      std::cout << "samples " << used << " (discarded " << ties << "), max |z| " << std::setprecision(3) << worst
                << '\n';
    }
  } else {
    if (!p || !q) throw ParseError("decompose needs --p and --q, or --cyclic");
    check_degrees({*p, *q});
    const auto list = enumerate_shuffles(*p, *q);
    const auto expected = binomial(*p + *q, *p);
    std::cout << "shuffles (p,q)=(" << *p << "," << *q << "): count " << list.size() << ", binomial " << expected
              << (list.size() == expected ? " ok" : " MISMATCH") << '\n';
    ok = list.size() == expected;
    if (samples > 0) {
      std::vector<std::size_t> hits(list.size(), 0);
      std::size_t unpartitioned = 0;
      for (std::size_t k = 0; k < samples; ++k) {
        const SimplexPoint s(sorted_uniforms(rng, *p)), t(sorted_uniforms(rng, *q));
        std::size_t found = 0;
        for (std::size_t i = 0; i < list.size(); ++i)
          if (shuffle_region_contains(list[i], s, t)) {
            ++hits[i];
            ++found;
          }
        if (found != 1) ++unpartitioned;
      }
      const double worst = print_regions(list, hits, samples, limit);
      std::cout << "samples " << samples << ", not in exactly one region " << unpartitioned << ", max |z| "
                << std::setprecision(3) << worst << '\n';
      ok = ok && unpartitioned == 0;
    }
  }
  return ok ? kExitPass : kExitFail;
}

const char* method_name(ExactMethod m) {
  switch (m) {
    case ExactMethod::ClusterSum: return "cluster";
    case ExactMethod::BlockExponential: return "block";
    default: return "auto";
  }
}

int cmd_bench(std::size_t dim_even, std::size_t dim_odd, std::size_t degree, std::size_t repeat, std::uint64_t seed,
              ExactMethod method) {
  if (dim_even + dim_odd == 0) throw ParseError("bench: dimension must be positive");
  if (degree > kMaxJloDegree) throw DegreeTooLarge("bench: degree exceeds " + std::to_string(kMaxJloDegree));
  RandomSource rng(seed);
  const auto t = rng.triple(dim_even, dim_odd);
  const JloEvaluator ev(t);
  const Chain a = rng.chain(t.space(), degree);
  Complex value{};
  const auto start = std::chrono::steady_clock::now();
  const auto& term = a.terms().front();
  const std::span<const ComplexMatrix> rest(term.factors.data() + 1, term.factors.size() - 1);
  if (method == ExactMethod::Automatic) method = ev.method_for(degree);
  for (std::size_t i = 0; i < repeat; ++i) value += term.coeff * ev.elementary(term.factors[0], rest, method);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "dims (" << dim_even << "," << dim_odd << ") degree " << degree << " clusters " << ev.cluster_count()
            << " method " << method_name(method) << ": " << repeat << " evaluations in " << std::setprecision(4) << secs << " s ("
            << secs / static_cast<double>(std::max<std::size_t>(repeat, 1)) * 1e6 << " us each), value "
            << std::setprecision(12) << value / static_cast<double>(std::max<std::size_t>(repeat, 1)) << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional spectral triples, the JLO cocycle and its product identities"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  std::uint64_t seed = 42;
  double tol = 0.01;
  app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--tolerance", flags.tolerance, "tolerance (verify: caps every identity tolerance)");
  app.add_option("--mc-samples", flags.mc_samples, "Monte-Carlo samples");
  app.add_option("--report", flags.report, "JSON report path (a .txt table is written next to it)");
  app.add_option("--config", flags.config, "JSON run configuration");

  auto* verify = app.add_subcommand("verify", "run the randomized identity suites");
  std::optional<std::size_t> trials;
  verify->add_option("--trials", trials, "trials per suite");

  auto* index_cmd = app.add_subcommand("index", "JLO pairing against the Fredholm index");
  std::string triple_file, idem_file;
  std::optional<std::string> times, times_idem;
  index_cmd->add_option("triple", triple_file, "triple JSON")->required();
  index_cmd->add_option("idempotent", idem_file, "idempotent JSON")->required();
  index_cmd->add_option("--times", times, "second triple JSON for the product law");
  index_cmd->add_option("--times-idempotent", times_idem, "idempotent of the second triple (default: identity)");

  auto* decompose = app.add_subcommand("decompose", "shuffle counts and Monte-Carlo region volumes");
  std::optional<unsigned> p, q;
  std::optional<std::string> cyclic;
  std::size_t samples = 100000;
  decompose->add_option("--p", p, "first block degree");
  decompose->add_option("--q", q, "second block degree");
  decompose->add_option("--cyclic", cyclic, "cyclic block degrees, e.g. 1,1");
  decompose->add_option("--samples", samples, "Monte-Carlo samples (0 skips sampling)");

  auto* bench = app.add_subcommand("bench", "time exact JLO evaluation");
  std::size_t be = 2, bo = 2, bdeg = 4, repeat = 20;
  bench->add_option("--dim-even", be, "even dimension");
  bench->add_option("--dim-odd", bo, "odd dimension");
  bench->add_option("--degree", bdeg, "chain degree");
  bench->add_option("--repeat", repeat, "evaluations");
  ExactMethod method = ExactMethod::Automatic;
  const std::map<std::string, ExactMethod> methods{
      {"auto", ExactMethod::Automatic}, {"cluster", ExactMethod::ClusterSum}, {"block", ExactMethod::BlockExponential}};
  bench->add_option("--method", method, "exact evaluator: auto, cluster or block")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case))
      ->option_text("auto|cluster|block");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (flags.seed) seed = *flags.seed;
    if (*verify) return cmd_verify(flags, trials);
    if (flags.tolerance) tol = *flags.tolerance;
    if (*index_cmd) return cmd_index(triple_file, idem_file, times, times_idem, tol);
    if (*decompose) return cmd_decompose(p, q, cyclic, flags.mc_samples.value_or(samples), seed);
    if (*bench) return cmd_bench(be, bo, bdeg, repeat, seed, method);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegreeTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NonIntegerIndex& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  } catch (const NonConvergent& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
