#include "jlolab/json_io.hpp"

#include <fstream>
#include <string>

#include "jlolab/error.hpp"

namespace jlolab {

namespace {

template <class F>
auto parsing(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back(complex_to_json(m(i, k)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  return parsing("matrix", [&] {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const Json& entries = j.at("entries");
    if (rows < 0 || cols < 0 || !entries.is_array() || entries.size() != static_cast<std::size_t>(rows * cols))
      throw ParseError("matrix: expected " + std::to_string(rows * cols) + " entries");
    ComplexMatrix m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(entries[idx++]);
    return m;
  });
}

Json chain_to_json(const Chain& chain) {
  Json terms = Json::array();
  for (const auto& t : chain.terms()) {
    Json factors = Json::array();
    for (const auto& f : t.factors) factors.push_back(matrix_to_json(f));
    terms.push_back(Json{{"coeff", complex_to_json(t.coeff)}, {"factors", std::move(factors)}});
  }
  return Json{{"algebra_dim", chain.algebra_dim()}, {"terms", std::move(terms)}};
}

Chain chain_from_json(const Json& j) {
  return parsing("chain", [&] {
    Chain out(j.at("algebra_dim").get<std::size_t>());
    for (const auto& t : j.at("terms")) {
      ElementaryChain term;
      term.coeff = t.contains("coeff") ? complex_from_json(t.at("coeff")) : Complex(1.0, 0.0);
      for (const auto& f : t.at("factors")) term.factors.push_back(matrix_from_json(f));
      out.add(std::move(term));
    }
    return out;
  });
}

Json triple_to_json(const SpectralTripleFD& triple) {
  Json gens = Json::array();
  for (const auto& g : triple.generators()) gens.push_back(matrix_to_json(g));
  return Json{{"dim_even", triple.space().dim_even()},
              {"dim_odd", triple.space().dim_odd()},
              {"D", matrix_to_json(triple.dirac())},
              {"generators", std::move(gens)}};
}

SpectralTripleFD triple_from_json(const Json& j) {
  return parsing("triple", [&] {
    const GradedSpace space(j.at("dim_even").get<std::size_t>(), j.at("dim_odd").get<std::size_t>());
    std::vector<ComplexMatrix> gens;
    if (j.contains("generators"))
      for (const auto& g : j.at("generators")) gens.push_back(matrix_from_json(g));
    return SpectralTripleFD(space, matrix_from_json(j.at("D")), std::move(gens));
  });
}

Json idempotent_to_json(const Idempotent& e) { return Json{{"k", e.k}, {"e", matrix_to_json(e.e)}}; }

Idempotent idempotent_from_json(const Json& j) {
  return parsing("idempotent", [&] {
    const std::size_t k = j.contains("k") ? j.at("k").get<std::size_t>() : 1;
    if (k == 0) throw ParseError("idempotent: k must be >= 1");
    return Idempotent{matrix_from_json(j.at("e")), k};
  });
}

Json permutation_to_json(const SignedPermutation& p) {
  Json images = Json::array();
  for (std::size_t x : p.images()) images.push_back(x + 1);
  return Json{{"images", std::move(images)}, {"sign", p.sign()}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace jlolab
