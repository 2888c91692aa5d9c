#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jlolab/chains.hpp"
#include "jlolab/combinatorics.hpp"
#include "jlolab/error.hpp"
#include "jlolab/jlo.hpp"
#include "jlolab/json_io.hpp"
#include "jlolab/random.hpp"
#include "jlolab/spectral.hpp"
#include "jlolab/verify.hpp"

namespace py = pybind11;
using namespace jlolab;

namespace {

Idempotent make_idempotent(const ComplexMatrix& e, std::size_t k) { return Idempotent{e, k}; }

py::dict pairing_dict(const PairingReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["truncation_degree"] = r.truncation_degree;
  d["last_term_magnitude"] = r.last_term_magnitude;
  d["nearest_integer"] = r.nearest_integer;
  d["target_index"] = r.target_index ? py::cast(*r.target_index) : py::none();
  d["terms"] = r.terms;
  d["agrees"] = r.agrees();
  return d;
}

}  // namespace

PYBIND11_MODULE(jlolab, m) {
  m.doc() = "Finite-dimensional spectral triples, the JLO cocycle, shuffles and index pairing";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<NonHermitian>(m, "NonHermitian", base.ptr());
  py::register_exception<ParityError>(m, "ParityError", base.ptr());
  py::register_exception<NotSelfAdjoint>(m, "NotSelfAdjoint", base.ptr());
  py::register_exception<NotIdempotent>(m, "NotIdempotent", base.ptr());
  py::register_exception<NonIntegerIndex>(m, "NonIntegerIndex", base.ptr());
  py::register_exception<NonConvergent>(m, "NonConvergent", base.ptr());
  py::register_exception<ChainTooLarge>(m, "ChainTooLarge", base.ptr());
  py::register_exception<DegreeTooLarge>(m, "DegreeTooLarge", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<GradedSpace>(m, "GradedSpace")
      .def(py::init<std::size_t, std::size_t>(), py::arg("dim_even"), py::arg("dim_odd"))
      .def_property_readonly("dim_even", &GradedSpace::dim_even)
      .def_property_readonly("dim_odd", &GradedSpace::dim_odd)
      .def_property_readonly("dim", &GradedSpace::dim)
      .def("grading", &GradedSpace::grading)
      .def("__repr__", [](const GradedSpace& s) {
        return "GradedSpace(" + std::to_string(s.dim_even()) + ", " + std::to_string(s.dim_odd()) + ")";
      });

  py::class_<SpectralTripleFD>(m, "SpectralTriple")
      .def(py::init<GradedSpace, ComplexMatrix, std::vector<ComplexMatrix>>(), py::arg("space"), py::arg("dirac"),
           py::arg("generators") = std::vector<ComplexMatrix>{})
      .def_property_readonly("space", &SpectralTripleFD::space)
      .def_property_readonly("dim", &SpectralTripleFD::dim)
      .def_property_readonly("dirac", &SpectralTripleFD::dirac)
      .def_property_readonly("grading", &SpectralTripleFD::grading)
      .def_property_readonly("generators", &SpectralTripleFD::generators)
      .def_property_readonly("natural_order", &SpectralTripleFD::natural_order);

  py::class_<Idempotent>(m, "Idempotent")
      .def(py::init(&make_idempotent), py::arg("e"), py::arg("k") = 1)
      .def_readonly("e", &Idempotent::e)
      .def_readonly("k", &Idempotent::k);

  py::class_<Chain>(m, "Chain")
      .def(py::init<std::size_t>(), py::arg("algebra_dim"))
      .def_static("elementary", &Chain::elementary, py::arg("factors"), py::arg("coeff") = Complex(1.0))
      .def_static("unit", &Chain::unit, py::arg("algebra_dim"))
      .def_property_readonly("algebra_dim", &Chain::algebra_dim)
      .def_property_readonly("max_degree", &Chain::max_degree)
      .def("__len__", &Chain::size)
      .def("terms",
           [](const Chain& c) {
             py::list out;
             for (const auto& t : c.terms()) out.append(py::make_tuple(t.coeff, t.factors));
             return out;
           })
      .def("scaled", &Chain::scaled)
      .def(py::self + py::self)
      .def(py::self - py::self);

  m.def("hochschild_b", &hochschild_b);
  m.def("connes_B", &connes_B);
  m.def("shuffle_product", &shuffle_product);
  m.def("cyclic_shuffle_product", &cyclic_shuffle_product);
  m.def("br_operation", [](const std::vector<Chain>& chains) { return br_operation(chains); });
  m.def("quotient_residual", &quotient_residual, py::arg("chain"), py::arg("probes") = 16,
        py::arg("seed") = 0x5eedULL);

  m.def("binomial", &binomial);
  m.def("shuffle_count", [](unsigned p, unsigned q) { return enumerate_shuffles(p, q).size(); });
  m.def("cyclic_shuffle_count", [](const std::vector<unsigned>& d) { return cyclic_shuffle_count(d); });
  m.def("shuffles", [](unsigned p, unsigned q) {
    std::vector<std::pair<std::vector<std::size_t>, int>> out;
    for (const auto& s : enumerate_shuffles(p, q)) out.emplace_back(s.images(), s.sign());
    return out;
  });

  m.def("product_triple", &product_triple);
  m.def("product_element", &product_element);
  m.def("product_idempotent", &product_idempotent);
  m.def("commutator_d", &commutator_d);
  m.def("heat", &heat, py::arg("triple"), py::arg("t"));
  m.def("kernel_projection", [](const SpectralTripleFD& t) {
    const auto k = kernel_projection(t);
    return py::make_tuple(k.projection, k.rank, k.gap_warning);
  });
  m.def("index", [](const SpectralTripleFD& t) { return jlolab::index(t); });
  m.def("compress_by_idempotent", &compress_by_idempotent);

  py::enum_<ExactMethod>(m, "ExactMethod")
      .value("Automatic", ExactMethod::Automatic)
      .value("ClusterSum", ExactMethod::ClusterSum)
      .value("BlockExponential", ExactMethod::BlockExponential);

  py::class_<JloEvaluator>(m, "JloEvaluator")
      .def(py::init<SpectralTripleFD>(), py::arg("triple"))
      .def_property_readonly("cluster_count", &JloEvaluator::cluster_count)
      .def("elementary",
           [](const JloEvaluator& ev, const ComplexMatrix& first, const std::vector<ComplexMatrix>& rest,
              ExactMethod method) { return ev.elementary(first, rest, method); },
           py::arg("first"), py::arg("rest"), py::arg("method") = ExactMethod::Automatic)
      .def("cochain", &JloEvaluator::cochain, py::call_guard<py::gil_scoped_release>())
      .def("bch", &JloEvaluator::bch, py::call_guard<py::gil_scoped_release>())
      .def("perturbed", &JloEvaluator::perturbed, py::call_guard<py::gil_scoped_release>())
      .def("monte_carlo",
           [](const JloEvaluator& ev, const Chain& c, std::size_t samples, std::uint64_t seed) {
             const auto e = ev.monte_carlo(c, samples, seed);
             return py::make_tuple(e.value, e.std_error);
           },
           py::arg("chain"), py::arg("samples"), py::arg("seed") = 0);

  m.def("jlo_cochain", &jlo_cochain);
  m.def("bch_cochain", &bch_cochain);
  m.def("perturbed_cochain", &perturbed_cochain);
  m.def("chern_idempotent", &chern_idempotent, py::arg("e"), py::arg("max_degree"));
  m.def("index_pairing",
        [](const SpectralTripleFD& t, const Idempotent& e, double tol) { return pairing_dict(index_pairing(t, e, tol)); },
        py::arg("triple"), py::arg("e"), py::arg("tol") = 0.01);
  m.def("verify_theorem",
        [](const std::vector<SpectralTripleFD>& ts, const std::vector<Chain>& cs, int part) {
          const auto r = verify_theorem_ainf(ts, cs, part);
          return py::make_tuple(r.lhs, r.rhs, r.residual);
        },
        py::arg("triples"), py::arg("chains"), py::arg("part"));

  py::class_<RandomSource>(m, "RandomSource")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("triple", &RandomSource::triple, py::arg("dim_even"), py::arg("dim_odd"), py::arg("dirac_scale") = 1.0,
           py::arg("generators") = 2)
      .def("chain", &RandomSource::chain, py::arg("space"), py::arg("degree"), py::arg("terms") = 1)
      .def("even_element", &RandomSource::even_element)
      .def("projection", &RandomSource::projection, py::arg("space"), py::arg("k"), py::arg("rank_even"),
           py::arg("rank_odd"));

  m.def("verify",
        [](const std::string& config_json, std::size_t threads) {
          RunConfig config;
          if (!config_json.empty()) {
            try {
              config = config_from_json(Json::parse(config_json));
            } catch (const Json::exception& e) {
              throw ParseError(e.what());
            }
          }
          validate_config(config);
          VerifyReport report;
          {
            py::gil_scoped_release release;
            report = run_verification(config, threads);
          }
          return report.to_json(utc_timestamp()).dump();
        },
        py::arg("config_json") = "", py::arg("threads") = 1,
        "Run the identity suites; returns the JSON report as a string.");
}
