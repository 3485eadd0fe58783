#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mblsim/errors.hpp"
#include "mblsim/free_fermion.hpp"
#include "mblsim/serialize.hpp"

namespace py = pybind11;
using namespace mblsim;

namespace {

StateVector state_from_array(const Eigen::VectorXcd& amplitudes) {
  long dim = amplitudes.size();
  int n = 0;
  while ((1L << n) < dim) ++n;
  if ((1L << n) != dim) throw ConfigError("state length must be a power of two");
  return StateVector{n, amplitudes};
}

InitialPattern pattern_from_signs(const std::vector<int>& signs) {
  InitialPattern p{signs};
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact diagonalization and free-fermion dynamics for the disordered "
            "long-range Ising chain";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  // Ion chain and couplings
  py::class_<TrapSpec>(m, "TrapSpec")
      .def(py::init([](int ion_count, double anisotropy, double rabi_frequency,
                       double recoil_frequency, double beatnote_detuning,
                       double resonance_margin) {
             return TrapSpec{ion_count, anisotropy, rabi_frequency, recoil_frequency,
                             beatnote_detuning, resonance_margin};
           }),
           py::arg("ion_count"), py::arg("anisotropy"), py::arg("rabi_frequency") = 1.0,
           py::arg("recoil_frequency") = 1.0, py::arg("beatnote_detuning") = 0.0,
           py::arg("resonance_margin") = 1e-3)
      .def_readwrite("ion_count", &TrapSpec::ion_count)
      .def_readwrite("anisotropy", &TrapSpec::anisotropy)
      .def_readwrite("rabi_frequency", &TrapSpec::rabi_frequency)
      .def_readwrite("recoil_frequency", &TrapSpec::recoil_frequency)
      .def_readwrite("beatnote_detuning", &TrapSpec::beatnote_detuning)
      .def_readwrite("resonance_margin", &TrapSpec::resonance_margin)
      .def("validate", &TrapSpec::validate);

  py::class_<NormalModes>(m, "NormalModes")
      .def_readonly("positions", &NormalModes::positions)
      .def_readonly("mode_matrix", &NormalModes::mode_matrix)
      .def_readonly("frequencies", &NormalModes::frequencies);

  m.def("equilibrium_positions", &equilibrium_positions, py::arg("n"));
  m.def("transverse_modes", &transverse_modes, py::arg("positions"), py::arg("anisotropy"));

  py::class_<CouplingMatrix>(m, "CouplingMatrix")
      .def_property_readonly("n", &CouplingMatrix::n)
      .def_property_readonly("values",
                             [](const CouplingMatrix& c) { return c.values(); })
      .def("__repr__", [](const CouplingMatrix& c) {
        return "<CouplingMatrix n=" + std::to_string(c.n()) + ">";
      });

  m.def("power_law_couplings", &power_law_couplings, py::arg("n"), py::arg("j_max"),
        py::arg("alpha"));
  m.def("kac_normalized_couplings", &kac_normalized_couplings, py::arg("n"), py::arg("j"),
        py::arg("alpha"));
  m.def("kac_norm", &kac_norm, py::arg("n"), py::arg("alpha"));
  m.def("coupling_from_modes", py::overload_cast<const TrapSpec&>(&coupling_from_modes),
        py::arg("trap"));
  m.def("coupling_from_matrix", &coupling_from_matrix, py::arg("values"));
  m.def(
      "fit_alpha",
      [](const CouplingMatrix& c, bool drop_edge_ions) {
        const AlphaFit f = fit_alpha(c, drop_edge_ions);
        return py::make_tuple(f.j_max, f.alpha);
      },
      py::arg("couplings"), py::arg("drop_edge_ions") = false);

  m.def(
      "sample_disorder",
      [](double w, std::uint64_t seed, int n) {
        const DisorderRealization d = sample_disorder(w, seed, n);
        return Eigen::Map<const Eigen::VectorXd>(d.values.data(), d.n()).eval();
      },
      py::arg("w"), py::arg("seed"), py::arg("n"));

  // Model and dense engine
  py::class_<ModelSpec>(m, "ModelSpec")
      .def_property_readonly("n", &ModelSpec::n)
      .def_readonly("field_b", &ModelSpec::field_b)
      .def_property_readonly("disorder", [](const ModelSpec& s) {
        return Eigen::Map<const Eigen::VectorXd>(s.disorder.values.data(), s.disorder.n())
            .eval();
      });
  m.def(
      "make_model",
      [](const CouplingMatrix& couplings, double field_b, double w, std::uint64_t seed) {
        return make_model(couplings, field_b, w, seed);
      },
      py::arg("couplings"), py::arg("field_b"), py::arg("disorder_w") = 0.0,
      py::arg("seed") = 0);

  py::class_<HamiltonianOperator>(m, "Hamiltonian")
      .def(py::init<ModelSpec, int>(), py::arg("model"),
           py::arg("capacity") = HamiltonianOperator::default_capacity())
      .def_property_readonly("n", &HamiltonianOperator::n)
      .def_property_readonly("dim", &HamiltonianOperator::dim)
      .def("dense", [](const HamiltonianOperator& h) { return h.dense(); })
      .def("eigenvalues",
           [](const HamiltonianOperator& h) { return h.spectrum().eigenvalues; })
      .def("apply", [](const HamiltonianOperator& h, const Eigen::VectorXcd& x) {
        return h.apply(x);
      })
      .def("expectation", [](const HamiltonianOperator& h, const Eigen::VectorXcd& x) {
        return h.expectation(state_from_array(x));
      });

  m.def("neel_state", [](int n) { return neel_state(n).amplitudes; }, py::arg("n"));
  m.def(
      "z_product_state",
      [](const std::vector<int>& signs) { return z_product_state(signs).amplitudes; },
      py::arg("signs"));
  m.def(
      "evolve",
      [](const Eigen::VectorXcd& psi, const HamiltonianOperator& h, double t,
         const std::string& method) {
        EvolutionMethod em = EvolutionMethod::Auto;
        if (method == "spectral") em = EvolutionMethod::Spectral;
        else if (method == "krylov") em = EvolutionMethod::Krylov;
        else if (method != "auto") throw ConfigError("method must be auto, spectral or krylov");
        return evolve(state_from_array(psi), h, t, em).amplitudes;
      },
      py::arg("psi"), py::arg("hamiltonian"), py::arg("t"), py::arg("method") = "auto");

  m.def("all_sz", [](const Eigen::VectorXcd& psi) { return all_sz(state_from_array(psi)); });
  m.def("all_zz", [](const Eigen::VectorXcd& psi) { return all_zz(state_from_array(psi)); });
  m.def(
      "expectation_pauli",
      [](const Eigen::VectorXcd& psi, int site, char axis) {
        return expectation_pauli(state_from_array(psi), site, axis);
      },
      py::arg("psi"), py::arg("site"), py::arg("axis"));
  m.def(
      "reduced_density_matrix",
      [](const Eigen::VectorXcd& psi, int site) -> Eigen::Matrix2cd {
        return reduced_density_matrix(state_from_array(psi), site);
      },
      py::arg("psi"), py::arg("site"));
  m.def(
      "hamming_distance",
      [](const Eigen::VectorXcd& psi, const std::vector<int>& signs) {
        return hamming_distance(state_from_array(psi), pattern_from_signs(signs));
      },
      py::arg("psi"), py::arg("initial_signs"));
  m.def("qfi_staggered", [](const Eigen::VectorXcd& psi) {
    return qfi_staggered(state_from_array(psi));
  });

  // Spectral statistics
  m.def(
      "r_statistic",
      [](const Eigen::VectorXd& eigenvalues) {
        const RStatistic rs = r_statistic(eigenvalues);
        return py::make_tuple(rs.r_values, rs.mean, rs.skipped);
      },
      py::arg("eigenvalues"));
  m.def("eth_beta",
        py::overload_cast<const Eigen::VectorXd&, double>(&eth_beta),
        py::arg("eigenvalues"), py::arg("energy"));
  m.def(
      "eth_rdm",
      [](const HamiltonianOperator& h, double beta, int site) -> Eigen::Matrix2cd {
        return eth_rdm(h, beta, site).rdm;
      },
      py::arg("hamiltonian"), py::arg("beta"), py::arg("site"));

  // Free-fermion control
  py::class_<BdgHamiltonian>(m, "BdgHamiltonian")
      .def_readonly("hopping", &BdgHamiltonian::hopping)
      .def_readonly("pairing", &BdgHamiltonian::pairing)
      .def_readonly("phase_signs", &BdgHamiltonian::phase_signs);
  py::class_<CovarianceState>(m, "CovarianceState")
      .def_readonly("g", &CovarianceState::g)
      .def_readonly("f", &CovarianceState::f)
      .def("physicality_error", &CovarianceState::physicality_error);
  m.def(
      "build_bdg",
      [](const ModelSpec& spec, const std::vector<int>& signs) {
        return build_bdg(spec, pattern_from_signs(signs));
      },
      py::arg("model"), py::arg("initial_signs"));
  m.def(
      "init_covariance",
      [](const std::vector<int>& signs) { return init_covariance(pattern_from_signs(signs)); },
      py::arg("initial_signs"));
  m.def("evolve_covariance", &evolve_covariance, py::arg("state"), py::arg("bdg"),
        py::arg("t"));
  m.def(
      "ff_observables",
      [](const CovarianceState& s) {
        const FreeFermionObservables obs = ff_observables(s);
        return py::make_tuple(obs.sz, obs.zz, obs.f_q);
      },
      py::arg("state"));

  // Harness: config in, result document out, both as JSON strings.
  m.def(
      "run_ensemble_json",
      [](const std::string& config_json) {
        const ExperimentConfig cfg = config_from_json(Json::parse(config_json));
        return dump_json(result_to_json(run_ensemble(cfg)));
      },
      py::arg("config_json"));
  m.def(
      "run_levelstats_json",
      [](const std::string& config_json, int bins) {
        const ExperimentConfig cfg = config_from_json(Json::parse(config_json));
        const LevelStatsResult result = run_levelstats(cfg, bins);
        Json j = levelstats_to_json(result);
        j["content_hash"] = result.content_hash;
        return dump_json(j);
      },
      py::arg("config_json"), py::arg("bins") = 20);

#ifdef MBLSIM_VERSION
  m.attr("__version__") = MBLSIM_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
