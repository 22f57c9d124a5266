// Copyright 2026 The fidelity-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "fidlab/ensembles.hpp"
#include "fidlab/errors.hpp"
#include "fidlab/fidelity.hpp"
#include "fidlab/linalg.hpp"
#include "fidlab/models.hpp"
#include "fidlab/perturbations.hpp"
#include "fidlab/runner.hpp"
#include "fidlab/spectral.hpp"

namespace py = pybind11;
using namespace fidlab;

namespace {

PerturbationSpec make_spec(int n_qubits, double delta,
                           const std::optional<ComplexMatrix>& transform,
                           const std::optional<std::uint64_t>& cue_seed,
                           std::uint64_t cue_stream) {
  PerturbationSpec spec{n_qubits, delta, Computational{}};
  if (transform && cue_seed) {
    throw Error(ErrorCode::kInvalidArgument, "pass either transform or cue_seed");
  }
  if (transform) spec.basis = CoordinateBasis{*transform};
  if (cue_seed) spec.basis = RandomCue{{*cue_seed, cue_stream}};
  return spec;
}

SpacingModel spacing_model(const std::string& name) {
  if (name == "poisson") return SpacingModel::kPoisson;
  if (name == "wigner_gue") return SpacingModel::kWignerGue;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown spacing model '" + name + "' (expected poisson|wigner_gue)");
}

ExperimentConfig parse_config(const std::string& text) {
  try {
    return config_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fidelity decay under random-matrix and kicked-top maps";
  m.attr("__version__") = std::string(tool_version());

  py::register_exception<Error>(m, "FidelityLabError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object cls = py::module_::import("fidelity_lab._core").attr("FidelityLabError");
      py::object exc = cls(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(cls.ptr(), exc.ptr());
    }
  });

  // linalg
  m.def("hermitian_eig", [](const ComplexMatrix& h) {
        auto e = hermitian_eig(h);
        return py::make_tuple(e.eigenvalues, e.vectors);
      }, py::arg("h"), "Ascending eigenvalues and eigenvector columns.");
  m.def("unitary_eig", [](const ComplexMatrix& u) {
        auto e = unitary_eig(u);
        return py::make_tuple(e.eigenphases, e.vectors);
      }, py::arg("u"), "Eigenphases in [0, 2pi), ascending, and eigenvector columns.");
  m.def("exp_hermitian", py::overload_cast<const ComplexMatrix&, double>(&exp_hermitian),
        py::arg("h"), py::arg("t"), "exp(-i t H).");
  m.def("unitarity_defect", &unitarity_defect, py::arg("u"));

  // ensembles and models
  m.def("sample_gue", [](Index n, std::uint64_t seed, std::uint64_t stream) {
        return sample_gue(n, {seed, stream});
      }, py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
  m.def("sample_cue",
        [](Index n, std::uint64_t seed, std::uint64_t stream, const std::string& method) {
          CueMethod cm;
          if (method == "qr_ginibre") {
            cm = CueMethod::kQrGinibre;
          } else if (method == "eigvec_of_gue") {
            cm = CueMethod::kEigvecOfGue;
          } else {
            throw Error(ErrorCode::kInvalidArgument, "unknown method '" + method + "'");
          }
          return sample_cue(n, {seed, stream}, cm);
        },
        py::arg("n"), py::arg("seed"), py::arg("stream") = 0,
        py::arg("method") = "qr_ginibre");
  m.def("kicked_top", [](double j, double k) {
        return build_kicked_top({Spin::from_value(j), k});
      }, py::arg("j"), py::arg("k"));
  m.def("gue_propagator", [](Index n, double tau, std::uint64_t seed, std::uint64_t stream) {
        return build_gue_propagator({tau, {seed, stream}}, n);
      }, py::arg("n"), py::arg("tau"), py::arg("seed"), py::arg("stream") = 0);
  m.def("jy_basis", [](double j) { return jy_basis(Spin::from_value(j)); }, py::arg("j"));

  // perturbations
  m.def("spectrum_variance", &spectrum_variance, py::arg("n_qubits"));
  m.def("collective_z_spectrum", &collective_z_spectrum, py::arg("n_qubits"));
  m.def("fgr_rate",
        [](int n_qubits, double delta) {
          const auto p = fgr_rate({n_qubits, delta, Computational{}});
          py::dict d;
          d["gamma"] = p.gamma;
          d["sigma2"] = p.sigma2;
          d["delta_level"] = p.delta_level;
          d["lambda_var"] = p.lambda_var;
          return d;
        },
        py::arg("n_qubits"), py::arg("delta"));
  m.def("build_perturbation",
        [](int n_qubits, double delta, std::optional<ComplexMatrix> transform,
           std::optional<std::uint64_t> cue_seed, std::uint64_t cue_stream) {
          return build_perturbation(make_spec(n_qubits, delta, transform, cue_seed, cue_stream));
        },
        py::arg("n_qubits"), py::arg("delta"), py::arg("transform") = py::none(),
        py::arg("cue_seed") = py::none(), py::arg("cue_stream") = 0);

  // fidelity
  py::class_<FidelityCurve>(m, "FidelityCurve")
      .def_readonly("values", &FidelityCurve::values)
      .def_readonly("std", &FidelityCurve::std)
      .def_readonly("per_state", &FidelityCurve::per_state)
      .def_property_readonly("n_max", &FidelityCurve::n_max);
  py::class_<RateFit>(m, "RateFit")
      .def_readonly("gamma_fit", &RateFit::gamma_fit)
      .def_readonly("r2", &RateFit::r2)
      .def_property_readonly("window",
                             [](const RateFit& f) { return py::make_tuple(f.n_lo, f.n_hi); })
      .def("__repr__", [](const RateFit& f) {
        return "RateFit(gamma_fit=" + std::to_string(f.gamma_fit) +
               ", r2=" + std::to_string(f.r2) + ")";
      });
  m.def("fidelity_curves", &fidelity_curves, py::arg("u"), py::arg("up"),
        py::arg("initial_states"), py::arg("n_max"),
        "Curves for every column of initial_states, evolved together.");
  m.def("echo_curve", &echo_curve, py::arg("u"), py::arg("up"), py::arg("psi0"),
        py::arg("n_max"));
  m.def("fit_rate", &fit_rate, py::arg("curve"), py::arg("dim"));
  m.def("theory_curve", &theory_curve, py::arg("gamma"), py::arg("n_max"), py::arg("dim"));
  m.def("sampled_fidelity",
        [](const ComplexMatrix& u, const ComplexMatrix& up, Index prep, Index n,
           std::uint64_t shots, std::uint64_t seed) {
          const auto r = sampled_fidelity(u, up, prep, n, shots, {seed, 0});
          py::dict d;
          d["probability"] = r.probability;
          d["estimate"] = r.estimate;
          d["stderr"] = r.stderr_estimate;
          d["shots"] = r.shots;
          return d;
        },
        py::arg("u"), py::arg("up"), py::arg("prep_state_index"), py::arg("n"),
        py::arg("shots"), py::arg("seed"));

  // spectral
  m.def("spacings", [](const ComplexMatrix& u) { return nn_spacings(u).spacings; },
        py::arg("u"), "Unfolded nearest-neighbour eigenphase spacings, sorted.");
  m.def("ks_distance",
        [](const ComplexMatrix& u, const std::string& model) {
          return ks_distance(nn_spacings(u), spacing_model(model));
        },
        py::arg("u"), py::arg("model"));
  m.def("reference_pdf", [](const std::string& model, double s) {
        return reference_pdf(spacing_model(model), s);
      }, py::arg("model"), py::arg("s"));
  m.def("ldos",
        [](const ComplexMatrix& u, const ComplexMatrix& up, Index index) {
          const auto p = ldos(u, up, index);
          return py::make_tuple(p.phases, p.weights, p.center_phase);
        },
        py::arg("u"), py::arg("up"), py::arg("index"),
        "Perturbed phases, weights and the unperturbed phase of eigenstate `index`.");

  // runner
  m.def("recipe_names", &recipe_names);
  m.def("recipe_config", [](const std::string& name) {
        return config_to_json(recipe(name)).dump();
      }, py::arg("name"));
  m.def("_run_json",
        [](const std::string& config, std::optional<std::filesystem::path> out_dir) {
          const ExperimentConfig c = parse_config(config);
          ExperimentReport report;
          {
            py::gil_scoped_release release;
            report = run(c);
            if (out_dir) emit(report, *out_dir);
          }
          return report_to_json(report).dump();
        },
        py::arg("config"), py::arg("out_dir") = py::none());
}
