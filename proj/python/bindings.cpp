// Copyright 2026 The dqc1lab developers
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dqc1lab/circuit.hpp"
#include "dqc1lab/dataset.hpp"
#include "dqc1lab/model.hpp"
#include "dqc1lab/optimize.hpp"
#include "dqc1lab/random_matrix.hpp"
#include "dqc1lab/spectrum.hpp"
#include "dqc1lab/sym_eig.hpp"

namespace py = pybind11;
using namespace dqc1lab;

namespace {

std::vector<std::pair<std::vector<int>, Complex>> spectrum_items(const Spectrum& s) {
    std::vector<std::pair<std::vector<int>, Complex>> out;
    out.reserve(s.coefficients.size());
    for (const auto& [freq, c] : s.coefficients) out.emplace_back(freq.halves, c);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "DQC1 circuit simulation, gradients, Fourier analysis and training";

    // --- circuits -----------------------------------------------------------
    py::enum_<Axis>(m, "Axis").value("X", Axis::X).value("Y", Axis::Y).value("Z", Axis::Z);

    py::class_<CircuitSpec>(m, "CircuitSpec")
        .def_property_readonly("n", &CircuitSpec::n)
        .def_property_readonly("feature_dim", &CircuitSpec::feature_dim)
        .def_property_readonly("param_count", &CircuitSpec::param_count)
        .def("compile_unitary",
             [](const CircuitSpec& spec, const std::vector<double>& x,
                const std::vector<double>& theta) { return spec.compile_unitary(x, theta); },
             py::arg("x"), py::arg("theta"))
        .def("to_json", &circuit_to_json)
        .def("__repr__", [](const CircuitSpec& spec) {
            return "<CircuitSpec n=" + std::to_string(spec.n()) +
                   " params=" + std::to_string(spec.param_count()) + ">";
        });

    m.def("univariate_trace_circuit", &univariate_trace_circuit, py::arg("n"), py::arg("layers"),
          py::arg("ansatz"), py::arg("axis") = Axis::X,
          "W_1 V_1 ... W_L V_L W_{L+1} with a shared scalar feature");
    m.def("zz_classifier_circuit", &zz_classifier_circuit, py::arg("n"), py::arg("repetitions"),
          py::arg("ansatz"));
    m.def("circuit_from_json", &circuit_from_json, py::arg("text"));

    // --- linear algebra primitives -------------------------------------------
    m.def("kron", &kron, py::arg("a"), py::arg("b"));
    m.def("pauli_rotation",
          [](const std::string& letters, double theta) {
              return pauli_rotation(PauliString(letters), theta);
          },
          py::arg("letters"), py::arg("theta"), "exp(-i theta P) for a Pauli string");
    m.def("pauli_matrix",
          [](const std::string& letters) { return PauliString(letters).matrix(); },
          py::arg("letters"));
    m.def("haar_unitary",
          [](int n_qubits, uint64_t seed) {
              RngStream rng(seed);
              return haar_unitary(n_qubits, rng);
          },
          py::arg("n_qubits"), py::arg("seed"));
    m.def("sym_eig",
          [](const RMat& matrix) {
              const SymEig eig = sym_eig(matrix);
              return py::make_tuple(eig.values, eig.vectors);
          },
          py::arg("matrix"), "eigenvalues (descending) and orthonormal eigenvectors");

    // --- models ---------------------------------------------------------------
    py::class_<ModelConfig>(m, "ModelConfig")
        .def_readonly("n", &ModelConfig::n)
        .def_readonly("alpha", &ModelConfig::alpha)
        .def_readonly("circuit", &ModelConfig::circuit)
        .def("with_alpha",
             [](ModelConfig model, double alpha) {
                 model.alpha = alpha;
                 model.validate();
                 return model;
             })
        .def("with_thermal",
             [](ModelConfig model, const CMat& hamiltonian, double beta) {
                 model.working = ThermalState{hamiltonian, beta};
                 model.validate();
                 return model;
             },
             py::arg("hamiltonian"), py::arg("beta"))
        .def("with_working_density",
             [](ModelConfig model, const CMat& rho) {
                 model.working = ExplicitState{rho};
                 model.validate();
                 return model;
             },
             py::arg("rho"))
        .def("with_observable",
             [](ModelConfig model, const CMat& observable) {
                 model.measurement = SignalTensor{observable};
                 model.validate();
                 return model;
             },
             py::arg("observable"))
        .def("with_encoded_observable",
             [](ModelConfig model, const CMat& observable, const CircuitSpec& encoder) {
                 model.measurement = DataEncodedMeasurement{observable, encoder};
                 model.validate();
                 return model;
             },
             py::arg("observable"), py::arg("encoder"));

    m.def("trace_model", &trace_model, py::arg("circuit"), py::arg("alpha") = 1.0);
    m.def("thermal_density", &thermal_density, py::arg("hamiltonian"), py::arg("beta"));

    m.def("evaluate_exact",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta) { return evaluate_exact(model, x, theta); });
    m.def("evaluate_thermal",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta) { return evaluate_thermal(model, x, theta); });
    m.def("evaluate_multimeasure",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta) { return evaluate_multimeasure(model, x, theta); });
    m.def("model_value",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta) { return model_value(model, x, theta); });
    m.def("joint_state",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta) {
              const JointState js = joint_state_oracle(model, x, theta);
              return py::make_tuple(js.sx, js.sy, js.rho);
          },
          "(<sigma_x>, <sigma_y>, full protocol state)");
    m.def("evaluate_shots",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta, long shots, uint64_t seed) {
              RngStream rng(seed);
              const ShotEstimate est =
                  evaluate_shots(model, x, theta, ShotPlan{shots, 0.1, 0.1}, rng);
              return py::make_tuple(est.value, est.stderr);
          },
          py::arg("model"), py::arg("x"), py::arg("theta"), py::arg("shots"), py::arg("seed"));
    m.def("repetitions_needed",
          [](double epsilon, double delta, double alpha) {
              return repetitions_needed(ShotPlan{1, epsilon, delta}, alpha);
          },
          py::arg("epsilon"), py::arg("delta"), py::arg("alpha"));

    m.def("gradient",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta) { return gradient(model, x, theta); });
    m.def("grad_insertion",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta, int slot) {
              return grad_insertion(model, x, theta, slot);
          });
    m.def("grad_commuting",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta, int slot) {
              return grad_commuting(model, x, theta, slot);
          });
    m.def("grad_fd",
          [](const ModelConfig& model, const std::vector<double>& x,
             const std::vector<double>& theta, int slot, double h) {
              return grad_fd(model, x, theta, slot, h);
          },
          py::arg("model"), py::arg("x"), py::arg("theta"), py::arg("slot"), py::arg("h") = 1e-5);

    m.def("qnn_evaluate",
          [](const CircuitSpec& circuit, const CMat& observable, const std::vector<double>& x,
             const std::vector<double>& theta) {
              return qnn_evaluate(circuit, observable, x, theta);
          });
    m.def("qnn_gradient_fd",
          [](const CircuitSpec& circuit, const CMat& observable, const std::vector<double>& x,
             const std::vector<double>& theta, double h) {
              return qnn_gradient_fd(circuit, observable, x, theta, h);
          },
          py::arg("circuit"), py::arg("observable"), py::arg("x"), py::arg("theta"),
          py::arg("h") = 1e-5);

    // --- spectra ----------------------------------------------------------------
    m.def("enumerate_frequencies",
          [](const CircuitSpec& spec) {
              std::vector<std::vector<int>> out;
              for (const auto& f : enumerate_frequencies(spec)) out.push_back(f.halves);
              return out;
          },
          "frequency vectors in half-integer units (omega = halves/2 . x)");
    py::enum_<ModelKind>(m, "ModelKind")
        .value("DQC1", ModelKind::Dqc1)
        .value("DQC1_DATA_ENCODED", ModelKind::Dqc1DataEncoded)
        .value("QNN", ModelKind::Qnn);
    m.def("cardinality_bound", &cardinality_bound, py::arg("n"), py::arg("layers"),
          py::arg("kind"));
    m.def("extract_coefficients_dft",
          [](const ModelConfig& model, const std::vector<double>& theta, int feature_index) {
              return spectrum_items(extract_coefficients_dft(model, theta, feature_index));
          },
          py::arg("model"), py::arg("theta"), py::arg("feature_index") = 0,
          "[(halves, coefficient)] from a DFT over one period");
    m.def("coefficients_direct",
          [](const ModelConfig& model, const std::vector<double>& theta) {
              return spectrum_items(coefficients_direct(model, theta));
          },
          "[(halves, coefficient)] by exact diagonal-path enumeration");

    py::class_<ConcentrationReport>(m, "ConcentrationReport")
        .def_readonly("n", &ConcentrationReport::n)
        .def_readonly("samples", &ConcentrationReport::samples)
        .def_readonly("mean_re", &ConcentrationReport::mean_re)
        .def_readonly("mean_im", &ConcentrationReport::mean_im)
        .def_readonly("var_re", &ConcentrationReport::var_re)
        .def_readonly("var_im", &ConcentrationReport::var_im)
        .def_readonly("scaled_var_re", &ConcentrationReport::scaled_var_re)
        .def_readonly("scaled_var_im", &ConcentrationReport::scaled_var_im);
    m.def("concentration_study",
          [](const std::vector<int>& n_range, long samples, uint64_t seed) {
              RngStream rng(seed);
              return concentration_study(n_range, samples, rng);
          },
          py::arg("n_range"), py::arg("samples"), py::arg("seed"));
    m.def("hoeffding_bound", &hoeffding_bound, py::arg("n"), py::arg("t"));
    m.def("chebyshev_bound", &chebyshev_bound, py::arg("var"), py::arg("eps"));
    m.def("fourier_projection_residual",
          [](const std::vector<double>& xs, const std::vector<double>& ys, int max_frequency) {
              return fourier_projection_residual(xs, ys, max_frequency);
          },
          py::arg("xs"), py::arg("ys"), py::arg("max_frequency"));

    // --- training ------------------------------------------------------------------
    m.def("target_grid",
          [](const std::string& id) {
              const TargetGrid grid = target_grid(target_function(id));
              return py::make_tuple(grid.x, grid.y);
          },
          py::arg("id"), "70 equispaced samples of Re g_id over [-6, 6]");
    m.def("mse_loss",
          [](const std::vector<double>& predictions, const std::vector<double>& labels) {
              return mse_loss(predictions, labels);
          });
    m.def("train_dqc1_regression",
          [](const ModelConfig& model, const RVec& xs, const RVec& ys, double lr, int iterations,
             int batch, uint64_t seed) {
              RngStream rng(seed);
              TrainConfig train;
              train.iterations = iterations;
              train.batch_size = batch;
              const RMat x_mat = xs;
              const auto res = train_regression(dqc1_predictor(model), x_mat, ys, AdamOpt{lr},
                                                train, rng);
              return py::make_tuple(res.theta, res.mse_trace);
          },
          py::arg("model"), py::arg("xs"), py::arg("ys"), py::arg("lr") = 0.15,
          py::arg("iterations") = 200, py::arg("batch") = 25, py::arg("seed") = 0,
          "Adam regression on Re f; returns (theta, mse_trace)");
    m.def("train_qnn_regression",
          [](const CircuitSpec& circuit, const CMat& observable, const RVec& xs, const RVec& ys,
             double lr, int iterations, int batch, uint64_t seed) {
              RngStream rng(seed);
              TrainConfig train;
              train.iterations = iterations;
              train.batch_size = batch;
              const RMat x_mat = xs;
              const auto res = train_regression(qnn_predictor(circuit, observable), x_mat, ys,
                                                AdamOpt{lr}, train, rng);
              return py::make_tuple(res.theta, res.mse_trace);
          },
          py::arg("circuit"), py::arg("observable"), py::arg("xs"), py::arg("ys"),
          py::arg("lr") = 0.15, py::arg("iterations") = 200, py::arg("batch") = 25,
          py::arg("seed") = 0);
    m.def("random_parameters",
          [](int count, uint64_t seed) {
              RngStream rng(seed);
              return random_parameters(count, rng);
          },
          py::arg("count"), py::arg("seed"));
}
