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
#pragma once

#include <variant>
#include <vector>

#include "dqc1lab/circuit.hpp"
#include "dqc1lab/matrix.hpp"
#include "dqc1lab/rng.hpp"

namespace dqc1lab {

// Working register preparations.
struct MaximallyMixed {};
struct ThermalState {
    CMat hamiltonian;
    double beta = 0.0;
};
struct ExplicitState {
    CMat rho;
};
using WorkingState = std::variant<MaximallyMixed, ThermalState, ExplicitState>;

// Measurement configurations.
struct SignalOnly {
    Axis basis = Axis::X;  // X reads Re, Y reads Im
};
struct SignalTensor {
    CMat observable;  // Hermitian M measured jointly with the signal qubit
};
struct DataEncodedMeasurement {
    CMat observable;      // Hermitian M
    CircuitSpec encoder;  // parameter-free circuit; effective M(x) = U(x)^dag M U(x)
};
using Measurement = std::variant<SignalOnly, SignalTensor, DataEncodedMeasurement>;

/// One DQC1 model instance: signal qubit of polarization alpha controlling the
/// circuit on an n-qubit working register.
struct ModelConfig {
    int n = 1;
    double alpha = 1.0;
    CircuitSpec circuit;
    WorkingState working = MaximallyMixed{};
    Measurement measurement = SignalOnly{};

    void validate() const;
};

/// Convenience constructor for the common maximally-mixed signal-only model.
ModelConfig trace_model(CircuitSpec circuit, double alpha = 1.0);

/// exp(-beta H) / tr(exp(-beta H)).
CMat thermal_density(const CMat& hamiltonian, double beta);

/// Density matrix of the configured working register.
CMat working_density(const ModelConfig& model);

struct ShotPlan {
    long shots = 1;
    double epsilon = 0.1;
    double delta = 0.01;
};

struct JointState {
    double sx = 0.0;
    double sy = 0.0;
    CMat rho;  // full (2^{n+1})-dimensional protocol state
};

/// Builds the post-protocol state
///   rho = (1/2)(|0><0| (x) rho_w + |1><1| (x) U rho_w U^dag
///               + alpha(|0><1| (x) rho_w U^dag + |1><0| (x) U rho_w))
/// and reads the signal-qubit expectations by direct trace against the dense
/// observables. This is the reference path the fast evaluators are checked
/// against.
JointState joint_state_oracle(const ModelConfig& model, std::span<const double> x,
                              std::span<const double> theta);

/// tr(U(x, theta)) / 2^n; requires a signal-only, maximally mixed model.
Complex evaluate_exact(const ModelConfig& model, std::span<const double> x,
                       std::span<const double> theta);

/// tr(rho_w U(x, theta)) for thermal or explicit working registers (reduces to
/// evaluate_exact for the maximally mixed register).
Complex evaluate_thermal(const ModelConfig& model, std::span<const double> x,
                         std::span<const double> theta);

/// tr(M U(x, theta)) / 2^n; the data-encoded variant substitutes
/// M(x) = U_enc(x)^dag M U_enc(x).
Complex evaluate_multimeasure(const ModelConfig& model, std::span<const double> x,
                              std::span<const double> theta);

/// Dispatches to the evaluator matching the model's measurement and working
/// register.
Complex model_value(const ModelConfig& model, std::span<const double> x,
                    std::span<const double> theta);

/// Real prediction: Re of model_value (Im for a Y-basis signal measurement).
double model_output(const ModelConfig& model, std::span<const double> x,
                    std::span<const double> theta);

struct ShotEstimate {
    Complex value;
    double stderr = 0.0;
};

/// Simulates plan.shots +/-1 outcomes per signal basis with
/// P(+1) = (1 + <sigma>)/2, averages and divides by alpha. Unbiased for the
/// exact model value; reported stderr is the binomial standard error of the
/// complex estimate.
ShotEstimate evaluate_shots(const ModelConfig& model, std::span<const double> x,
                            std::span<const double> theta, const ShotPlan& plan,
                            RngStream& rng);

/// ceil(2 ln(2/delta) / (alpha epsilon)^2), the Hoeffding repetition count for
/// estimating both signal expectations within epsilon except with probability
/// delta.
long repetitions_needed(const ShotPlan& plan, double alpha);

/// Partial derivative of model_value with respect to one parameter slot via
/// generator insertion: -i tr(G_k * cyclic remainder) with the appropriate
/// normalization.
Complex grad_insertion(const ModelConfig& model, std::span<const double> x,
                       std::span<const double> theta, int slot);

/// Simplified derivative for blocks of mutually commuting Pauli generators:
/// the generator is inserted at the block boundary. Rejects blocks with fixed
/// gates or non-commuting generators.
Complex grad_commuting(const ModelConfig& model, std::span<const double> x,
                       std::span<const double> theta, int slot);

/// Central finite difference (f(theta + h e) - f(theta - h e)) / (2h).
Complex grad_fd(const ModelConfig& model, std::span<const double> x,
                std::span<const double> theta, int slot, double h = 1e-5);

/// Insertion-rule derivative for every slot at once, sharing prefix/suffix
/// products across slots.
std::vector<Complex> gradient(const ModelConfig& model, std::span<const double> x,
                              std::span<const double> theta);

struct ValueGradient {
    Complex value;
    std::vector<Complex> grad;
};

/// model_value plus the full insertion-rule gradient in one pass (the value
/// falls out of the gradient's prefix products for free).
ValueGradient value_and_gradient(const ModelConfig& model, std::span<const double> x,
                                 std::span<const double> theta);

/// Shot-sampled derivative: runs the DQC1 shot protocol on the circuit with
/// the (unitary) generator inserted. Requires a pure-Pauli generator and a
/// maximally mixed signal-only model.
ShotEstimate grad_shots(const ModelConfig& model, std::span<const double> x,
                        std::span<const double> theta, int slot, const ShotPlan& plan,
                        RngStream& rng);

/// <0|U^dag M U|0> by statevector application of the compiled circuit.
double qnn_evaluate(const CircuitSpec& circuit, const CMat& observable,
                    std::span<const double> x, std::span<const double> theta);

/// Central finite differences of qnn_evaluate over all slots.
std::vector<double> qnn_gradient_fd(const CircuitSpec& circuit, const CMat& observable,
                                    std::span<const double> x, std::span<const double> theta,
                                    double h = 1e-5);

// Shared trace kernels (O(dim^2)).
Complex trace_product(const CMat& a, const CMat& b);                      // tr(a b)
Complex trace_pauli_product(const PauliString& p, const CMat& m);         // tr(P m)
Complex trace_pauli_sandwich(const PauliString& p, const CMat& a, const CMat& b);  // tr(P a b)

}  // namespace dqc1lab
