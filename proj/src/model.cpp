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
#include "dqc1lab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace dqc1lab {

namespace {

constexpr Complex kImag(0.0, 1.0);

// f = tr(Q U) / norm; Q and norm depend on working register and measurement.
struct WeightedTrace {
    CMat weight;
    double norm = 1.0;
};

WeightedTrace trace_weight(const ModelConfig& model, std::span<const double> x) {
    const auto dim = model.circuit.dim();
    if (std::holds_alternative<SignalOnly>(model.measurement)) {
        if (std::holds_alternative<MaximallyMixed>(model.working)) {
            return {identity(dim), static_cast<double>(dim)};
        }
        return {working_density(model), 1.0};
    }
    if (const auto* st = std::get_if<SignalTensor>(&model.measurement)) {
        return {st->observable, static_cast<double>(dim)};
    }
    const auto& de = std::get<DataEncodedMeasurement>(model.measurement);
    const std::vector<double> no_theta;
    const CMat enc = de.encoder.compile_unitary(x, no_theta);
    return {enc.adjoint() * de.observable * enc, static_cast<double>(dim)};
}

Complex weighted_trace_value(const ModelConfig& model, std::span<const double> x,
                             std::span<const double> theta) {
    const WeightedTrace wt = trace_weight(model, x);
    const CMat u = model.circuit.compile_unitary(x, theta);
    return trace_product(wt.weight, u) / wt.norm;
}

struct SlotLocation {
    int factor_index = -1;
    RotationGate gate{PauliString("I")};
};

SlotLocation locate_slot(const std::vector<GateOp>& factors, int slot) {
    for (size_t i = 0; i < factors.size(); ++i) {
        if (const auto* rot = std::get_if<RotationGate>(&factors[i])) {
            if (rot->slot == slot) return {static_cast<int>(i), *rot};
        }
    }
    throw std::invalid_argument("gradient: slot is not bound to a generator");
}

// C = F_pos .. F_m * Q * F_1 .. F_{pos-1}, the cyclically reordered remainder
// once the derivative has been moved in front of factor `pos`.
CMat cyclic_remainder(const std::vector<GateOp>& factors, std::span<const double> theta, int n,
                      const CMat& weight, int pos) {
    CMat m = weight;
    for (int k = 0; k < pos; ++k) apply_right(factors[static_cast<size_t>(k)], theta, n, m);
    for (int k = static_cast<int>(factors.size()) - 1; k >= pos; --k) {
        apply_left(factors[static_cast<size_t>(k)], theta, n, m);
    }
    return m;
}

Complex insertion_value(const RotationGate& gate, const CMat& remainder, double norm) {
    Complex term = gate.pauli_coeff * trace_pauli_product(gate.generator, remainder);
    term += gate.id_coeff * remainder.trace();
    return -kImag * term / norm;
}

ShotEstimate sample_signal_shots(Complex exact, double alpha, long shots, RngStream& rng) {
    if (shots < 1) throw std::invalid_argument("evaluate_shots: need shots >= 1");
    const double sx = alpha * exact.real();
    const double sy = alpha * exact.imag();
    if (std::abs(sx) > 1.0 + 1e-9 || std::abs(sy) > 1.0 + 1e-9) {
        throw std::logic_error("evaluate_shots: expectation out of range");
    }
    auto sample_mean = [&](double expectation) {
        const double p_plus = std::clamp((1.0 + expectation) / 2.0, 0.0, 1.0);
        long plus = 0;
        for (long s = 0; s < shots; ++s) {
            if (rng.uniform() < p_plus) ++plus;
        }
        return (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) /
               static_cast<double>(shots);
    };
    const double mx = sample_mean(sx);
    const double my = sample_mean(sy);
    ShotEstimate est;
    est.value = Complex(mx, my) / alpha;
    const double var = std::max(0.0, 1.0 - mx * mx) + std::max(0.0, 1.0 - my * my);
    est.stderr = std::sqrt(var / static_cast<double>(shots)) / alpha;
    return est;
}

}  // namespace

void ModelConfig::validate() const {
    if (n != circuit.n()) throw std::invalid_argument("ModelConfig: qubit count mismatch");
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("ModelConfig: alpha must lie in (0, 1]");
    }
    const auto dim = circuit.dim();
    if (const auto* thermal = std::get_if<ThermalState>(&working)) {
        if (thermal->hamiltonian.rows() != dim || !is_hermitian(thermal->hamiltonian, 1e-10)) {
            throw std::invalid_argument("ModelConfig: thermal Hamiltonian must be Hermitian on 2^n");
        }
        if (thermal->beta < 0.0) throw std::invalid_argument("ModelConfig: beta must be >= 0");
    } else if (const auto* explicit_state = std::get_if<ExplicitState>(&working)) {
        if (explicit_state->rho.rows() != dim || !is_density_matrix(explicit_state->rho, 1e-10)) {
            throw std::invalid_argument("ModelConfig: explicit working state is not a density matrix");
        }
    }
    if (const auto* st = std::get_if<SignalTensor>(&measurement)) {
        if (st->observable.rows() != dim || !is_hermitian(st->observable, 1e-10)) {
            throw std::invalid_argument("ModelConfig: observable must be Hermitian on 2^n");
        }
    } else if (const auto* de = std::get_if<DataEncodedMeasurement>(&measurement)) {
        if (de->observable.rows() != dim || !is_hermitian(de->observable, 1e-10)) {
            throw std::invalid_argument("ModelConfig: observable must be Hermitian on 2^n");
        }
        if (de->encoder.n() != n || de->encoder.param_count() != 0 ||
            de->encoder.feature_dim() != circuit.feature_dim()) {
            throw std::invalid_argument("ModelConfig: encoder must be a parameter-free circuit on n");
        }
    }
}

ModelConfig trace_model(CircuitSpec circuit, double alpha) {
    ModelConfig model;
    model.n = circuit.n();
    model.alpha = alpha;
    model.circuit = std::move(circuit);
    return model;
}

CMat thermal_density(const CMat& hamiltonian, double beta) {
    if (!is_hermitian(hamiltonian, 1e-10)) {
        throw std::invalid_argument("thermal_density: Hamiltonian must be Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMat> solver(hamiltonian);
    const RVec evals = solver.eigenvalues();
    // Shift by the minimum so the exponentials stay bounded for large beta.
    const double shift = evals.minCoeff();
    RVec weights(evals.size());
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        weights(i) = std::exp(-beta * (evals(i) - shift));
    }
    weights /= weights.sum();
    return solver.eigenvectors() * weights.asDiagonal().toDenseMatrix().cast<Complex>() *
           solver.eigenvectors().adjoint();
}

CMat working_density(const ModelConfig& model) {
    const auto dim = model.circuit.dim();
    if (std::holds_alternative<MaximallyMixed>(model.working)) {
        return CMat::Identity(dim, dim) / static_cast<double>(dim);
    }
    if (const auto* thermal = std::get_if<ThermalState>(&model.working)) {
        return thermal_density(thermal->hamiltonian, thermal->beta);
    }
    return std::get<ExplicitState>(model.working).rho;
}

JointState joint_state_oracle(const ModelConfig& model, std::span<const double> x,
                              std::span<const double> theta) {
    model.validate();
    const CMat u = model.circuit.compile_unitary(x, theta);
    const CMat rho_w = working_density(model);
    const auto dw = rho_w.rows();

    // Post-protocol state of (signal (x) working) after the Hadamard and the
    // controlled unitary. The |1><1| block carries U rho_w U^dag; it collapses
    // to rho_w for the maximally mixed register. The off-diagonal blocks are
    // the ones the signal-qubit observables read.
    CMat rho = CMat::Zero(2 * dw, 2 * dw);
    rho.topLeftCorner(dw, dw) = rho_w / 2.0;
    rho.bottomRightCorner(dw, dw) = (u * rho_w * u.adjoint()) / 2.0;
    rho.topRightCorner(dw, dw) = (model.alpha / 2.0) * (rho_w * u.adjoint());
    rho.bottomLeftCorner(dw, dw) = (model.alpha / 2.0) * (u * rho_w);

    const CMat sx_obs = kron(pauli_matrix('X'), identity(dw));
    const CMat sy_obs = kron(pauli_matrix('Y'), identity(dw));
    JointState out;
    out.sx = trace_product(sx_obs, rho).real();
    out.sy = trace_product(sy_obs, rho).real();
    out.rho = std::move(rho);
    return out;
}

Complex evaluate_exact(const ModelConfig& model, std::span<const double> x,
                       std::span<const double> theta) {
    if (!std::holds_alternative<SignalOnly>(model.measurement)) {
        throw std::invalid_argument("evaluate_exact: use evaluate_multimeasure for joint observables");
    }
    if (!std::holds_alternative<MaximallyMixed>(model.working)) {
        throw std::invalid_argument("evaluate_exact: use evaluate_thermal for non-mixed registers");
    }
    return normalized_trace(model.circuit.compile_unitary(x, theta));
}

Complex evaluate_thermal(const ModelConfig& model, std::span<const double> x,
                         std::span<const double> theta) {
    if (!std::holds_alternative<SignalOnly>(model.measurement)) {
        throw std::invalid_argument("evaluate_thermal: signal-only measurement required");
    }
    const CMat rho_w = working_density(model);
    const CMat u = model.circuit.compile_unitary(x, theta);
    return trace_product(rho_w, u);
}

Complex evaluate_multimeasure(const ModelConfig& model, std::span<const double> x,
                              std::span<const double> theta) {
    if (std::holds_alternative<SignalOnly>(model.measurement)) {
        throw std::invalid_argument("evaluate_multimeasure: model has no working-register observable");
    }
    const CMat* m = nullptr;
    if (const auto* st = std::get_if<SignalTensor>(&model.measurement)) {
        m = &st->observable;
    } else {
        m = &std::get<DataEncodedMeasurement>(model.measurement).observable;
    }
    if (!is_hermitian(*m, 1e-10)) {
        throw std::invalid_argument("evaluate_multimeasure: observable must be Hermitian");
    }
    return weighted_trace_value(model, x, theta);
}

Complex model_value(const ModelConfig& model, std::span<const double> x,
                    std::span<const double> theta) {
    return weighted_trace_value(model, x, theta);
}

double model_output(const ModelConfig& model, std::span<const double> x,
                    std::span<const double> theta) {
    const Complex f = model_value(model, x, theta);
    if (const auto* sig = std::get_if<SignalOnly>(&model.measurement)) {
        if (sig->basis == Axis::Y) return f.imag();
    }
    return f.real();
}

ShotEstimate evaluate_shots(const ModelConfig& model, std::span<const double> x,
                            std::span<const double> theta, const ShotPlan& plan,
                            RngStream& rng) {
    if (!std::holds_alternative<SignalOnly>(model.measurement)) {
        throw std::invalid_argument("evaluate_shots: shot protocol reads the signal qubit only");
    }
    return sample_signal_shots(model_value(model, x, theta), model.alpha, plan.shots, rng);
}

long repetitions_needed(const ShotPlan& plan, double alpha) {
    if (!(plan.epsilon > 0.0 && plan.epsilon <= 1.0) || !(plan.delta > 0.0 && plan.delta <= 1.0) ||
        !(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("repetitions_needed: epsilon, delta, alpha must lie in (0, 1]");
    }
    const double reps = 2.0 * std::log(2.0 / plan.delta) / ((alpha * plan.epsilon) * (alpha * plan.epsilon));
    return static_cast<long>(std::ceil(reps));
}

Complex grad_insertion(const ModelConfig& model, std::span<const double> x,
                       std::span<const double> theta, int slot) {
    const WeightedTrace wt = trace_weight(model, x);
    const auto factors = model.circuit.factors(x);
    const SlotLocation loc = locate_slot(factors, slot);
    const CMat remainder =
        cyclic_remainder(factors, theta, model.circuit.n(), wt.weight, loc.factor_index);
    return insertion_value(loc.gate, remainder, wt.norm);
}

Complex grad_commuting(const ModelConfig& model, std::span<const double> x,
                       std::span<const double> theta, int slot) {
    // Locate the owning trainable block and the first factor of that block.
    int factor_pos = 0;
    const TrainableBlock* owner = nullptr;
    int block_start = -1;
    for (const auto& block : model.circuit.blocks()) {
        if (const auto* trainable = std::get_if<TrainableBlock>(&block)) {
            bool holds = false;
            for (const auto& op : trainable->ops) {
                if (const auto* rot = std::get_if<RotationGate>(&op); rot && rot->slot == slot) {
                    holds = true;
                }
            }
            if (holds) {
                owner = trainable;
                block_start = factor_pos;
                break;
            }
            factor_pos += static_cast<int>(trainable->ops.size());
        } else {
            // Embedding layers expand to one factor per qubit (product
            // rotation) or (1 + n) factors per repetition (ZZ map).
            const auto& layer = std::get<EmbeddingLayer>(block);
            factor_pos += layer.kind == EmbeddingLayer::Kind::ProductRotation
                              ? layer.n
                              : layer.repetitions * (1 + layer.n);
        }
    }
    if (owner == nullptr) throw std::invalid_argument("grad_commuting: slot not found");

    const RotationGate* target = nullptr;
    for (const auto& op : owner->ops) {
        const auto* rot = std::get_if<RotationGate>(&op);
        if (rot == nullptr) {
            throw std::invalid_argument("grad_commuting: block contains fixed gates");
        }
        if (rot->id_coeff != 0.0) {
            throw std::invalid_argument("grad_commuting: generators must be pure Pauli strings");
        }
        if (rot->slot == slot) target = rot;
    }
    for (size_t i = 0; i < owner->ops.size(); ++i) {
        for (size_t j = i + 1; j < owner->ops.size(); ++j) {
            const auto& a = std::get<RotationGate>(owner->ops[i]).generator;
            const auto& b = std::get<RotationGate>(owner->ops[j]).generator;
            if (!a.commutes_with(b)) {
                throw std::invalid_argument("grad_commuting: non-commuting generators");
            }
        }
    }

    const WeightedTrace wt = trace_weight(model, x);
    const auto factors = model.circuit.factors(x);
    const CMat remainder =
        cyclic_remainder(factors, theta, model.circuit.n(), wt.weight, block_start);
    return insertion_value(*target, remainder, wt.norm);
}

Complex grad_fd(const ModelConfig& model, std::span<const double> x,
                std::span<const double> theta, int slot, double h) {
    if (h <= 0.0) throw std::invalid_argument("grad_fd: step must be positive");
    std::vector<double> shifted(theta.begin(), theta.end());
    shifted[static_cast<size_t>(slot)] += h;
    const Complex plus = model_value(model, x, shifted);
    shifted[static_cast<size_t>(slot)] -= 2.0 * h;
    const Complex minus = model_value(model, x, shifted);
    return (plus - minus) / (2.0 * h);
}

std::vector<Complex> gradient(const ModelConfig& model, std::span<const double> x,
                              std::span<const double> theta) {
    return value_and_gradient(model, x, theta).grad;
}

ValueGradient value_and_gradient(const ModelConfig& model, std::span<const double> x,
                                 std::span<const double> theta) {
    const WeightedTrace wt = trace_weight(model, x);
    const auto factors = model.circuit.factors(x);
    const int n = model.circuit.n();
    const auto m = static_cast<int>(factors.size());

    // prefix[k] = Q * F_1 .. F_k (scratch reused across calls).
    thread_local std::vector<CMat> prefix;
    prefix.resize(static_cast<size_t>(m) + 1);
    prefix[0] = wt.weight;
    for (int k = 0; k < m; ++k) {
        prefix[static_cast<size_t>(k) + 1] = prefix[static_cast<size_t>(k)];
        apply_right(factors[static_cast<size_t>(k)], theta, n, prefix[static_cast<size_t>(k) + 1]);
    }

    ValueGradient out;
    out.value = prefix[static_cast<size_t>(m)].trace() / wt.norm;
    out.grad.assign(static_cast<size_t>(model.circuit.param_count()), Complex(0.0, 0.0));
    // suffix = F_k .. F_m, built backwards; d f / d theta_slot reads
    // tr(G suffix prefix[k-1]) without materializing their product.
    CMat suffix = identity(model.circuit.dim());
    for (int k = m - 1; k >= 0; --k) {
        apply_left(factors[static_cast<size_t>(k)], theta, n, suffix);
        if (const auto* rot = std::get_if<RotationGate>(&factors[static_cast<size_t>(k)])) {
            Complex term = rot->pauli_coeff *
                           trace_pauli_sandwich(rot->generator, suffix, prefix[static_cast<size_t>(k)]);
            if (rot->id_coeff != 0.0) {
                term += rot->id_coeff * trace_product(suffix, prefix[static_cast<size_t>(k)]);
            }
            out.grad[static_cast<size_t>(rot->slot)] = -kImag * term / wt.norm;
        }
    }
    return out;
}

ShotEstimate grad_shots(const ModelConfig& model, std::span<const double> x,
                        std::span<const double> theta, int slot, const ShotPlan& plan,
                        RngStream& rng) {
    if (!std::holds_alternative<SignalOnly>(model.measurement) ||
        !std::holds_alternative<MaximallyMixed>(model.working)) {
        throw std::invalid_argument("grad_shots: maximally mixed signal-only model required");
    }
    const auto factors = model.circuit.factors(x);
    const SlotLocation loc = locate_slot(factors, slot);
    if (loc.gate.id_coeff != 0.0) {
        throw std::invalid_argument("grad_shots: generator must be unitary (pure Pauli string)");
    }
    const int n = model.circuit.n();
    CMat inserted = cyclic_remainder(factors, theta, n, identity(model.circuit.dim()),
                                     loc.factor_index);
    // Unitary whose normalized trace carries the derivative.
    CMat u = loc.gate.generator.matrix() * inserted;
    const Complex exact = normalized_trace(u);
    ShotEstimate est = sample_signal_shots(exact, model.alpha, plan.shots, rng);
    est.value *= -kImag * loc.gate.pauli_coeff;
    est.stderr *= std::abs(loc.gate.pauli_coeff);
    return est;
}

namespace {

double qnn_value_from_factors(const std::vector<GateOp>& factors, int n, Eigen::Index dim,
                              const CMat& observable, std::span<const double> theta) {
    CVec psi = CVec::Zero(dim);
    psi(0) = Complex(1.0, 0.0);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        apply_vec(*it, theta, n, psi);
    }
    return (psi.adjoint() * observable * psi)(0, 0).real();
}

}  // namespace

double qnn_evaluate(const CircuitSpec& circuit, const CMat& observable,
                    std::span<const double> x, std::span<const double> theta) {
    if (!is_hermitian(observable, 1e-10)) {
        throw std::invalid_argument("qnn_evaluate: observable must be Hermitian");
    }
    if (static_cast<int>(theta.size()) != circuit.param_count()) {
        throw std::invalid_argument("qnn_evaluate: parameter slot count mismatch");
    }
    return qnn_value_from_factors(circuit.factors(x), circuit.n(), circuit.dim(), observable,
                                  theta);
}

std::vector<double> qnn_gradient_fd(const CircuitSpec& circuit, const CMat& observable,
                                    std::span<const double> x, std::span<const double> theta,
                                    double h) {
    const auto factors = circuit.factors(x);  // theta-independent, expanded once
    std::vector<double> shifted(theta.begin(), theta.end());
    std::vector<double> grad(static_cast<size_t>(circuit.param_count()), 0.0);
    for (size_t j = 0; j < grad.size(); ++j) {
        shifted[j] += h;
        const double plus =
            qnn_value_from_factors(factors, circuit.n(), circuit.dim(), observable, shifted);
        shifted[j] -= 2.0 * h;
        const double minus =
            qnn_value_from_factors(factors, circuit.n(), circuit.dim(), observable, shifted);
        shifted[j] += h;
        grad[j] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

Complex trace_product(const CMat& a, const CMat& b) {
    return (a.transpose().array() * b.array()).sum();
}

Complex trace_pauli_product(const PauliString& p, const CMat& m) {
    const uint64_t mask = p.flip_mask();
    Complex sum(0.0, 0.0);
    for (uint64_t k = 0; k < static_cast<uint64_t>(m.rows()); ++k) {
        sum += p.phase(k) * m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ mask));
    }
    return sum;
}

Complex trace_pauli_sandwich(const PauliString& p, const CMat& a, const CMat& b) {
    const uint64_t mask = p.flip_mask();
    const auto dim = static_cast<uint64_t>(a.rows());
    const Complex* adata = a.data();
    const Complex* bdata = b.data();
    Complex sum(0.0, 0.0);
    for (uint64_t k = 0; k < dim; ++k) {
        const Complex* bcol = bdata + (k ^ mask) * dim;
        Complex dot(0.0, 0.0);
        for (uint64_t j = 0; j < dim; ++j) {
            dot += adata[k + j * dim] * bcol[j];
        }
        sum += p.phase(k) * dot;
    }
    return sum;
}

}  // namespace dqc1lab
