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
#include "dqc1lab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "dqc1lab/random_matrix.hpp"

namespace dqc1lab {

namespace {

constexpr Complex kImag(0.0, 1.0);
constexpr uint64_t kEnumerationGuard = 1ULL << 20;

// Distinct frequency contributions of one product-rotation layer, one vector
// per diagonal slot value (deduplicated).
std::set<std::vector<int>> layer_contributions(const EmbeddingLayer& layer, int feature_dim) {
    if (layer.kind != EmbeddingLayer::Kind::ProductRotation) {
        throw std::invalid_argument(
            "enumerate_frequencies: ZZ feature maps have no product-rotation phase structure");
    }
    std::set<std::vector<int>> out;
    const uint64_t dim = 1ULL << layer.n;
    for (uint64_t b = 0; b < dim; ++b) {
        std::vector<int> halves(static_cast<size_t>(feature_dim), 0);
        for (int q = 0; q < layer.n; ++q) {
            // phase -(1/2) sum_q s_q(b) x_slot contributes -s_q(b) halves.
            halves[static_cast<size_t>(layer.slots[static_cast<size_t>(q)])] +=
                bit_of_qubit(b, q, layer.n) ? 1 : -1;
        }
        out.insert(std::move(halves));
    }
    return out;
}

std::set<std::vector<int>> minkowski_sum(const std::set<std::vector<int>>& a,
                                         const std::set<std::vector<int>>& b) {
    if (a.size() * b.size() > kEnumerationGuard) {
        throw std::invalid_argument("enumerate_frequencies: spectrum too large to enumerate");
    }
    std::set<std::vector<int>> out;
    for (const auto& va : a) {
        for (const auto& vb : b) {
            std::vector<int> sum(va.size());
            for (size_t j = 0; j < va.size(); ++j) sum[j] = va[j] + vb[j];
            out.insert(std::move(sum));
        }
    }
    return out;
}

std::set<std::vector<int>> circuit_frequency_set(const CircuitSpec& spec) {
    std::set<std::vector<int>> acc;
    acc.insert(std::vector<int>(static_cast<size_t>(spec.feature_dim()), 0));
    for (const auto& block : spec.blocks()) {
        if (const auto* layer = std::get_if<EmbeddingLayer>(&block)) {
            acc = minkowski_sum(acc, layer_contributions(*layer, spec.feature_dim()));
        }
    }
    return acc;
}

// Frequencies of tr(M(x) U): the encoder enters once daggered and once plain,
// so its contribution is the difference set of its own spectrum.
std::set<std::vector<int>> model_frequency_set(const ModelConfig& model) {
    std::set<std::vector<int>> acc = circuit_frequency_set(model.circuit);
    if (const auto* de = std::get_if<DataEncodedMeasurement>(&model.measurement)) {
        const auto enc = circuit_frequency_set(de->encoder);
        std::set<std::vector<int>> diff;
        for (const auto& a : enc) {
            for (const auto& b : enc) {
                std::vector<int> d(a.size());
                for (size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
                diff.insert(std::move(d));
            }
        }
        acc = minkowski_sum(acc, diff);
    }
    return acc;
}

uint64_t next_pow2(uint64_t v) {
    uint64_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

// Unitary B_l with V_l = B_l exp(i D_l) B_l^dag: the per-qubit basis change
// that diagonalizes the layer's rotation axis.
CMat layer_basis_change(const EmbeddingLayer& layer) {
    Eigen::Matrix2cd b;
    const double inv = 1.0 / std::numbers::sqrt2;
    switch (layer.axis) {
        case Axis::X:
            b << inv, inv, inv, -inv;  // H
            break;
        case Axis::Y: {
            Eigen::Matrix2cd h, s;
            h << inv, inv, inv, -inv;
            s << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 1);
            b = s * h;  // S H diagonalizes sigma_y
            break;
        }
        case Axis::Z:
            b = Eigen::Matrix2cd::Identity();
            break;
    }
    CMat out = CMat(b);
    for (int q = 1; q < layer.n; ++q) out = kron(out, CMat(b));
    return out;
}

}  // namespace

double FrequencyVector::value_at(std::span<const double> x) const {
    double v = 0.0;
    for (size_t j = 0; j < halves.size(); ++j) {
        v += 0.5 * static_cast<double>(halves[j]) * x[j];
    }
    return v;
}

std::vector<FrequencyVector> enumerate_frequencies(const CircuitSpec& spec) {
    std::vector<FrequencyVector> out;
    for (auto& halves : circuit_frequency_set(spec)) {
        out.push_back(FrequencyVector{halves});
    }
    std::sort(out.begin(), out.end());
    return out;
}

uint64_t cardinality_bound(int n, int layers, ModelKind kind) {
    if (n < 1 || layers < 1) throw std::invalid_argument("cardinality_bound: need n, L >= 1");
    int64_t exponent = 0;
    switch (kind) {
        case ModelKind::Dqc1: exponent = static_cast<int64_t>(n) * layers; break;
        case ModelKind::Dqc1DataEncoded: exponent = static_cast<int64_t>(n) * (layers + 2); break;
        case ModelKind::Qnn: exponent = 2LL * n * (layers - 1); break;
    }
    if (exponent > 63) throw std::invalid_argument("cardinality_bound: bound exceeds 2^63");
    return 1ULL << exponent;
}

Spectrum extract_coefficients_dft(const ModelConfig& model, std::span<const double> theta,
                                  int feature_index, std::vector<double> base_x, double floor) {
    const int d = model.circuit.feature_dim();
    if (feature_index < 0 || feature_index >= d) {
        throw std::invalid_argument("extract_coefficients_dft: feature index out of range");
    }
    if (base_x.empty()) base_x.assign(static_cast<size_t>(d), 0.0);
    if (static_cast<int>(base_x.size()) != d) {
        throw std::invalid_argument("extract_coefficients_dft: base point size mismatch");
    }

    // Candidate frequencies along the chosen axis, in halves.
    std::set<int> axis;
    for (const auto& halves : model_frequency_set(model)) {
        axis.insert(halves[static_cast<size_t>(feature_index)]);
    }
    const bool has_half_integer =
        std::any_of(axis.begin(), axis.end(), [](int h) { return h % 2 != 0; });

    // Integer DFT modes after the substitution x -> 2x' when half-integers
    // are present (period 4 pi), plain frequencies otherwise (period 2 pi).
    std::vector<int> modes;
    int max_mode = 0;
    for (int h : axis) {
        const int m = has_half_integer ? h : h / 2;
        modes.push_back(m);
        max_mode = std::max(max_mode, std::abs(m));
    }
    const uint64_t grid = next_pow2(std::max<uint64_t>(4 * axis.size(),
                                                       2 * static_cast<uint64_t>(max_mode) + 2));
    const double period = has_half_integer ? 4.0 * std::numbers::pi : 2.0 * std::numbers::pi;

    std::vector<Complex> samples(grid);
    std::vector<double> x(base_x);
    for (uint64_t j = 0; j < grid; ++j) {
        x[static_cast<size_t>(feature_index)] =
            base_x[static_cast<size_t>(feature_index)] +
            period * static_cast<double>(j) / static_cast<double>(grid);
        samples[j] = model_value(model, x, theta);
    }

    Spectrum spectrum;
    auto mode_it = modes.begin();
    for (int h : axis) {
        const int m = *mode_it++;
        Complex c(0.0, 0.0);
        for (uint64_t j = 0; j < grid; ++j) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) *
                                 static_cast<double>(j) / static_cast<double>(grid);
            c += samples[j] * std::exp(kImag * angle);
        }
        c /= static_cast<double>(grid);
        FrequencyVector freq;
        freq.halves.assign(static_cast<size_t>(d), 0);
        freq.halves[static_cast<size_t>(feature_index)] = h;
        // Sampling started at the base point; shift the coefficient back so
        // it refers to absolute feature values.
        c *= std::exp(-kImag * (0.5 * h * base_x[static_cast<size_t>(feature_index)]));
        spectrum.coefficients[freq] = c;
        if (std::abs(c) > floor) spectrum.frequencies.push_back(freq);
    }
    std::sort(spectrum.frequencies.begin(), spectrum.frequencies.end());
    return spectrum;
}

Spectrum coefficients_direct(const ModelConfig& model, std::span<const double> theta,
                             double floor) {
    if (!std::holds_alternative<SignalOnly>(model.measurement)) {
        throw std::invalid_argument("coefficients_direct: signal-only trace models only");
    }
    const int n = model.circuit.n();
    const auto dim = static_cast<uint64_t>(model.circuit.dim());

    // Collapse the block sequence into alternating (W_l, V_l) pairs: merge
    // consecutive trainables, insert identity W between adjacent embeddings,
    // fold a trailing trainable into W_1 from the left.
    std::vector<CMat> w_blocks;
    std::vector<const EmbeddingLayer*> layers;
    CMat pending = identity(model.circuit.dim());
    bool have_pending = false;
    for (const auto& block : model.circuit.blocks()) {
        if (const auto* trainable = std::get_if<TrainableBlock>(&block)) {
            CMat m = identity(model.circuit.dim());
            for (auto it = trainable->ops.rbegin(); it != trainable->ops.rend(); ++it) {
                apply_left(*it, theta, n, m);
            }
            pending = have_pending ? CMat(pending * m) : m;
            have_pending = true;
        } else {
            const auto& layer = std::get<EmbeddingLayer>(block);
            if (layer.kind != EmbeddingLayer::Kind::ProductRotation) {
                throw std::invalid_argument("coefficients_direct: product-rotation layers only");
            }
            w_blocks.push_back(have_pending ? pending : identity(model.circuit.dim()));
            layers.push_back(&layer);
            have_pending = false;
        }
    }
    const int L = static_cast<int>(layers.size());
    Spectrum spectrum;
    if (L == 0) {
        const CMat total = have_pending ? pending : identity(model.circuit.dim());
        FrequencyVector zero;
        zero.halves.assign(static_cast<size_t>(model.circuit.feature_dim()), 0);
        const Complex c = total.trace() / static_cast<double>(dim);
        spectrum.coefficients[zero] = c;
        if (std::abs(c) > floor) spectrum.frequencies.push_back(zero);
        return spectrum;
    }
    if (have_pending) {
        w_blocks[0] = pending * w_blocks[0];  // trailing block, folded by cyclicity
    }
    if (static_cast<int64_t>(n) * L > 12) {
        throw std::invalid_argument("coefficients_direct: n*L exceeds the enumeration guard (12)");
    }

    // Absorb the diagonalizing basis changes into the trainable blocks:
    // tr(... W_l B_l D_l B_l^dag ...) = tr(... (B_{l-1}^dag W_l B_l) D_l ...)
    // cyclically, with B_0 = B_L.
    {
        std::vector<CMat> basis(static_cast<size_t>(L));
        for (int l = 0; l < L; ++l) basis[static_cast<size_t>(l)] = layer_basis_change(*layers[static_cast<size_t>(l)]);
        for (int l = 0; l < L; ++l) {
            const CMat& left = basis[static_cast<size_t>((l - 1 + L) % L)];
            w_blocks[static_cast<size_t>(l)] =
                left.adjoint() * w_blocks[static_cast<size_t>(l)] * basis[static_cast<size_t>(l)];
        }
    }

    // Per-layer half-integer contribution of each diagonal slot.
    const int d = model.circuit.feature_dim();
    std::vector<std::vector<std::vector<int>>> slot_halves(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) {
        auto& per_slot = slot_halves[static_cast<size_t>(l)];
        per_slot.resize(dim);
        for (uint64_t b = 0; b < dim; ++b) {
            std::vector<int> halves(static_cast<size_t>(d), 0);
            for (int q = 0; q < layers[static_cast<size_t>(l)]->n; ++q) {
                halves[static_cast<size_t>(
                    layers[static_cast<size_t>(l)]->slots[static_cast<size_t>(q)])] +=
                    bit_of_qubit(b, q, layers[static_cast<size_t>(l)]->n) ? 1 : -1;
            }
            per_slot[b] = std::move(halves);
        }
    }

    // Walk every path (k_1, ..., k_L); coefficient is
    // (W_1)_{k_L k_1} (W_2)_{k_1 k_2} ... (W_L)_{k_{L-1} k_L}.
    std::vector<uint64_t> path(static_cast<size_t>(L), 0);
    const double norm = static_cast<double>(dim);
    while (true) {
        Complex coeff(1.0, 0.0);
        for (int l = 1; l < L; ++l) {
            coeff *= w_blocks[static_cast<size_t>(l)](
                static_cast<Eigen::Index>(path[static_cast<size_t>(l) - 1]),
                static_cast<Eigen::Index>(path[static_cast<size_t>(l)]));
        }
        coeff *= w_blocks[0](static_cast<Eigen::Index>(path[static_cast<size_t>(L) - 1]),
                             static_cast<Eigen::Index>(path[0]));
        FrequencyVector freq;
        freq.halves.assign(static_cast<size_t>(d), 0);
        for (int l = 0; l < L; ++l) {
            const auto& halves = slot_halves[static_cast<size_t>(l)][path[static_cast<size_t>(l)]];
            for (int j = 0; j < d; ++j) freq.halves[static_cast<size_t>(j)] += halves[static_cast<size_t>(j)];
        }
        spectrum.coefficients[freq] += coeff / norm;

        int l = L - 1;
        while (l >= 0 && ++path[static_cast<size_t>(l)] == dim) {
            path[static_cast<size_t>(l)] = 0;
            --l;
        }
        if (l < 0) break;
    }

    for (const auto& [freq, c] : spectrum.coefficients) {
        if (std::abs(c) > floor) spectrum.frequencies.push_back(freq);
    }
    std::sort(spectrum.frequencies.begin(), spectrum.frequencies.end());
    return spectrum;
}

std::vector<Complex> haar_trace_samples(int n, long samples, RngStream stream) {
    std::vector<Complex> values(static_cast<size_t>(samples));
    for (long s = 0; s < samples; ++s) {
        values[static_cast<size_t>(s)] = normalized_trace(haar_unitary(n, stream));
    }
    return values;
}

ConcentrationReport report_from_samples(int n, std::span<const Complex> values) {
    if (values.size() < 2) throw std::invalid_argument("report_from_samples: need >= 2 samples");
    double sum_re = 0.0, sum_im = 0.0, sum_re2 = 0.0, sum_im2 = 0.0;
    for (const Complex& f : values) {
        sum_re += f.real();
        sum_im += f.imag();
        sum_re2 += f.real() * f.real();
        sum_im2 += f.imag() * f.imag();
    }
    const double ns = static_cast<double>(values.size());
    ConcentrationReport r;
    r.n = n;
    r.samples = static_cast<long>(values.size());
    r.mean_re = sum_re / ns;
    r.mean_im = sum_im / ns;
    r.var_re = (sum_re2 - ns * r.mean_re * r.mean_re) / (ns - 1.0);
    r.var_im = (sum_im2 - ns * r.mean_im * r.mean_im) / (ns - 1.0);
    const double scale = std::pow(4.0, n);
    r.scaled_var_re = scale * r.var_re;
    r.scaled_var_im = scale * r.var_im;
    return r;
}

std::vector<ConcentrationReport> concentration_study(const std::vector<int>& n_range,
                                                     long samples, RngStream& rng) {
    if (samples < 100) throw std::invalid_argument("concentration_study: need samples >= 100");
    std::vector<ConcentrationReport> reports;
    for (const int n : n_range) {
        const auto values = haar_trace_samples(n, samples, rng.child(static_cast<uint64_t>(n)));
        reports.push_back(report_from_samples(n, values));
    }
    return reports;
}

double hoeffding_bound(int n, double t) {
    if (t <= 0.0) throw std::invalid_argument("hoeffding_bound: need t > 0");
    return 4.0 * std::exp(-t * t / std::pow(2.0, n + 1));
}

double chebyshev_bound(double var, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("chebyshev_bound: need eps > 0");
    if (var < 0.0) throw std::invalid_argument("chebyshev_bound: variance must be >= 0");
    return var / (eps * eps);
}

double clamped_probability(double p) { return std::min(1.0, p); }

double fourier_projection_residual(std::span<const double> xs, std::span<const double> ys,
                                   int max_frequency) {
    if (xs.size() != ys.size() || xs.empty()) {
        throw std::invalid_argument("fourier_projection_residual: bad grid");
    }
    const auto n = static_cast<Eigen::Index>(xs.size());
    const Eigen::Index cols = 2 * max_frequency + 1;
    RMat design(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (int k = 1; k <= max_frequency; ++k) {
            design(i, 2 * k - 1) = std::cos(k * xs[static_cast<size_t>(i)]);
            design(i, 2 * k) = std::sin(k * xs[static_cast<size_t>(i)]);
        }
    }
    RVec y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = ys[static_cast<size_t>(i)];
    const RVec coef = (design.transpose() * design).ldlt().solve(design.transpose() * y);
    const RVec resid = y - design * coef;
    return resid.squaredNorm() / (2.0 * static_cast<double>(n));
}

}  // namespace dqc1lab
