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

#include <compare>
#include <map>
#include <vector>

#include "dqc1lab/model.hpp"

namespace dqc1lab {

/// Linear form omega(x) = sum_j (halves[j] / 2) x_j. Frequencies are exact
/// half-integers per feature, stored as integer numerators so deduplication
/// is exact rather than float-tolerant.
struct FrequencyVector {
    std::vector<int> halves;

    double value_at(std::span<const double> x) const;

    auto operator<=>(const FrequencyVector&) const = default;
};

struct Spectrum {
    std::vector<FrequencyVector> frequencies;            // sorted support
    std::map<FrequencyVector, Complex> coefficients;     // filled by extraction
};

inline constexpr double kAmplitudeFloor = 1e-9;

/// All distinct frequency vectors reachable by the product-rotation embedding
/// layers of the circuit (layer-by-layer Minkowski sums with exact dedup).
/// Rejects circuits containing ZZ feature maps.
std::vector<FrequencyVector> enumerate_frequencies(const CircuitSpec& spec);

enum class ModelKind { Dqc1, Dqc1DataEncoded, Qnn };

/// Spectrum-cardinality upper bound: 2^{nL} for the trace model, 2^{n(L+2)}
/// with data-encoded measurements, 2^{2n(L-1)} for the QNN baseline.
uint64_t cardinality_bound(int n, int layers, ModelKind kind);

/// Samples the model on an equispaced grid over one period of the chosen
/// feature (4 pi when any half-integer frequency is present, else 2 pi; other
/// features held at base_x) and extracts coefficients by discrete Fourier
/// transform. The grid size is the next power of two at or above four times
/// the candidate frequency count. Support keeps amplitudes above floor.
Spectrum extract_coefficients_dft(const ModelConfig& model, std::span<const double> theta,
                                  int feature_index, std::vector<double> base_x = {},
                                  double floor = kAmplitudeFloor);

/// Exact coefficients by path enumeration over the diagonal-index choices of
/// every embedding layer, accumulating trainable-block matrix elements
/// (trailing block folded into the first); normalized by 2^n.
/// Guarded to n * L <= 12.
Spectrum coefficients_direct(const ModelConfig& model, std::span<const double> theta,
                             double floor = kAmplitudeFloor);

struct ConcentrationReport {
    int n = 0;
    long samples = 0;
    double mean_re = 0.0;
    double mean_im = 0.0;
    double var_re = 0.0;
    double var_im = 0.0;
    double scaled_var_re = 0.0;  // 4^n Var[Re f]
    double scaled_var_im = 0.0;
};

/// Draws of f = tr(U)/2^n for Haar-random U.
std::vector<Complex> haar_trace_samples(int n, long samples, RngStream stream);

ConcentrationReport report_from_samples(int n, std::span<const Complex> values);

/// Haar study of f = tr(U)/2^n: per qubit count, draws `samples` unitaries
/// from child stream rng.child(n) and reports moments and 4^n-scaled
/// variances.
std::vector<ConcentrationReport> concentration_study(const std::vector<int>& n_range,
                                                     long samples, RngStream& rng);

/// 4 exp(-t^2 / 2^{n+1}): tail bound for |tr(U) - E tr(U)| >= t.
double hoeffding_bound(int n, double t);

/// var / eps^2: tail bound for |f| >= eps given Var[f] = var.
double chebyshev_bound(double var, double eps);

/// min(1, p), the reporting clamp for bound values.
double clamped_probability(double p);

/// Least-squares residual, in the sum/(2N) convention, of ys against the trig
/// span {1, cos kx, sin kx : k <= max_frequency} on the given grid. Lower
/// bound for any model whose spectrum lives inside that span.
double fourier_projection_residual(std::span<const double> xs, std::span<const double> ys,
                                   int max_frequency);

}  // namespace dqc1lab
