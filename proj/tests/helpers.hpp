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

// Test-only oracles. Everything here is built from first principles (Taylor
// series, dense Kronecker assembly, Eigen products) so the checks stay
// independent of the structured kernels they validate.

#include <filesystem>
#include <vector>

#include "dqc1lab/matrix.hpp"
#include "dqc1lab/rng.hpp"

namespace dqc1lab::testing {

/// Matrix exponential by scaling-and-squaring on a Taylor series.
inline CMat expm(const CMat& a) {
    const double norm = max_abs(a) * static_cast<double>(a.rows());
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
    const CMat scaled = a / std::pow(2.0, squarings);
    CMat term = CMat::Identity(a.rows(), a.cols());
    CMat sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = CMat(term * scaled) / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = CMat(sum * sum);
    return sum;
}

inline CMat kron2(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline CMat dense_pauli(char letter) {
    CMat m(2, 2);
    switch (letter) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0); break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline CMat dense_pauli_string(const std::string& letters) {
    CMat out = dense_pauli(letters[0]);
    for (size_t q = 1; q < letters.size(); ++q) out = kron2(out, dense_pauli(letters[q]));
    return out;
}

/// I x .. x g x .. x I with g on qubit q (qubit 0 leftmost).
inline CMat embed_single(int n, int q, const CMat& g) {
    CMat out = q == 0 ? g : CMat(CMat::Identity(2, 2));
    for (int k = 1; k < n; ++k) out = kron2(out, k == q ? g : CMat(CMat::Identity(2, 2)));
    return out;
}

inline CMat dense_cnot(int n, int control, int target) {
    const auto dim = static_cast<Eigen::Index>(1LL << n);
    CMat out = CMat::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        const bool cset = (b >> (n - 1 - control)) & 1;
        const Eigen::Index dst = cset ? (b ^ (1LL << (n - 1 - target))) : b;
        out(dst, b) = 1.0;
    }
    return out;
}

inline CMat random_matrix(Eigen::Index dim, RngStream& rng) {
    CMat m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = Complex(rng.normal(), rng.normal());
    }
    return m;
}

inline std::filesystem::path data_dir() {
#ifdef DQC1LAB_DATA_DIR
    return DQC1LAB_DATA_DIR;
#else
    return "data";
#endif
}

}  // namespace dqc1lab::testing
