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
#include "dqc1lab/random_matrix.hpp"

#include <stdexcept>

namespace dqc1lab {

namespace {

CMat ginibre(Eigen::Index dim, RngStream& rng) {
    CMat g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            g(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    return g;
}

}  // namespace

CMat haar_unitary(int n_qubits, RngStream& rng) {
    if (n_qubits < 1) throw std::invalid_argument("haar_unitary: need n_qubits >= 1");
    const auto dim = static_cast<Eigen::Index>(1ULL << n_qubits);
    CMat q = ginibre(dim, rng);
    // Modified Gram-Schmidt, column by column. Dividing each column by its
    // (real, positive) norm fixes the R-diagonal phases.
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k < j; ++k) {
            const Complex proj = q.col(k).dot(q.col(j));  // conjugates col(k)
            q.col(j) -= proj * q.col(k);
        }
        const double norm = q.col(j).norm();
        if (norm == 0.0) throw std::runtime_error("haar_unitary: degenerate Ginibre draw");
        q.col(j) /= norm;
    }
    return q;
}

CMat random_hermitian(Eigen::Index dim, RngStream& rng) {
    const CMat g = ginibre(dim, rng);
    return (g + g.adjoint()) / 2.0;
}

CMat random_density(Eigen::Index dim, RngStream& rng) {
    const CMat g = ginibre(dim, rng);
    CMat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

}  // namespace dqc1lab
