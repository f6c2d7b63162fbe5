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
#include "dqc1lab/matrix.hpp"

#include <stdexcept>

namespace dqc1lab {

double max_abs(const CMat& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            best = std::max(best, std::abs(m(i, j)));
        }
    }
    return best;
}

CMat identity(Eigen::Index dim) { return CMat::Identity(dim, dim); }

CMat kron(const CMat& a, const CMat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw std::invalid_argument("kron: both factors must be square");
    }
    const Eigen::Index da = a.rows();
    const Eigen::Index db = b.rows();
    CMat out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = a(i, j) * b;
        }
    }
    return out;
}

Complex normalized_trace(const CMat& u) {
    return u.trace() / static_cast<double>(u.rows());
}

bool is_unitary(const CMat& u, double tol) {
    if (u.rows() != u.cols()) return false;
    const CMat delta = u.adjoint() * u - CMat::Identity(u.rows(), u.cols());
    return max_abs(delta) <= tol;
}

bool is_hermitian(const CMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(CMat(m - m.adjoint())) <= tol;
}

bool is_density_matrix(const CMat& rho, double tol, double eig_floor) {
    if (!is_hermitian(rho, tol)) return false;
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kTraceTol) return false;
    Eigen::SelfAdjointEigenSolver<CMat> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= eig_floor;
}

int qubit_count(const CMat& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("qubit_count: matrix is not square");
    }
    const auto dim = static_cast<uint64_t>(m.rows());
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("qubit_count: dimension is not a power of two");
    }
    int k = 0;
    for (uint64_t d = dim; d > 1; d >>= 1) ++k;
    return k;
}

}  // namespace dqc1lab
