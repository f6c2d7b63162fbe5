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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace dqc1lab {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

/// Entrywise max-modulus norm.
double max_abs(const CMat& m);

CMat identity(Eigen::Index dim);

/// Kronecker product with block structure a_{ij} * b.
CMat kron(const CMat& a, const CMat& b);

/// tr(u) / dim(u).
Complex normalized_trace(const CMat& u);

bool is_unitary(const CMat& u, double tol = kUnitaryTol);
bool is_hermitian(const CMat& m, double tol = kHermitianTol);

/// Hermitian, unit trace, eigenvalues bounded below by eig_floor.
bool is_density_matrix(const CMat& rho, double tol = kHermitianTol,
                       double eig_floor = kEigenvalueFloor);

/// Number of qubits k with dim == 2^k; throws for non-square or non-power-of-two.
int qubit_count(const CMat& m);

}  // namespace dqc1lab
