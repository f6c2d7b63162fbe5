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

#include "dqc1lab/matrix.hpp"
#include "dqc1lab/rng.hpp"

namespace dqc1lab {

/// Haar-distributed unitary on n_qubits: complex Ginibre matrix followed by
/// modified Gram-Schmidt. The orthonormalization keeps the triangular
/// factor's diagonal positive real, which is what makes the result Haar
/// rather than merely unitary.
CMat haar_unitary(int n_qubits, RngStream& rng);

/// GUE-style Hermitian matrix (independent Gaussian entries, Hermitized).
CMat random_hermitian(Eigen::Index dim, RngStream& rng);

/// Random density matrix: normalized G G^dagger with G Ginibre.
CMat random_density(Eigen::Index dim, RngStream& rng);

}  // namespace dqc1lab
