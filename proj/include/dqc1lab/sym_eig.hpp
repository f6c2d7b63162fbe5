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

namespace dqc1lab {

struct SymEig {
    RVec values;   // descending
    RMat vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps,
/// run until the off-diagonal Frobenius norm drops below 1e-12 times the
/// matrix norm. Rejects inputs that are not symmetric within sym_tol.
SymEig sym_eig(const RMat& m, double sym_tol = 1e-10);

}  // namespace dqc1lab
