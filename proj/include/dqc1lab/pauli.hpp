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

#include <cstdint>
#include <string>

#include "dqc1lab/matrix.hpp"

namespace dqc1lab {

// Basis-index convention used everywhere: qubit 0 is the leftmost tensor
// factor, i.e. bit (n-1-q) of the basis index belongs to qubit q.
inline int bit_of_qubit(uint64_t basis, int qubit, int n_qubits) {
    return static_cast<int>((basis >> (n_qubits - 1 - qubit)) & 1ULL);
}

/// Tensor product of single-qubit Paulis, one letter per qubit.
///
/// Every Pauli string acts as a signed permutation of the computational
/// basis: P|b> = phase(b) |b ^ flip_mask()>. The kernels in circuit.cpp
/// lean on that instead of materializing the dense matrix.
class PauliString {
  public:
    explicit PauliString(std::string letters);

    int size() const { return static_cast<int>(letters_.size()); }
    char letter(int qubit) const { return letters_[static_cast<size_t>(qubit)]; }
    const std::string& letters() const { return letters_; }

    bool is_identity() const { return support_count_ == 0; }
    bool commutes_with(const PauliString& other) const;

    /// Number of non-identity letters, and the qubit carrying the only one
    /// (meaningful when support_count() == 1).
    int support_count() const { return support_count_; }
    int support_qubit() const { return support_qubit_; }

    uint64_t flip_mask() const { return flip_mask_; }
    Complex phase(uint64_t basis) const;

    CMat matrix() const;

    bool operator==(const PauliString& other) const { return letters_ == other.letters_; }

  private:
    std::string letters_;
    uint64_t flip_mask_ = 0;
    int support_count_ = 0;
    int support_qubit_ = 0;
};

/// 2x2 matrix for one of I, X, Y, Z.
CMat pauli_matrix(char letter);

/// Single letter placed on one qubit of an n-qubit register.
PauliString single_qubit_pauli(int n_qubits, int qubit, char letter);

/// exp(-i theta P) = cos(theta) I - i sin(theta) P.
CMat pauli_rotation(const PauliString& p, double theta);

}  // namespace dqc1lab
