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
#include "dqc1lab/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace dqc1lab {

PauliString::PauliString(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) {
        throw std::invalid_argument("PauliString: need at least one letter");
    }
    const int n = size();
    for (int q = 0; q < n; ++q) {
        const char c = letters_[static_cast<size_t>(q)];
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw std::invalid_argument("PauliString: letters must be in {I,X,Y,Z}");
        }
        if (c != 'I') {
            ++support_count_;
            support_qubit_ = q;
        }
        if (c == 'X' || c == 'Y') {
            flip_mask_ |= 1ULL << (n - 1 - q);
        }
    }
}

bool PauliString::commutes_with(const PauliString& other) const {
    if (size() != other.size()) {
        throw std::invalid_argument("commutes_with: size mismatch");
    }
    // Two Pauli strings commute iff they anticommute on an even number of
    // qubits.
    int anti = 0;
    for (int q = 0; q < size(); ++q) {
        const char a = letter(q);
        const char b = other.letter(q);
        if (a != 'I' && b != 'I' && a != b) ++anti;
    }
    return anti % 2 == 0;
}

Complex PauliString::phase(uint64_t basis) const {
    const int n = size();
    Complex p(1.0, 0.0);
    for (int q = 0; q < n; ++q) {
        const int bit = bit_of_qubit(basis, q, n);
        switch (letter(q)) {
            case 'Z':
                if (bit) p = -p;
                break;
            case 'Y':
                // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
                p *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
                break;
            default:
                break;
        }
    }
    return p;
}

CMat PauliString::matrix() const {
    const auto dim = static_cast<Eigen::Index>(1ULL << size());
    CMat out = CMat::Zero(dim, dim);
    const uint64_t mask = flip_mask();
    for (uint64_t b = 0; b < static_cast<uint64_t>(dim); ++b) {
        out(static_cast<Eigen::Index>(b ^ mask), static_cast<Eigen::Index>(b)) = phase(b);
    }
    return out;
}

CMat pauli_matrix(char letter) {
    CMat m(2, 2);
    switch (letter) {
        case 'I':
            m << 1, 0, 0, 1;
            break;
        case 'X':
            m << 0, 1, 1, 0;
            break;
        case 'Y':
            m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
            break;
        case 'Z':
            m << 1, 0, 0, -1;
            break;
        default:
            throw std::invalid_argument("pauli_matrix: unknown letter");
    }
    return m;
}

PauliString single_qubit_pauli(int n_qubits, int qubit, char letter) {
    if (qubit < 0 || qubit >= n_qubits) {
        throw std::invalid_argument("single_qubit_pauli: qubit out of range");
    }
    std::string letters(static_cast<size_t>(n_qubits), 'I');
    letters[static_cast<size_t>(qubit)] = letter;
    return PauliString(letters);
}

CMat pauli_rotation(const PauliString& p, double theta) {
    const auto dim = static_cast<Eigen::Index>(1ULL << p.size());
    const double c = std::cos(theta);
    const Complex ms(0.0, -std::sin(theta));
    CMat out = CMat::Zero(dim, dim);
    const uint64_t mask = p.flip_mask();
    for (uint64_t b = 0; b < static_cast<uint64_t>(dim); ++b) {
        out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) += c;
        out(static_cast<Eigen::Index>(b ^ mask), static_cast<Eigen::Index>(b)) += ms * p.phase(b);
    }
    return out;
}

}  // namespace dqc1lab
