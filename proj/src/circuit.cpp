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
#include "dqc1lab/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace dqc1lab {

namespace {

constexpr Complex kImag(0.0, 1.0);

uint64_t high_bit(uint64_t mask) {
    uint64_t hi = 1;
    while (hi <= mask / 2) hi <<= 1;
    return hi;
}

struct RotationCoeffs {
    Complex diag;   // gp * cos(a theta)
    Complex flip;   // gp * (-i sin(a theta))
};

RotationCoeffs rotation_coeffs(const RotationGate& g, std::span<const double> theta) {
    const double t = theta[static_cast<size_t>(g.slot)];
    const Complex gp = std::exp(-kImag * t * g.id_coeff);
    const double a = t * g.pauli_coeff;
    return {gp * std::cos(a), gp * Complex(0.0, -std::sin(a))};
}

}  // namespace

char axis_letter(Axis axis) {
    switch (axis) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    throw std::logic_error("axis_letter: bad axis");
}

// ---------------------------------------------------------------------------
// Application kernels
//
// Raw-pointer loops over contiguous columns; Eigen expressions on 16-wide
// strided rows cost more than the arithmetic at these dimensions. Pauli
// phases are tabulated once per application into a reused scratch buffer.
// ---------------------------------------------------------------------------

namespace {

std::vector<Complex>& phase_table(const PauliString& p, uint64_t dim) {
    thread_local std::vector<Complex> table;
    table.resize(dim);
    for (uint64_t b = 0; b < dim; ++b) table[b] = p.phase(b);
    return table;
}

std::vector<Complex>& scratch_column(uint64_t dim) {
    thread_local std::vector<Complex> buf;
    buf.resize(dim);
    return buf;
}

// Effective 2x2 of a rotation whose generator touches a single qubit:
// c I + s sigma with c, s from rotation_coeffs.
Eigen::Matrix2cd rotation_2x2(const RotationGate& g, Complex c, Complex s) {
    Eigen::Matrix2cd u;
    switch (g.generator.letter(g.generator.support_qubit())) {
        case 'X':
            u << c, s, s, c;
            break;
        case 'Y':
            u << c, s * Complex(0.0, -1.0), s * Complex(0.0, 1.0), c;
            break;
        default:  // Z
            u << c + s, Complex(0.0, 0.0), Complex(0.0, 0.0), c - s;
            break;
    }
    return u;
}

void sq_kernel_left(Complex* data, uint64_t rows, uint64_t cols, uint64_t bit,
                    const Eigen::Matrix2cd& u) {
    const Complex g00 = u(0, 0), g01 = u(0, 1), g10 = u(1, 0), g11 = u(1, 1);
    for (uint64_t j = 0; j < cols; ++j) {
        Complex* col = data + j * rows;
        for (uint64_t b = 0; b < rows; ++b) {
            if (b & bit) continue;
            const uint64_t b1 = b | bit;
            const Complex v0 = col[b];
            const Complex v1 = col[b1];
            col[b] = g00 * v0 + g01 * v1;
            col[b1] = g10 * v0 + g11 * v1;
        }
    }
}

void sq_kernel_right(Complex* data, uint64_t rows, uint64_t cols, uint64_t bit,
                     const Eigen::Matrix2cd& u) {
    const Complex g00 = u(0, 0), g01 = u(0, 1), g10 = u(1, 0), g11 = u(1, 1);
    for (uint64_t j = 0; j < cols; ++j) {
        if (j & bit) continue;
        const uint64_t j1 = j | bit;
        Complex* cola = data + j * rows;
        Complex* colb = data + j1 * rows;
        for (uint64_t i = 0; i < rows; ++i) {
            const Complex v0 = cola[i];
            const Complex v1 = colb[i];
            cola[i] = g00 * v0 + g10 * v1;
            colb[i] = g01 * v0 + g11 * v1;
        }
    }
}

void sq_kernel_vec(Complex* data, uint64_t dim, uint64_t bit, const Eigen::Matrix2cd& u) {
    const Complex g00 = u(0, 0), g01 = u(0, 1), g10 = u(1, 0), g11 = u(1, 1);
    for (uint64_t b = 0; b < dim; ++b) {
        if (b & bit) continue;
        const uint64_t b1 = b | bit;
        const Complex v0 = data[b];
        const Complex v1 = data[b1];
        data[b] = g00 * v0 + g01 * v1;
        data[b1] = g10 * v0 + g11 * v1;
    }
}

uint64_t support_bit(const RotationGate& g, int n) {
    return 1ULL << (n - 1 - g.generator.support_qubit());
}

}  // namespace

void apply_left(const GateOp& op, std::span<const double> theta, int n, CMat& m) {
    const auto rows = static_cast<uint64_t>(m.rows());
    const auto cols = static_cast<uint64_t>(m.cols());
    Complex* data = m.data();
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, RotationGate>) {
                const auto [c, s] = rotation_coeffs(g, theta);
                if (g.generator.support_count() == 0) {
                    const Complex scale = c + s;
                    for (uint64_t k = 0; k < rows * cols; ++k) data[k] *= scale;
                    return;
                }
                if (g.generator.support_count() == 1) {
                    sq_kernel_left(data, rows, cols, support_bit(g, n), rotation_2x2(g, c, s));
                    return;
                }
                const uint64_t mask = g.generator.flip_mask();
                const auto& ph = phase_table(g.generator, rows);
                if (mask == 0) {
                    auto& scale = scratch_column(rows);
                    for (uint64_t b = 0; b < rows; ++b) scale[b] = c + s * ph[b];
                    for (uint64_t j = 0; j < cols; ++j) {
                        Complex* col = data + j * rows;
                        for (uint64_t b = 0; b < rows; ++b) col[b] *= scale[b];
                    }
                    return;
                }
                const uint64_t hi = high_bit(mask);
                for (uint64_t j = 0; j < cols; ++j) {
                    Complex* col = data + j * rows;
                    for (uint64_t b = 0; b < rows; ++b) {
                        if (b & hi) continue;
                        const uint64_t b2 = b ^ mask;
                        const Complex v0 = col[b];
                        const Complex v1 = col[b2];
                        col[b] = c * v0 + s * ph[b2] * v1;
                        col[b2] = c * v1 + s * ph[b] * v0;
                    }
                }
            } else if constexpr (std::is_same_v<T, MonomialGate>) {
                auto& buf = scratch_column(rows);
                for (uint64_t j = 0; j < cols; ++j) {
                    Complex* col = data + j * rows;
                    for (uint64_t b = 0; b < rows; ++b) buf[g.perm[b]] = g.phase[b] * col[b];
                    std::copy(buf.begin(), buf.end(), col);
                }
            } else if constexpr (std::is_same_v<T, SingleQubitGate>) {
                sq_kernel_left(data, rows, cols, 1ULL << (n - 1 - g.qubit), g.mat);
            } else {
                m = g.mat * m;
            }
        },
        op);
}

void apply_right(const GateOp& op, std::span<const double> theta, int n, CMat& m) {
    const auto rows = static_cast<uint64_t>(m.rows());
    const auto cols = static_cast<uint64_t>(m.cols());
    Complex* data = m.data();
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, RotationGate>) {
                const auto [c, s] = rotation_coeffs(g, theta);
                if (g.generator.support_count() == 0) {
                    const Complex scale = c + s;
                    for (uint64_t k = 0; k < rows * cols; ++k) data[k] *= scale;
                    return;
                }
                if (g.generator.support_count() == 1) {
                    sq_kernel_right(data, rows, cols, support_bit(g, n), rotation_2x2(g, c, s));
                    return;
                }
                const uint64_t mask = g.generator.flip_mask();
                const auto& ph = phase_table(g.generator, cols);
                if (mask == 0) {
                    for (uint64_t j = 0; j < cols; ++j) {
                        Complex* col = data + j * rows;
                        const Complex scale = c + s * ph[j];
                        for (uint64_t i = 0; i < rows; ++i) col[i] *= scale;
                    }
                    return;
                }
                const uint64_t hi = high_bit(mask);
                for (uint64_t j = 0; j < cols; ++j) {
                    if (j & hi) continue;
                    const uint64_t j2 = j ^ mask;
                    Complex* cola = data + j * rows;
                    Complex* colb = data + j2 * rows;
                    const Complex sa = s * ph[j];
                    const Complex sb = s * ph[j2];
                    for (uint64_t i = 0; i < rows; ++i) {
                        const Complex v0 = cola[i];
                        const Complex v1 = colb[i];
                        cola[i] = c * v0 + sa * v1;
                        colb[i] = c * v1 + sb * v0;
                    }
                }
            } else if constexpr (std::is_same_v<T, MonomialGate>) {
                // Column gather new[:, j] = phase[j] m[:, perm[j]], walked
                // cycle by cycle with one spare column.
                auto& buf = scratch_column(rows);
                std::vector<char> visited(cols, 0);
                for (uint64_t start = 0; start < cols; ++start) {
                    if (visited[start]) continue;
                    if (g.perm[start] == start) {
                        visited[start] = 1;
                        Complex* col = data + start * rows;
                        for (uint64_t i = 0; i < rows; ++i) col[i] *= g.phase[start];
                        continue;
                    }
                    std::copy_n(data + start * rows, rows, buf.begin());
                    uint64_t j = start;
                    while (true) {
                        const uint64_t src = g.perm[j];
                        visited[j] = 1;
                        Complex* dst = data + j * rows;
                        if (src == start) {
                            for (uint64_t i = 0; i < rows; ++i) dst[i] = g.phase[j] * buf[i];
                            break;
                        }
                        const Complex* s_col = data + src * rows;
                        for (uint64_t i = 0; i < rows; ++i) dst[i] = g.phase[j] * s_col[i];
                        j = src;
                    }
                }
            } else if constexpr (std::is_same_v<T, SingleQubitGate>) {
                sq_kernel_right(data, rows, cols, 1ULL << (n - 1 - g.qubit), g.mat);
            } else {
                m = m * g.mat;
            }
        },
        op);
}

void apply_vec(const GateOp& op, std::span<const double> theta, int n, CVec& v) {
    const auto dim = static_cast<uint64_t>(v.size());
    Complex* data = v.data();
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, RotationGate>) {
                const auto [c, s] = rotation_coeffs(g, theta);
                if (g.generator.support_count() == 0) {
                    const Complex scale = c + s;
                    for (uint64_t b = 0; b < dim; ++b) data[b] *= scale;
                    return;
                }
                if (g.generator.support_count() == 1) {
                    sq_kernel_vec(data, dim, support_bit(g, n), rotation_2x2(g, c, s));
                    return;
                }
                const uint64_t mask = g.generator.flip_mask();
                const auto& ph = phase_table(g.generator, dim);
                if (mask == 0) {
                    for (uint64_t b = 0; b < dim; ++b) data[b] *= c + s * ph[b];
                    return;
                }
                const uint64_t hi = high_bit(mask);
                for (uint64_t b = 0; b < dim; ++b) {
                    if (b & hi) continue;
                    const uint64_t b2 = b ^ mask;
                    const Complex v0 = data[b];
                    const Complex v1 = data[b2];
                    data[b] = c * v0 + s * ph[b2] * v1;
                    data[b2] = c * v1 + s * ph[b] * v0;
                }
            } else if constexpr (std::is_same_v<T, MonomialGate>) {
                auto& buf = scratch_column(dim);
                for (uint64_t b = 0; b < dim; ++b) buf[g.perm[b]] = g.phase[b] * data[b];
                std::copy(buf.begin(), buf.end(), data);
            } else if constexpr (std::is_same_v<T, SingleQubitGate>) {
                sq_kernel_vec(data, dim, 1ULL << (n - 1 - g.qubit), g.mat);
            } else {
                v = g.mat * v;
            }
        },
        op);
}

CMat op_matrix(const GateOp& op, std::span<const double> theta, int n) {
    CMat m = identity(static_cast<Eigen::Index>(1ULL << n));
    apply_left(op, theta, n, m);
    return m;
}

CMat rotation_generator(const RotationGate& gate, int n) {
    const auto dim = static_cast<Eigen::Index>(1ULL << n);
    return gate.pauli_coeff * gate.generator.matrix() +
           gate.id_coeff * CMat::Identity(dim, dim);
}

// ---------------------------------------------------------------------------
// Factor constructors
// ---------------------------------------------------------------------------

GateOp rotation_op(int n, int qubit, Axis axis, int slot) {
    return RotationGate{single_qubit_pauli(n, qubit, axis_letter(axis)), slot, 0.5, 0.0};
}

GateOp phase_op(int n, int qubit, int slot) {
    return RotationGate{single_qubit_pauli(n, qubit, 'Z'), slot, 0.5, -0.5};
}

GateOp pauli_rotation_op(PauliString p, int slot, double scale) {
    return RotationGate{std::move(p), slot, scale, 0.0};
}

MonomialGate cnot_monomial(int n, int control, int target) {
    if (control == target || control < 0 || target < 0 || control >= n || target >= n) {
        throw std::invalid_argument("cnot_monomial: bad wire indices");
    }
    const uint64_t dim = 1ULL << n;
    const uint64_t cbit = 1ULL << (n - 1 - control);
    const uint64_t tbit = 1ULL << (n - 1 - target);
    MonomialGate g;
    g.perm.resize(dim);
    g.phase.assign(dim, Complex(1.0, 0.0));
    for (uint64_t b = 0; b < dim; ++b) {
        g.perm[b] = (b & cbit) ? (b ^ tbit) : b;
    }
    return g;
}

MonomialGate compose(const MonomialGate& left, const MonomialGate& right) {
    if (left.perm.size() != right.perm.size()) {
        throw std::invalid_argument("compose: dimension mismatch");
    }
    MonomialGate out;
    out.perm.resize(right.perm.size());
    out.phase.resize(right.perm.size());
    for (uint64_t b = 0; b < right.perm.size(); ++b) {
        out.perm[b] = left.perm[right.perm[b]];
        out.phase[b] = right.phase[b] * left.phase[right.perm[b]];
    }
    return out;
}

MonomialGate cnot_ring_monomial(int n, int stride) {
    if (n < 2) throw std::invalid_argument("cnot_ring_monomial: need n >= 2");
    const uint64_t dim = 1ULL << n;
    MonomialGate ring;
    ring.perm.resize(dim);
    ring.phase.assign(dim, Complex(1.0, 0.0));
    for (uint64_t b = 0; b < dim; ++b) ring.perm[b] = b;
    for (int q = 0; q < n; ++q) {
        ring = compose(cnot_monomial(n, q, (q + stride) % n), ring);
    }
    return ring;
}

MonomialGate diagonal_monomial(std::vector<Complex> phases) {
    MonomialGate g;
    g.perm.resize(phases.size());
    for (uint64_t b = 0; b < phases.size(); ++b) g.perm[b] = b;
    g.phase = std::move(phases);
    return g;
}

MonomialGate global_phase_monomial(int n, double phi) {
    const uint64_t dim = 1ULL << n;
    return diagonal_monomial(std::vector<Complex>(dim, std::exp(kImag * phi)));
}

GateOp hadamard_op(int qubit) {
    Eigen::Matrix2cd h;
    const double inv = 1.0 / std::numbers::sqrt2;
    h << inv, inv, inv, -inv;
    return SingleQubitGate{qubit, h};
}

// ---------------------------------------------------------------------------
// Blocks
// ---------------------------------------------------------------------------

int TrainableBlock::param_count() const {
    int count = 0;
    for (const auto& op : ops) {
        if (const auto* rot = std::get_if<RotationGate>(&op)) {
            count = std::max(count, rot->slot + 1);
        }
    }
    return count;
}

void TrainableBlock::shift_slots(int offset) {
    for (auto& op : ops) {
        if (auto* rot = std::get_if<RotationGate>(&op)) rot->slot += offset;
    }
}

EmbeddingLayer product_rotation_embedding(int n, Axis axis, std::vector<int> slots) {
    if (static_cast<int>(slots.size()) != n) {
        throw std::invalid_argument("product_rotation_embedding: one slot per qubit");
    }
    EmbeddingLayer layer;
    layer.kind = EmbeddingLayer::Kind::ProductRotation;
    layer.n = n;
    layer.axis = axis;
    layer.slots = std::move(slots);
    return layer;
}

EmbeddingLayer zz_feature_map(int n, int repetitions, bool all_pairs) {
    if (n < 1) throw std::invalid_argument("zz_feature_map: need n >= 1");
    if (repetitions < 1) throw std::invalid_argument("zz_feature_map: need repetitions >= 1");
    EmbeddingLayer layer;
    layer.kind = EmbeddingLayer::Kind::ZZFeatureMap;
    layer.n = n;
    layer.repetitions = repetitions;
    layer.all_pairs = all_pairs;
    layer.slots.resize(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) layer.slots[static_cast<size_t>(q)] = q;
    return layer;
}

std::vector<double> embedding_diagonal(const EmbeddingLayer& layer, std::span<const double> x) {
    if (layer.kind != EmbeddingLayer::Kind::ProductRotation) {
        throw std::invalid_argument(
            "embedding_diagonal: only product-rotation layers have data-independent "
            "diagonal phases");
    }
    const uint64_t dim = 1ULL << layer.n;
    std::vector<double> phases(dim, 0.0);
    for (uint64_t b = 0; b < dim; ++b) {
        double sum = 0.0;
        for (int q = 0; q < layer.n; ++q) {
            const double sign = bit_of_qubit(b, q, layer.n) ? -1.0 : 1.0;
            sum += sign * x[static_cast<size_t>(layer.slots[static_cast<size_t>(q)])];
        }
        phases[b] = -0.5 * sum;
    }
    return phases;
}

namespace {

// Appends U3(phi, theta, omega) = P(theta) Ry(phi) P(omega) in time order,
// with P(a) = diag(1, e^{ia}); slots are (phi, theta, omega) = base..base+2.
void push_u3_time_order(std::vector<GateOp>& time_ops, int n, int qubit, int base) {
    time_ops.push_back(phase_op(n, qubit, base + 2));
    time_ops.push_back(rotation_op(n, qubit, Axis::Y, base));
    time_ops.push_back(phase_op(n, qubit, base + 1));
}

TrainableBlock from_time_order(std::vector<GateOp> time_ops, std::string tag) {
    TrainableBlock block;
    block.tag = std::move(tag);
    block.ops.assign(time_ops.rbegin(), time_ops.rend());
    return block;
}

}  // namespace

TrainableBlock strongly_entangling_block(int n) {
    if (n < 1) throw std::invalid_argument("strongly_entangling_block: need n >= 1");
    std::vector<GateOp> time_ops;
    int slot = 0;
    for (int layer = 1; layer <= 3; ++layer) {
        for (int q = 0; q < n; ++q) {
            // R(phi, theta, omega) = Rz(omega) Ry(theta) Rz(phi)
            time_ops.push_back(rotation_op(n, q, Axis::Z, slot));
            time_ops.push_back(rotation_op(n, q, Axis::Y, slot + 1));
            time_ops.push_back(rotation_op(n, q, Axis::Z, slot + 2));
            slot += 3;
        }
        if (n >= 2) {
            const int stride = ((layer - 1) % (n - 1)) + 1;
            time_ops.emplace_back(cnot_ring_monomial(n, stride));
        }
    }
    return from_time_order(std::move(time_ops), "strongly-entangling");
}

TrainableBlock su4_pair_block(int n) {
    if (n < 2) throw std::invalid_argument("su4_pair_block: need n >= 2");
    std::vector<GateOp> time_ops;
    int slot = 0;
    auto push_pair = [&](int qa, int qb) {
        push_u3_time_order(time_ops, n, qa, slot);
        push_u3_time_order(time_ops, n, qb, slot + 3);
        time_ops.emplace_back(cnot_monomial(n, qa, qb));
        time_ops.push_back(rotation_op(n, qa, Axis::Y, slot + 6));
        time_ops.push_back(rotation_op(n, qb, Axis::Z, slot + 7));
        time_ops.push_back(rotation_op(n, qa, Axis::Z, slot + 8));
        time_ops.emplace_back(cnot_monomial(n, qb, qa));
        push_u3_time_order(time_ops, n, qa, slot + 9);
        push_u3_time_order(time_ops, n, qb, slot + 12);
        slot += 15;
    };
    for (int q = 0; q + 1 < n; q += 2) push_pair(q, q + 1);
    for (int q = 1; q + 1 <= n; q += 2) {
        if (q + 1 < n) {
            push_pair(q, q + 1);
        } else if (n % 2 == 0) {
            push_pair(q, 0);  // close the ring
        }
    }
    return from_time_order(std::move(time_ops), "su4");
}

TrainableBlock single_pauli_block(PauliString p, double scale) {
    TrainableBlock block;
    block.tag = "custom";
    block.ops.push_back(pauli_rotation_op(std::move(p), 0, scale));
    return block;
}

TrainableBlock commuting_pauli_block(std::vector<PauliString> generators, double scale) {
    for (size_t i = 0; i < generators.size(); ++i) {
        for (size_t j = i + 1; j < generators.size(); ++j) {
            if (!generators[i].commutes_with(generators[j])) {
                throw std::invalid_argument("commuting_pauli_block: generators must commute");
            }
        }
    }
    TrainableBlock block;
    block.tag = "commuting";
    for (size_t k = 0; k < generators.size(); ++k) {
        block.ops.push_back(pauli_rotation_op(generators[k], static_cast<int>(k), scale));
    }
    return block;
}

TrainableBlock identity_trainable() {
    TrainableBlock block;
    block.tag = "identity";
    return block;
}

// ---------------------------------------------------------------------------
// CircuitSpec
// ---------------------------------------------------------------------------

CircuitSpec::CircuitSpec(int n, int feature_dim) : n_(n), feature_dim_(feature_dim) {
    if (n < 1) throw std::invalid_argument("CircuitSpec: need n >= 1");
    if (feature_dim < 0) throw std::invalid_argument("CircuitSpec: bad feature dimension");
}

CircuitSpec& CircuitSpec::append(TrainableBlock block) {
    const int k = block.param_count();
    std::vector<int> seen(static_cast<size_t>(k), 0);
    for (const auto& op : block.ops) {
        if (const auto* rot = std::get_if<RotationGate>(&op)) {
            if (rot->slot < 0 || rot->slot >= k) {
                throw std::invalid_argument("append: block-local slots must be 0..k-1");
            }
            ++seen[static_cast<size_t>(rot->slot)];
        }
    }
    for (int c : seen) {
        if (c != 1) throw std::invalid_argument("append: each block slot must appear exactly once");
    }
    block.shift_slots(param_count_);
    param_count_ += k;
    blocks_.emplace_back(std::move(block));
    return *this;
}

CircuitSpec& CircuitSpec::append(EmbeddingLayer layer) {
    if (layer.n != n_) throw std::invalid_argument("append: embedding qubit count mismatch");
    for (int s : layer.slots) {
        if (s < 0 || s >= feature_dim_) {
            throw std::invalid_argument("append: embedding slot out of range");
        }
    }
    blocks_.emplace_back(std::move(layer));
    return *this;
}

int CircuitSpec::embedding_count() const {
    int count = 0;
    for (const auto& block : blocks_) {
        if (std::holds_alternative<EmbeddingLayer>(block)) ++count;
    }
    return count;
}

void CircuitSpec::validate() const {
    std::vector<int> slot_use(static_cast<size_t>(param_count_), 0);
    std::vector<int> feature_use(static_cast<size_t>(feature_dim_), 0);
    const auto dim = static_cast<uint64_t>(this->dim());
    for (const auto& block : blocks_) {
        if (const auto* trainable = std::get_if<TrainableBlock>(&block)) {
            for (const auto& op : trainable->ops) {
                std::visit(
                    [&](const auto& g) {
                        using T = std::decay_t<decltype(g)>;
                        if constexpr (std::is_same_v<T, RotationGate>) {
                            if (g.slot < 0 || g.slot >= param_count_) {
                                throw std::invalid_argument("validate: parameter slot out of range");
                            }
                            if (g.generator.size() != n_) {
                                throw std::invalid_argument("validate: generator size mismatch");
                            }
                            ++slot_use[static_cast<size_t>(g.slot)];
                        } else if constexpr (std::is_same_v<T, MonomialGate>) {
                            if (g.perm.size() != dim || g.phase.size() != dim) {
                                throw std::invalid_argument("validate: monomial size mismatch");
                            }
                        } else if constexpr (std::is_same_v<T, SingleQubitGate>) {
                            if (g.qubit < 0 || g.qubit >= n_) {
                                throw std::invalid_argument("validate: qubit out of range");
                            }
                        } else {
                            if (static_cast<uint64_t>(g.mat.rows()) != dim ||
                                static_cast<uint64_t>(g.mat.cols()) != dim) {
                                throw std::invalid_argument("validate: dense gate size mismatch");
                            }
                        }
                    },
                    op);
            }
        } else {
            for (int s : std::get<EmbeddingLayer>(block).slots) {
                if (s < 0 || s >= feature_dim_) {
                    throw std::invalid_argument("validate: feature slot out of range");
                }
                ++feature_use[static_cast<size_t>(s)];
            }
        }
    }
    for (int c : slot_use) {
        if (c != 1) throw std::invalid_argument("validate: every parameter slot must be used exactly once");
    }
    for (int c : feature_use) {
        if (c == 0) throw std::invalid_argument("validate: every feature slot must be referenced");
    }
}

std::vector<GateOp> CircuitSpec::factors(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != feature_dim_) {
        throw std::invalid_argument("factors: feature vector size mismatch");
    }
    std::vector<GateOp> out;
    for (const auto& block : blocks_) {
        if (const auto* trainable = std::get_if<TrainableBlock>(&block)) {
            out.insert(out.end(), trainable->ops.begin(), trainable->ops.end());
            continue;
        }
        const auto& layer = std::get<EmbeddingLayer>(block);
        if (layer.kind == EmbeddingLayer::Kind::ProductRotation) {
            const CMat sigma = pauli_matrix(axis_letter(layer.axis));
            for (int q = 0; q < layer.n; ++q) {
                const double xv = x[static_cast<size_t>(layer.slots[static_cast<size_t>(q)])];
                Eigen::Matrix2cd gate =
                    std::cos(xv / 2.0) * Eigen::Matrix2cd::Identity() +
                    Complex(0.0, -std::sin(xv / 2.0)) * Eigen::Matrix2cd(sigma);
                out.push_back(SingleQubitGate{q, gate});
            }
            continue;
        }
        // ZZ feature map: each repetition is diag * H^{x n} in matrix order.
        const uint64_t dim = 1ULL << layer.n;
        std::vector<Complex> phases(dim);
        for (uint64_t b = 0; b < dim; ++b) {
            double d = 0.0;
            for (int q = 0; q < layer.n; ++q) {
                const double sign = bit_of_qubit(b, q, layer.n) ? -1.0 : 1.0;
                d += sign * x[static_cast<size_t>(layer.slots[static_cast<size_t>(q)])];
            }
            for (int i = 0; i < layer.n; ++i) {
                const int j_end = layer.all_pairs ? layer.n : std::min(i + 2, layer.n);
                for (int j = i + 1; j < j_end; ++j) {
                    const double si = bit_of_qubit(b, i, layer.n) ? -1.0 : 1.0;
                    const double sj = bit_of_qubit(b, j, layer.n) ? -1.0 : 1.0;
                    const double xi = x[static_cast<size_t>(layer.slots[static_cast<size_t>(i)])];
                    const double xj = x[static_cast<size_t>(layer.slots[static_cast<size_t>(j)])];
                    d += (std::numbers::pi - xi) * (std::numbers::pi - xj) * si * sj;
                }
            }
            phases[b] = std::exp(kImag * d);
        }
        for (int rep = 0; rep < layer.repetitions; ++rep) {
            out.emplace_back(diagonal_monomial(phases));
            for (int q = 0; q < layer.n; ++q) out.push_back(hadamard_op(q));
        }
    }
    return out;
}

CMat CircuitSpec::compile_unitary(std::span<const double> x, std::span<const double> theta) const {
    if (static_cast<int>(theta.size()) != param_count_) {
        throw std::invalid_argument("compile_unitary: parameter slot count mismatch");
    }
    const auto fs = factors(x);
    CMat u = identity(dim());
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
        apply_left(*it, theta, n_, u);
    }
    return u;
}

// ---------------------------------------------------------------------------
// Circuit families
// ---------------------------------------------------------------------------

namespace {

TrainableBlock ansatz_block(int n, int ansatz) {
    if (ansatz == 1) return strongly_entangling_block(n);
    if (ansatz == 2) return su4_pair_block(n);
    throw std::invalid_argument("ansatz must be 1 or 2");
}

}  // namespace

CircuitSpec univariate_trace_circuit(int n, int layers, int ansatz, Axis axis) {
    if (layers < 1) throw std::invalid_argument("univariate_trace_circuit: need layers >= 1");
    CircuitSpec spec(n, 1);
    const std::vector<int> shared(static_cast<size_t>(n), 0);
    for (int l = 0; l < layers; ++l) {
        spec.append(ansatz_block(n, ansatz));
        spec.append(product_rotation_embedding(n, axis, shared));
    }
    spec.append(ansatz_block(n, ansatz));
    return spec;
}

CircuitSpec zz_classifier_circuit(int n, int repetitions, int ansatz) {
    CircuitSpec spec(n, n);
    spec.append(ansatz_block(n, ansatz));
    spec.append(zz_feature_map(n, repetitions));
    spec.append(ansatz_block(n, ansatz));
    return spec;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string axis_name(Axis axis) { return std::string(1, axis_letter(axis)); }

Axis axis_from_name(const std::string& name) {
    if (name == "X") return Axis::X;
    if (name == "Y") return Axis::Y;
    if (name == "Z") return Axis::Z;
    throw std::invalid_argument("circuit_from_json: bad axis '" + name + "'");
}

}  // namespace

std::string circuit_to_json(const CircuitSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.n();
    j["d"] = spec.feature_dim();
    j["blocks"] = nlohmann::json::array();
    for (const auto& block : spec.blocks()) {
        nlohmann::json b;
        if (const auto* trainable = std::get_if<TrainableBlock>(&block)) {
            if (trainable->tag != "strongly-entangling" && trainable->tag != "su4" &&
                trainable->tag != "identity") {
                throw std::invalid_argument("circuit_to_json: only tagged ansatz blocks serialize");
            }
            b["type"] = "trainable";
            b["tag"] = trainable->tag;
        } else {
            const auto& layer = std::get<EmbeddingLayer>(block);
            if (layer.kind == EmbeddingLayer::Kind::ProductRotation) {
                b["type"] = "rotation";
                b["axis"] = axis_name(layer.axis);
            } else {
                b["type"] = "zz";
                b["repetitions"] = layer.repetitions;
                b["all_pairs"] = layer.all_pairs;
            }
            b["slots"] = layer.slots;
        }
        j["blocks"].push_back(std::move(b));
    }
    return j.dump(2);
}

CircuitSpec circuit_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    CircuitSpec spec(j.at("n").get<int>(), j.at("d").get<int>());
    const int n = spec.n();
    for (const auto& b : j.at("blocks")) {
        const std::string type = b.at("type").get<std::string>();
        if (type == "trainable") {
            const std::string tag = b.at("tag").get<std::string>();
            if (tag == "strongly-entangling") {
                spec.append(strongly_entangling_block(n));
            } else if (tag == "su4") {
                spec.append(su4_pair_block(n));
            } else if (tag == "identity") {
                spec.append(identity_trainable());
            } else {
                throw std::invalid_argument("circuit_from_json: unknown tag '" + tag + "'");
            }
        } else if (type == "rotation") {
            spec.append(product_rotation_embedding(n, axis_from_name(b.at("axis").get<std::string>()),
                                                   b.at("slots").get<std::vector<int>>()));
        } else if (type == "zz") {
            EmbeddingLayer layer = zz_feature_map(n, b.at("repetitions").get<int>(),
                                                  b.value("all_pairs", false));
            if (b.contains("slots")) layer.slots = b.at("slots").get<std::vector<int>>();
            spec.append(std::move(layer));
        } else {
            throw std::invalid_argument("circuit_from_json: unknown block type '" + type + "'");
        }
    }
    return spec;
}

}  // namespace dqc1lab
