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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dqc1lab/matrix.hpp"
#include "dqc1lab/pauli.hpp"

namespace dqc1lab {

enum class Axis { X, Y, Z };

char axis_letter(Axis axis);

// ---------------------------------------------------------------------------
// Primitive circuit factors.
//
// A compiled circuit is an ordered list of factors whose left-to-right order
// equals the matrix product order (the first factor is the leftmost matrix,
// i.e. the one applied last in time).
// ---------------------------------------------------------------------------

/// exp(-i theta[slot] * (pauli_coeff * P + id_coeff * I)).
/// Standard single-qubit rotations use pauli_coeff = 1/2; the phase gate
/// diag(1, e^{i theta}) uses generator (Z - I)/2.
struct RotationGate {
    PauliString generator;
    int slot = 0;
    double pauli_coeff = 0.5;
    double id_coeff = 0.0;
};

/// Signed basis permutation: U|b> = phase[b] |perm[b]>. Covers CNOT layers,
/// diagonal phase layers and global phases.
struct MonomialGate {
    std::vector<uint64_t> perm;
    std::vector<Complex> phase;
};

struct SingleQubitGate {
    int qubit = 0;
    Eigen::Matrix2cd mat;
};

struct DenseGate {
    CMat mat;
};

using GateOp = std::variant<RotationGate, MonomialGate, SingleQubitGate, DenseGate>;

// In-place application kernels; every structured variant costs O(4^n) per
// matrix (O(2^n) per vector) instead of a dense O(8^n) multiply.
void apply_left(const GateOp& op, std::span<const double> theta, int n, CMat& m);
void apply_right(const GateOp& op, std::span<const double> theta, int n, CMat& m);
void apply_vec(const GateOp& op, std::span<const double> theta, int n, CVec& v);

/// Dense materialization of a single factor.
CMat op_matrix(const GateOp& op, std::span<const double> theta, int n);

/// Dense generator pauli_coeff * P + id_coeff * I of a rotation factor.
CMat rotation_generator(const RotationGate& gate, int n);

// Factor constructors.
GateOp rotation_op(int n, int qubit, Axis axis, int slot);     // exp(-i th sigma/2)
GateOp phase_op(int n, int qubit, int slot);                   // diag(1, e^{i th})
GateOp pauli_rotation_op(PauliString p, int slot, double scale = 1.0);
MonomialGate cnot_monomial(int n, int control, int target);
MonomialGate cnot_ring_monomial(int n, int stride);            // controls ascending in time
MonomialGate diagonal_monomial(std::vector<Complex> phases);
MonomialGate global_phase_monomial(int n, double phi);
MonomialGate compose(const MonomialGate& left, const MonomialGate& right);  // left * right
GateOp hadamard_op(int qubit);

// ---------------------------------------------------------------------------
// Blocks
// ---------------------------------------------------------------------------

/// Ordered product of parameterized rotations and fixed gates. Slots are
/// block-local (0..k-1) until the block is appended to a CircuitSpec.
struct TrainableBlock {
    std::vector<GateOp> ops;
    std::string tag = "custom";

    int param_count() const;
    void shift_slots(int offset);
};

struct EmbeddingLayer {
    enum class Kind { ProductRotation, ZZFeatureMap };
    Kind kind = Kind::ProductRotation;
    int n = 1;
    Axis axis = Axis::X;
    std::vector<int> slots;  // one feature index per qubit
    int repetitions = 1;     // ZZFeatureMap only
    bool all_pairs = false;  // ZZFeatureMap pair scope; nearest-neighbor when false
};

/// Per-qubit rotation layer exp(-i x_q sigma/2); one feature slot per qubit.
EmbeddingLayer product_rotation_embedding(int n, Axis axis, std::vector<int> slots);

/// [exp(i sum_i phi_i Z_i + i sum_pairs phi_ij Z_i Z_j) H^n]^repetitions with
/// phi_i = x_i and phi_ij = (pi - x_i)(pi - x_j) over nearest-neighbor pairs
/// (all pairs behind the flag). Feature slots default to 0..n-1.
EmbeddingLayer zz_feature_map(int n, int repetitions, bool all_pairs = false);

/// Basis-independent phase exponents of a product-rotation layer: entry b is
/// -(1/2) sum_q s_q(b) x_{slot(q)} with s_q(b) = +1 for bit 0 and -1 for bit 1,
/// so the diagonalized layer is exp(i * entries). Rejects ZZ feature maps.
std::vector<double> embedding_diagonal(const EmbeddingLayer& layer, std::span<const double> x);

// Trainable block builders.

/// "Ansatz 1": three strongly entangling sub-layers; each applies
/// R(phi, theta, omega) = Rz(omega) Ry(theta) Rz(phi) on every qubit followed
/// by a CNOT ring with stride ((l-1) mod (n-1)) + 1. 9n parameters.
TrainableBlock strongly_entangling_block(int n);

/// "Ansatz 2": two layers of two-qubit SU(4)-style blocks on nearest-neighbor
/// pairs (0,1),(2,3),... then (1,2),(3,4),... (ring-closing for even n).
/// Each pair block is (U3 x U3) CNOT [Ry/Rz core, 3 params] CNOT (U3 x U3)
/// with U3(phi, theta, omega) = e^{i(theta+omega)/2} Rz(theta+omega) R(omega, phi, -omega),
/// 15 parameters per block; 15n parameters for even n, 15(n-1) otherwise.
TrainableBlock su4_pair_block(int n);

/// Single exp(-i theta * scale * P) block.
TrainableBlock single_pauli_block(PauliString p, double scale = 1.0);

/// exp(-i sum_k theta_k * scale * P_k) for mutually commuting generators,
/// stored as the equivalent ordered product of single-generator factors.
TrainableBlock commuting_pauli_block(std::vector<PauliString> generators, double scale = 1.0);

TrainableBlock identity_trainable();

// ---------------------------------------------------------------------------
// CircuitSpec
// ---------------------------------------------------------------------------

/// Alternating sequence W_1 V_1 W_2 V_2 ... W_L V_L [W_{L+1}] on n qubits.
/// The first appended block is the leftmost matrix factor.
class CircuitSpec {
  public:
    using Block = std::variant<TrainableBlock, EmbeddingLayer>;

    CircuitSpec() = default;
    CircuitSpec(int n, int feature_dim);

    CircuitSpec& append(TrainableBlock block);  // rebases block-local slots
    CircuitSpec& append(EmbeddingLayer layer);

    int n() const { return n_; }
    int feature_dim() const { return feature_dim_; }
    int param_count() const { return param_count_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(1ULL << n_); }

    /// Number of embedding layers L.
    int embedding_count() const;

    const std::vector<Block>& blocks() const { return blocks_; }

    /// Every parameter slot referenced exactly once; every feature slot in
    /// [0, d) referenced at least once; qubit indices in range.
    void validate() const;

    /// Factor expansion with embedding layers bound to the feature vector x.
    std::vector<GateOp> factors(std::span<const double> x) const;

    CMat compile_unitary(std::span<const double> x, std::span<const double> theta) const;

  private:
    int n_ = 1;
    int feature_dim_ = 0;
    int param_count_ = 0;
    std::vector<Block> blocks_;
};

// Circuit families used by the experiments.

/// W_1 V_1 ... W_L V_L W_{L+1} with every embedding layer a product rotation
/// sharing feature slot 0 on all qubits; ansatz 1 or 2 picks the W template.
CircuitSpec univariate_trace_circuit(int n, int layers, int ansatz, Axis axis = Axis::X);

/// W_1 V_zz W_2 classifier circuit over feature_dim = n features.
CircuitSpec zz_classifier_circuit(int n, int repetitions, int ansatz);

// Plain hierarchical text (JSON) serialization of the block structure.
std::string circuit_to_json(const CircuitSpec& spec);
CircuitSpec circuit_from_json(const std::string& text);

}  // namespace dqc1lab
