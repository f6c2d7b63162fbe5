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
#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "dqc1lab/circuit.hpp"
#include "dqc1lab/optimize.hpp"
#include "helpers.hpp"

using namespace dqc1lab;
namespace oracle = dqc1lab::testing;

namespace {

// Dense factor materialization from first principles (Taylor exponential and
// Kronecker assembly), independent of the structured kernels.
CMat dense_factor(const GateOp& op, std::span<const double> theta, int n) {
    const auto dim = static_cast<Eigen::Index>(1LL << n);
    if (const auto* rot = std::get_if<RotationGate>(&op)) {
        const CMat gen = rot->pauli_coeff * oracle::dense_pauli_string(rot->generator.letters()) +
                         rot->id_coeff * CMat::Identity(dim, dim);
        return oracle::expm(Complex(0, -theta[static_cast<size_t>(rot->slot)]) * gen);
    }
    if (const auto* mono = std::get_if<MonomialGate>(&op)) {
        CMat out = CMat::Zero(dim, dim);
        for (uint64_t b = 0; b < static_cast<uint64_t>(dim); ++b) {
            out(static_cast<Eigen::Index>(mono->perm[b]), static_cast<Eigen::Index>(b)) =
                mono->phase[b];
        }
        return out;
    }
    if (const auto* sq = std::get_if<SingleQubitGate>(&op)) {
        return oracle::embed_single(n, sq->qubit, CMat(sq->mat));
    }
    return std::get<DenseGate>(op).mat;
}

CMat naive_compile(const CircuitSpec& spec, std::span<const double> x,
                   std::span<const double> theta) {
    CMat u = CMat::Identity(spec.dim(), spec.dim());
    for (const auto& op : spec.factors(x)) {
        u = CMat(u * dense_factor(op, theta, spec.n()));
    }
    return u;
}

std::vector<Complex> sorted_eigenvalues(const CMat& m) {
    Eigen::ComplexEigenSolver<CMat> solver(m);
    std::vector<Complex> vals(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(vals.begin(), vals.end(), [](Complex a, Complex b) {
        return std::arg(a) < std::arg(b);
    });
    return vals;
}

}  // namespace

TEST_CASE("identity circuit compiles to the identity") {
    CircuitSpec spec(2, 1);
    spec.append(identity_trainable());
    spec.append(product_rotation_embedding(2, Axis::X, {0, 0}));
    spec.append(identity_trainable());
    const std::vector<double> x{0.0};
    const std::vector<double> theta;
    CHECK(max_abs(CMat(spec.compile_unitary(x, theta) - identity(4))) < 1e-15);
}

TEST_CASE("single-rotation circuit equals pauli_rotation") {
    CircuitSpec spec(1, 0);
    spec.append(single_pauli_block(PauliString("Z"), 1.0));
    const std::vector<double> theta{0.7};
    const CMat u = spec.compile_unitary({}, theta);
    CHECK(max_abs(CMat(u - pauli_rotation(PauliString("Z"), 0.7))) < 1e-14);
}

TEST_CASE("compile matches the naive dense product oracle") {
    RngStream rng(21);
    for (const int ansatz : {1, 2}) {
        const CircuitSpec spec = univariate_trace_circuit(2, 2, ansatz);
        const std::vector<double> x{rng.uniform(-2.0, 2.0)};
        const auto theta = random_parameters(spec.param_count(), rng);
        const CMat fast = spec.compile_unitary(x, theta);
        const CMat slow = naive_compile(spec, x, theta);
        CHECK(max_abs(CMat(fast - slow)) < 1e-12);
        CHECK(is_unitary(fast, 1e-10));
    }
}

TEST_CASE("zz classifier circuit compiles against the oracle") {
    RngStream rng(22);
    const CircuitSpec spec = zz_classifier_circuit(3, 2, 1);
    std::vector<double> x{0.3, 1.1, 2.0};
    const auto theta = random_parameters(spec.param_count(), rng);
    const CMat fast = spec.compile_unitary(x, theta);
    CHECK(max_abs(CMat(fast - naive_compile(spec, x, theta))) < 1e-12);
    CHECK(is_unitary(fast, 1e-10));
}

TEST_CASE("embedding diagonal phases") {
    const auto layer1 = product_rotation_embedding(1, Axis::X, {0});
    const double w = 0.83;
    const auto phases1 = embedding_diagonal(layer1, std::vector<double>{w});
    CHECK(phases1[0] == Catch::Approx(-w / 2));
    CHECK(phases1[1] == Catch::Approx(w / 2));

    const auto layer2 = product_rotation_embedding(2, Axis::Z, {0, 1});
    const auto phases2 = embedding_diagonal(layer2, std::vector<double>{1.0, 1.0});
    CHECK(phases2 == std::vector<double>{-1.0, 0.0, 0.0, 1.0});

    CHECK_THROWS_AS(embedding_diagonal(zz_feature_map(2, 1), std::vector<double>{0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("zero data compiles embedding layers to the identity") {
    CircuitSpec spec(3, 1);
    spec.append(product_rotation_embedding(3, Axis::Y, {0, 0, 0}));
    const std::vector<double> x{0.0};
    const std::vector<double> theta;
    CHECK(max_abs(CMat(spec.compile_unitary(x, theta) - identity(8))) < 1e-15);
}

TEST_CASE("compiled embedding eigenvalues match exp(i * diagonal)") {
    RngStream rng(23);
    for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        CircuitSpec spec(2, 2);
        spec.append(product_rotation_embedding(2, axis, {0, 1}));
        const std::vector<double> x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const std::vector<double> theta;
        const CMat u = spec.compile_unitary(x, theta);
        const auto phases = embedding_diagonal(product_rotation_embedding(2, axis, {0, 1}), x);
        CMat diag = CMat::Zero(4, 4);
        for (int b = 0; b < 4; ++b) diag(b, b) = std::exp(Complex(0, phases[static_cast<size_t>(b)]));
        const auto got = sorted_eigenvalues(u);
        const auto want = sorted_eigenvalues(diag);
        for (size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-10);
    }
}

TEST_CASE("zz feature map single qubit has no pair term") {
    CircuitSpec spec(1, 1);
    spec.append(zz_feature_map(1, 1));
    const double x0 = 0.9;
    const std::vector<double> x{x0};
    const std::vector<double> theta;
    const CMat u = spec.compile_unitary(x, theta);
    CMat h(2, 2);
    const double inv = 1.0 / std::numbers::sqrt2;
    h << inv, inv, inv, -inv;
    const CMat expected = oracle::expm(Complex(0, x0) * oracle::dense_pauli_string("Z")) * h;
    CHECK(max_abs(CMat(u - expected)) < 1e-12);
}

TEST_CASE("zz feature map pair phases follow (pi - x_i)(pi - x_j)") {
    // x = (0, 0): phi_1 = phi_2 = 0 and phi_12 = pi^2.
    CircuitSpec spec(2, 2);
    spec.append(zz_feature_map(2, 1));
    const std::vector<double> x{0.0, 0.0};
    const std::vector<double> theta;
    const CMat u = spec.compile_unitary(x, theta);
    CMat h(2, 2);
    const double inv = 1.0 / std::numbers::sqrt2;
    h << inv, inv, inv, -inv;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const CMat expected = oracle::expm(Complex(0, pi2) * oracle::dense_pauli_string("ZZ")) *
                          oracle::kron2(h, h);
    CHECK(max_abs(CMat(u - expected)) < 1e-12);

    // x_i = x_j = pi kills the pair term entirely.
    const std::vector<double> xp{std::numbers::pi, std::numbers::pi};
    const CMat up = spec.compile_unitary(xp, theta);
    const CMat zi = oracle::dense_pauli_string("ZI");
    const CMat iz = oracle::dense_pauli_string("IZ");
    const CMat no_pair =
        oracle::expm(Complex(0, std::numbers::pi) * CMat(zi + iz)) * oracle::kron2(h, h);
    CHECK(max_abs(CMat(up - no_pair)) < 1e-12);
}

TEST_CASE("strongly entangling block parameter counts") {
    CHECK(strongly_entangling_block(4).param_count() == 36);
    CHECK(strongly_entangling_block(1).param_count() == 9);
    for (const auto& op : strongly_entangling_block(1).ops) {
        CHECK_FALSE(std::holds_alternative<MonomialGate>(op));  // no entangler on one qubit
    }
}

TEST_CASE("strongly entangling block at zero angles is the ring product") {
    const int n = 3;
    TrainableBlock block = strongly_entangling_block(n);
    CircuitSpec spec(n, 0);
    spec.append(std::move(block));
    const std::vector<double> theta(static_cast<size_t>(spec.param_count()), 0.0);
    const CMat u = spec.compile_unitary({}, theta);

    // Rings use stride ((l-1) mod (n-1)) + 1 with controls ascending in time,
    // so the matrix product is ring3 * ring2 * ring1.
    auto ring = [&](int stride) {
        CMat r = CMat::Identity(8, 8);
        for (int q = 0; q < n; ++q) r = CMat(oracle::dense_cnot(n, q, (q + stride) % n) * r);
        return r;
    };
    const CMat expected = CMat(ring(1) * ring(2) * ring(1));
    CHECK(max_abs(CMat(u - expected)) < 1e-13);
}

TEST_CASE("su4 pair block parameter counts") {
    CHECK(su4_pair_block(4).param_count() == 60);   // 15 n for even n
    CHECK(su4_pair_block(3).param_count() == 30);   // 15 (n-1) for odd n
    CHECK(su4_pair_block(2).param_count() == 30);
    CHECK(su4_pair_block(6).param_count() == 90);
    CHECK_THROWS_AS(su4_pair_block(1), std::invalid_argument);
}

TEST_CASE("su4 pair block at zero angles is its CNOT skeleton") {
    CircuitSpec spec(2, 0);
    spec.append(su4_pair_block(2));
    const std::vector<double> theta(static_cast<size_t>(spec.param_count()), 0.0);
    const CMat u = spec.compile_unitary({}, theta);
    // Two pair blocks (0,1) then (1,0); each reduces to CNOT(b->a) CNOT(a->b).
    const CMat block01 = CMat(oracle::dense_cnot(2, 1, 0) * oracle::dense_cnot(2, 0, 1));
    const CMat block10 = CMat(oracle::dense_cnot(2, 0, 1) * oracle::dense_cnot(2, 1, 0));
    const CMat expected = CMat(block10 * block01);
    CHECK(max_abs(CMat(u - expected)) < 1e-13);
}

TEST_CASE("u3 gates carry the determinant phase") {
    // A lone U3 on one qubit: det = e^{i(theta+omega)}, so the block-average
    // trace is phase sensitive. Compare against the closed 2x2 form.
    CircuitSpec spec(1, 0);
    TrainableBlock block;
    block.tag = "custom";
    block.ops.push_back(phase_op(1, 0, 1));        // theta
    block.ops.push_back(rotation_op(1, 0, Axis::Y, 0));  // phi
    block.ops.push_back(phase_op(1, 0, 2));        // omega
    spec.append(std::move(block));
    const double phi = 0.4, th = 1.1, om = -0.6;
    const std::vector<double> theta{phi, th, om};
    const CMat u = spec.compile_unitary({}, theta);
    CMat expected(2, 2);
    const double c = std::cos(phi / 2), s = std::sin(phi / 2);
    expected(0, 0) = c;
    expected(0, 1) = -s * std::exp(Complex(0, om));
    expected(1, 0) = s * std::exp(Complex(0, th));
    expected(1, 1) = c * std::exp(Complex(0, th + om));
    CHECK(max_abs(CMat(u - expected)) < 1e-13);
    CHECK(std::abs(std::arg(u.determinant()) - (th + om)) < 1e-12);
}

TEST_CASE("global phase blocks scale the normalized trace exactly") {
    RngStream rng(29);
    const CircuitSpec base = univariate_trace_circuit(2, 1, 1);
    const std::vector<double> x{0.4};
    const auto theta = random_parameters(base.param_count(), rng);
    const Complex f0 = normalized_trace(base.compile_unitary(x, theta));

    CircuitSpec phased = base;
    const double phi = 0.77;
    TrainableBlock gp;
    gp.tag = "custom";
    gp.ops.emplace_back(global_phase_monomial(2, phi));
    phased.append(std::move(gp));
    const Complex f1 = normalized_trace(phased.compile_unitary(x, theta));
    CHECK(std::abs(f1 - f0 * std::exp(Complex(0, phi))) < 1e-13);
}

TEST_CASE("every parameter slot is live") {
    RngStream rng(31);
    for (const int ansatz : {1, 2}) {
        const CircuitSpec spec = univariate_trace_circuit(2, 1, ansatz);
        const std::vector<double> x{0.9};
        auto theta = random_parameters(spec.param_count(), rng);
        const CMat base = spec.compile_unitary(x, theta);
        for (int slot = 0; slot < spec.param_count(); ++slot) {
            theta[static_cast<size_t>(slot)] += 0.1;
            CHECK(max_abs(CMat(spec.compile_unitary(x, theta) - base)) > 1e-8);
            theta[static_cast<size_t>(slot)] -= 0.1;
        }
    }
}

TEST_CASE("slot-count mismatches are rejected") {
    const CircuitSpec spec = univariate_trace_circuit(2, 1, 1);
    const std::vector<double> x{0.1};
    const std::vector<double> bad_x{0.1, 0.2};
    const std::vector<double> theta(static_cast<size_t>(spec.param_count()), 0.0);
    std::vector<double> bad_theta(theta.size() + 1, 0.0);
    CHECK_THROWS_AS(spec.compile_unitary(bad_x, theta), std::invalid_argument);
    CHECK_THROWS_AS(spec.compile_unitary(x, bad_theta), std::invalid_argument);
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("circuit JSON round trip") {
    RngStream rng(37);
    for (const CircuitSpec& spec :
         {univariate_trace_circuit(3, 2, 1), univariate_trace_circuit(2, 1, 2),
          zz_classifier_circuit(2, 2, 1)}) {
        const std::string text = circuit_to_json(spec);
        const CircuitSpec back = circuit_from_json(text);
        CHECK(back.n() == spec.n());
        CHECK(back.param_count() == spec.param_count());
        CHECK(back.feature_dim() == spec.feature_dim());
        std::vector<double> x(static_cast<size_t>(spec.feature_dim()));
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        const auto theta = random_parameters(spec.param_count(), rng);
        CHECK(max_abs(CMat(back.compile_unitary(x, theta) - spec.compile_unitary(x, theta))) <
              1e-13);
    }
    CHECK_THROWS_AS(circuit_from_json("{\"n\":1,\"d\":0,\"blocks\":[{\"type\":\"nope\"}]}"),
                    std::invalid_argument);
}

TEST_CASE("commuting blocks reject non-commuting generators") {
    CHECK_THROWS_AS(commuting_pauli_block({PauliString("ZI"), PauliString("XI")}),
                    std::invalid_argument);
    CHECK_NOTHROW(commuting_pauli_block({PauliString("ZI"), PauliString("IZ")}));
}
