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

#include "dqc1lab/matrix.hpp"
#include "dqc1lab/pauli.hpp"
#include "dqc1lab/random_matrix.hpp"
#include "dqc1lab/rng.hpp"
#include "dqc1lab/sym_eig.hpp"
#include "helpers.hpp"

using namespace dqc1lab;
namespace oracle = dqc1lab::testing;

TEST_CASE("kron identity and diagonal cases") {
    const CMat i2 = identity(2);
    CHECK(max_abs(CMat(kron(i2, i2) - identity(4))) == 0.0);

    const CMat zi = kron(pauli_matrix('Z'), i2);
    CMat expected = CMat::Zero(4, 4);
    expected.diagonal() << 1, 1, -1, -1;
    CHECK(max_abs(CMat(zi - expected)) == 0.0);
}

TEST_CASE("kron entries follow the index formula") {
    RngStream rng(11);
    const CMat a = oracle::random_matrix(2, rng);
    const CMat b = oracle::random_matrix(2, rng);
    const CMat k = kron(a, b);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int p = 0; p < 2; ++p) {
                for (int q = 0; q < 2; ++q) {
                    CHECK(std::abs(k(i * 2 + p, j * 2 + q) - a(i, j) * b(p, q)) == 0.0);
                }
            }
        }
    }
    CHECK_THROWS_AS(kron(CMat::Zero(2, 3), a), std::invalid_argument);
}

TEST_CASE("pauli rotations in closed form") {
    CHECK(max_abs(CMat(pauli_rotation(PauliString("Z"), 0.0) - identity(2))) == 0.0);

    const CMat rz = pauli_rotation(PauliString("Z"), std::numbers::pi / 2);
    CMat expected = CMat::Zero(2, 2);
    expected(0, 0) = Complex(0, -1);
    expected(1, 1) = Complex(0, 1);
    CHECK(max_abs(CMat(rz - expected)) < 1e-15);

    const PauliString xx("XX");
    const CMat direct = pauli_rotation(xx, 0.3);
    const CMat reference = oracle::expm(Complex(0, -0.3) * oracle::dense_pauli_string("XX"));
    CHECK(max_abs(CMat(direct - reference)) < 1e-12);
}

TEST_CASE("pauli rotations form a one-parameter group") {
    RngStream rng(3);
    for (const std::string letters : {"X", "ZY", "XIZ", "YYX"}) {
        const PauliString p(letters);
        const double t1 = rng.uniform(-3.0, 3.0);
        const double t2 = rng.uniform(-3.0, 3.0);
        const CMat lhs = pauli_rotation(p, t1) * pauli_rotation(p, t2);
        const CMat rhs = pauli_rotation(p, t1 + t2);
        CHECK(max_abs(CMat(lhs - rhs)) < 1e-12);
    }
}

TEST_CASE("pauli string basics") {
    const PauliString p("XYZI");
    CHECK(p.size() == 4);
    CHECK_FALSE(p.is_identity());
    CHECK(PauliString("III").is_identity());
    CHECK_THROWS_AS(PauliString("AB"), std::invalid_argument);
    CHECK_THROWS_AS(PauliString(""), std::invalid_argument);

    const CMat m = p.matrix();
    CHECK(is_hermitian(m));
    CHECK(is_unitary(m));
    CHECK(std::abs(m.trace()) < 1e-14);
    CHECK(std::abs(PauliString("II").matrix().trace() - Complex(4, 0)) < 1e-14);
}

TEST_CASE("pauli commutation matches the dense commutator") {
    RngStream rng(17);
    const std::vector<std::string> pool{"XX", "YI", "ZZ", "XY", "IZ", "YX"};
    for (const auto& a : pool) {
        for (const auto& b : pool) {
            const CMat ma = oracle::dense_pauli_string(a);
            const CMat mb = oracle::dense_pauli_string(b);
            const bool dense_commute = max_abs(CMat(ma * mb - mb * ma)) < 1e-12;
            CHECK(PauliString(a).commutes_with(PauliString(b)) == dense_commute);
        }
    }
}

TEST_CASE("haar draws are unitary and seed-deterministic") {
    RngStream rng(42);
    const CMat u = haar_unitary(3, rng);
    CHECK(is_unitary(u, 1e-12));

    RngStream a(7), b(7);
    const CMat ua = haar_unitary(2, a);
    const CMat ub = haar_unitary(2, b);
    CHECK(max_abs(CMat(ua - ub)) == 0.0);  // bit-identical

    RngStream c(8);
    CHECK(max_abs(CMat(ua - haar_unitary(2, c))) > 1e-3);
}

TEST_CASE("haar trace moments") {
    RngStream rng(123);
    const int samples = 10000;
    Complex mean(0, 0);
    double second = 0.0;
    for (int s = 0; s < samples; ++s) {
        const CMat u = haar_unitary(2, rng);
        const Complex tr = u.trace();
        mean += tr;
        second += std::norm(tr);
    }
    mean /= static_cast<double>(samples);
    second /= static_cast<double>(samples);
    CHECK(std::abs(second - 1.0) < 0.05);                          // E |tr U|^2 = 1
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(double(samples)));     // E tr U = 0
}

TEST_CASE("sym_eig on a diagonal matrix") {
    RMat m = RMat::Zero(3, 3);
    m.diagonal() << 3, 1, 2;
    const SymEig eig = sym_eig(m);
    CHECK(eig.values(0) == Catch::Approx(3.0).margin(1e-12));
    CHECK(eig.values(1) == Catch::Approx(2.0).margin(1e-12));
    CHECK(eig.values(2) == Catch::Approx(1.0).margin(1e-12));
    // Axis eigenvectors up to sign.
    CHECK(std::abs(eig.vectors(0, 0)) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(eig.vectors(2, 1)) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(eig.vectors(1, 2)) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("sym_eig reconstructs random symmetric matrices") {
    RngStream rng(5);
    RMat m(6, 6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j <= i; ++j) {
            m(i, j) = rng.normal();
            m(j, i) = m(i, j);
        }
    }
    const SymEig eig = sym_eig(m);
    const RMat rebuilt = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-9);
    const RMat gram = eig.vectors.transpose() * eig.vectors;
    CHECK((gram - RMat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i + 1 < 6; ++i) CHECK(eig.values(i) >= eig.values(i + 1));

    const SymEig id = sym_eig(RMat::Identity(4, 4));
    const RMat id_rebuilt = id.vectors * id.values.asDiagonal() * id.vectors.transpose();
    CHECK((id_rebuilt - RMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    RMat bad = m;
    bad(0, 1) += 1.0;
    CHECK_THROWS_AS(sym_eig(bad), std::invalid_argument);
}

TEST_CASE("trace is cyclic") {
    RngStream rng(9);
    const CMat a = oracle::random_matrix(5, rng);
    const CMat b = oracle::random_matrix(5, rng);
    CHECK(std::abs(CMat(a * b).trace() - CMat(b * a).trace()) < 1e-12);
}

TEST_CASE("density matrix validation") {
    RngStream rng(31);
    const CMat rho = random_density(4, rng);
    CHECK(is_density_matrix(rho, 1e-10));
    CHECK_FALSE(is_density_matrix(2.0 * rho));
    CHECK_FALSE(is_density_matrix(oracle::random_matrix(4, rng)));
    CHECK(is_hermitian(random_hermitian(4, rng), 1e-12));
}

TEST_CASE("qubit_count checks dimensions") {
    CHECK(qubit_count(identity(8)) == 3);
    CHECK_THROWS_AS(qubit_count(CMat::Zero(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(qubit_count(CMat::Zero(2, 4)), std::invalid_argument);
}

TEST_CASE("rng child streams are independent and reproducible") {
    RngStream root(99);
    RngStream c0 = root.child(0);
    RngStream c1 = root.child(1);
    CHECK(c0.next_u64() != c1.next_u64());
    RngStream again = RngStream(99).child(0);
    RngStream c0b = root.child(0);
    CHECK(again.next_u64() == c0b.next_u64());

    RngStream u(4);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    CHECK_THROWS_AS(u.uniform_int(0), std::invalid_argument);
}
