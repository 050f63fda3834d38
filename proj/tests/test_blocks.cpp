// Copyright 2026 The eqforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "eqforce/blocks.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace eqforce {
namespace {

using oracle::CMat;
using oracle::max_abs;
const std::complex<double> I(0.0, 1.0);

Vector3 random_vec(std::mt19937_64 &rng, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

EulerRotation random_euler(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> a(0.0, 2.0 * M_PI);
    return {a(rng), a(rng), a(rng)};
}

CMat exchange_generator() {
    CMat m = CMat::Zero(4, 4);
    for (char p : {'X', 'Y', 'Z'}) {
        m += oracle::kron(oracle::pauli(p), oracle::pauli(p));
    }
    return m;
}

/// sigma_i . sigma_j on an n-qubit register.
CMat dense_exchange(int n, int i, int j) {
    CMat m = CMat::Zero(1 << n, 1 << n);
    for (char p : {'X', 'Y', 'Z'}) {
        m += oracle::on_qubit(n, i, oracle::pauli(p)) * oracle::on_qubit(n, j, oracle::pauli(p));
    }
    return m;
}

TEST(Heisenberg, ZeroCouplingIsIdentity) {
    EXPECT_LT(max_abs(heisenberg_gate(1, 2, 0.0).matrix() - oracle::identity(4)), 1e-15);
}

TEST(Heisenberg, HalfPiIsGlobalPhase) {
    EXPECT_LT(max_abs(heisenberg_gate(1, 2, M_PI / 2).matrix() + I * oracle::identity(4)),
              1e-15);
}

TEST(Heisenberg, MatchesMatrixExponential) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double j = u(rng);
        const CMat ref = oracle::expm(-I * j * exchange_generator());
        EXPECT_LT(max_abs(heisenberg_gate(1, 2, j).matrix() - ref), 1e-12);
    }
}

TEST(Heisenberg, RejectsEqualQubits) {
    EXPECT_THROW(heisenberg_gate(2, 2, 0.1), std::invalid_argument);
}

TEST(Heisenberg, ExchangeSymmetricInQubitOrder) {
    const double j = 0.37;
    const auto a = oracle::dense_gate(4, heisenberg_gate(1, 3, j));
    const auto b = oracle::dense_gate(4, heisenberg_gate(3, 1, j));
    EXPECT_LT(max_abs(a - b), 1e-15);
}

TEST(Su2Encoding, ZeroInputIsIdentity) {
    EXPECT_EQ(su2_encoding_gate(1, Vector3::Zero().eval(), 1.3).matrix(), oracle::identity(2));
}

TEST(Su2Encoding, AxisAlignedClosedForm) {
    const CMat m = su2_encoding_gate(1, Vector3(0, 0, M_PI / 2), 1.0).matrix();
    EXPECT_LT(max_abs(m + I * oracle::pauli('Z')), 1e-15);
}

TEST(Su2Encoding, MatchesMatrixExponential) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> a(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector3 x = random_vec(rng);
        const double alpha = a(rng);
        const CMat ref = oracle::expm(-I * alpha * sigma_dot<double>(x));
        EXPECT_LT(max_abs(su2_encoding_gate(1, x, alpha).matrix() - ref), 1e-13);
    }
}

TEST(ReflectEncoding, ZeroInputIsIdentity) {
    EXPECT_EQ(reflect_encoding_gate(1, 7, Vector3::Zero().eval(), 0.8).matrix(),
              oracle::identity(4));
}

TEST(ReflectEncoding, MatchesMatrixExponential) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector3 x = random_vec(rng);
        const double alpha = a(rng);
        const CMat gen = oracle::kron(sigma_dot<double>(x), oracle::pauli('X'));
        EXPECT_LT(max_abs(reflect_encoding_gate(1, 2, x, alpha).matrix() -
                          oracle::expm(-I * alpha * gen)),
                  1e-12);
    }
}

TEST(ReflectEncoding, NegatedInputIsAncillaZConjugation) {
    std::mt19937_64 rng(4);
    const CMat zanc = oracle::kron(oracle::identity(2), oracle::pauli('Z'));
    for (int trial = 0; trial < 20; ++trial) {
        const Vector3 x = random_vec(rng);
        const CMat plus = reflect_encoding_gate(1, 2, x, 0.9).matrix();
        const CMat minus = reflect_encoding_gate(1, 2, (-x).eval(), 0.9).matrix();
        EXPECT_LT(max_abs(minus - zanc * plus * zanc), 1e-13);
    }
}

TEST(ReflectEncoding, RejectsAncillaEqualToQubit) {
    EXPECT_THROW(reflect_encoding_gate(3, 3, Vector3(1, 0, 0), 1.0), std::invalid_argument);
}

TEST(SymmetryBreaking, ZeroAngleIsIdentity) {
    const std::vector<int> qs{1, 2, 3, 4};
    for (const auto &g : symmetry_breaking_layer<double>(qs, 0.0)) {
        EXPECT_EQ(g.matrix(), oracle::identity(2));
    }
}

TEST(SymmetryBreaking, FullTurnIsMinusIdentity) {
    const std::vector<int> qs{1, 2};
    const auto layer = symmetry_breaking_layer<double>(qs, 2.0 * M_PI);
    ASSERT_EQ(layer.size(), 2u);
    for (const auto &g : layer) {
        EXPECT_LT(max_abs(g.matrix() + oracle::identity(2)), 1e-15);
    }
}

TEST(SymmetryBreaking, QuarterTurnDiagonal) {
    const std::vector<int> qs{1};
    const auto layer = symmetry_breaking_layer<double>(qs, M_PI / 2);
    CMat ref = CMat::Zero(2, 2);
    ref(0, 0) = std::exp(-I * M_PI / 4.0);
    ref(1, 1) = std::exp(I * M_PI / 4.0);
    EXPECT_LT(max_abs(layer[0].matrix() - ref), 1e-15);
    EXPECT_LT(max_abs(layer[0].matrix() - oracle::expm(-I * (M_PI / 4) * oracle::pauli('Z'))),
              1e-13);
}

TEST(SymmetryBreaking, RejectsEmptyQubitList) {
    EXPECT_THROW(symmetry_breaking_layer<double>(std::span<const int>{}, 0.1),
                 std::invalid_argument);
}

TEST(RotationRep, ZeroAnglesAreIdentity) {
    const std::vector<int> qs{1, 2, 3};
    for (const auto &g : rotation_rep_hilbert<double>(qs, {})) {
        EXPECT_LT(max_abs(g.matrix() - oracle::identity(2)), 1e-15);
    }
    EXPECT_EQ(rotation_rep_data(EulerRotation{}), Mat3<double>::Identity());
}

TEST(RotationRep, PiAboutXIsMinusIX) {
    const std::vector<int> qs{1};
    const auto g = rotation_rep_hilbert<double>(qs, {M_PI, 0.0, 0.0});
    EXPECT_LT(max_abs(g[0].matrix() + I * oracle::pauli('X')), 1e-15);
}

TEST(RotationRep, DataQuarterTurnAboutX) {
    const Vector3 y = rotation_rep_data(EulerRotation{0.0, M_PI / 2, 0.0}) * Vector3(0, 1, 0);
    // theta rotates about z in X-Z-X order; psi rotates about x.
    const Vector3 z = rotation_rep_data(EulerRotation{M_PI / 2, 0.0, 0.0}) * Vector3(0, 1, 0);
    EXPECT_LT((z - Vector3(0, 0, 1)).norm(), 1e-15);
    EXPECT_LT((y - Vector3(-1, 0, 0)).norm(), 1e-15);
}

TEST(RotationRep, DataMatricesAreProperOrthogonal) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat3<double> r = rotation_rep_data(random_euler(rng));
        EXPECT_LT((r.transpose() * r - Mat3<double>::Identity()).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
    }
}

TEST(RotationRep, EncodingConjugationMatchesDataRotation) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const EulerRotation rot = random_euler(rng);
        const Vector3 x = random_vec(rng);
        const CMat r = euler_matrix<double>(rot);
        const Vector3 rx = rotation_rep_data(rot) * x;
        const CMat lhs = su2_encoding_gate(1, rx, 0.7).matrix();
        const CMat rhs = r * su2_encoding_gate(1, x, 0.7).matrix() * r.adjoint();
        EXPECT_LT(max_abs(lhs - rhs), 1e-12);
    }
}

TEST(RotationRep, EulerMatrixMatchesExponentials) {
    const EulerRotation rot{0.3, 1.1, -0.4};
    const CMat ref = oracle::expm(-I * 0.15 * oracle::pauli('X')) *
                     oracle::expm(-I * 0.55 * oracle::pauli('Z')) *
                     oracle::expm(I * 0.2 * oracle::pauli('X'));
    EXPECT_LT(max_abs(euler_matrix<double>(rot) - ref), 1e-13);
}

TEST(SwapRep, SwapsBasisState) {
    const auto g = swap_rep<double>({{1, 2}});
    const auto s = apply_gate(init_basis_state(2, {0, 1}), g[0]);
    EXPECT_EQ(s[2], std::complex<double>(1.0));
}

TEST(SwapRep, PauliDecomposition) {
    CMat half = CMat::Zero(4, 4);
    for (char p : {'I', 'X', 'Y', 'Z'}) {
        half += 0.5 * oracle::kron(oracle::pauli(p), oracle::pauli(p));
    }
    EXPECT_LT(max_abs(swap_matrix<double>() - half), 1e-15);
}

TEST(SwapRep, PairSwapFixesSingletProduct) {
    const auto s = prepare_singlet_pairs(4, {{1, 2}, {3, 4}});
    const auto gates = swap_rep<double>({{1, 2}, {3, 4}});
    EXPECT_TRUE(same_state(s, apply_gates<double>(s, gates)));
}

TEST(SwapRep, RejectsOverlappingPairs) {
    EXPECT_THROW(swap_rep<double>({{1, 2}, {2, 3}}), std::invalid_argument);
}

TEST(ReflectionRep, ZFixesZeroAndSquaresToIdentity) {
    const auto z = reflection_rep<double>(1);
    const auto s = apply_gate(init_basis_state(1, {0}), z);
    EXPECT_EQ(s[0], std::complex<double>(1.0));
    EXPECT_EQ(z.matrix() * z.matrix(), oracle::identity(2));
}

TEST(Commutators, TotalSpinCommutesWithEveryExchange) {
    for (char p : {'X', 'Y', 'Z'}) {
        CMat total = CMat::Zero(16, 16);
        for (int q = 1; q <= 4; ++q) {
            total += oracle::on_qubit(4, q, oracle::pauli(p));
        }
        for (int i = 1; i <= 4; ++i) {
            for (int j = i + 1; j <= 4; ++j) {
                const CMat h = dense_exchange(4, i, j);
                EXPECT_LT(max_abs(total * h - h * total), 1e-14);
            }
        }
    }
}

TEST(Commutators, SwapAndHeisenberg) {
    auto comm = [](const CMat &a, const CMat &b) { return CMat(a * b - b * a); };
    auto swap = [](int i, int j) {
        return oracle::embed(4, {i, j}, swap_matrix<double>());
    };
    EXPECT_LT(max_abs(comm(swap(1, 2), dense_exchange(4, 1, 2))), 1e-13);
    EXPECT_LT(max_abs(comm(swap(1, 2), dense_exchange(4, 3, 4))), 1e-13);
    EXPECT_LT(max_abs(comm(swap(1, 2), dense_exchange(4, 1, 3)) +
                      comm(swap(1, 2), dense_exchange(4, 3, 2))),
              1e-13);
    EXPECT_GT(max_abs(comm(swap(1, 2), dense_exchange(4, 1, 3))), 0.1);
}

TEST(Gates, AllFamiliesUnitary) {
    std::mt19937_64 rng(9);
    const Vector3 x = random_vec(rng);
    EXPECT_LT(unitarity_defect(heisenberg_gate(1, 2, 0.77).matrix()), 1e-12);
    EXPECT_LT(unitarity_defect(su2_encoding_gate(1, x, 1.9).matrix()), 1e-12);
    EXPECT_LT(unitarity_defect(reflect_encoding_gate(1, 2, x, 1.9).matrix()), 1e-12);
    EXPECT_LT(unitarity_defect(euler_matrix<double>(random_euler(rng))), 1e-12);
}

} // namespace
} // namespace eqforce
