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
#include "eqforce/audit.hpp"
#include "eqforce/autodiff.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace eqforce {
namespace {

using oracle::CMat;
using oracle::make_spec;
using oracle::max_abs;
const std::complex<double> I(0.0, 1.0);

void expect_close(double got, double want, double rel = 1e-5, double floor = 1e-8) {
    EXPECT_LE(std::abs(got - want), std::max(floor, rel * std::abs(want)))
        << "got " << got << " want " << want;
}

/// Copy of `c` with one model coordinate shifted; encoding gates are rebuilt
/// directly so the centering constraint does not apply.
Circuit shifted(const Circuit &c, std::size_t atom, int k, double h) {
    Circuit out = c;
    for (auto &op : out.ops) {
        if (op.role != OpRole::encoding || op.atom != static_cast<int>(atom)) {
            continue;
        }
        op.x[k] += h;
        op.gate = GateAction<double>(op.gate.targets(),
                                     encoding_matrix<double>(op.x, op.parameter, op.with_ancilla));
    }
    return out;
}

double coordinate_fd(const Circuit &c, std::size_t atom, int k, double h) {
    return (oracle::dense_evaluate(shifted(c, atom, k, h)) -
            oracle::dense_evaluate(shifted(c, atom, k, -h))) /
           (2 * h);
}

const std::vector<ArchitectureSpec> &all_specs() {
    static const std::vector<ArchitectureSpec> specs{
        make_spec(System::diatomic, 3), make_spec(System::triatomic, 2, 2, true),
        make_spec(System::dimer, 2, 1, true)};
    return specs;
}

TEST(GateDerivative, HeisenbergAtZeroIsMinusIExchange) {
    CMat ex = CMat::Zero(4, 4);
    for (char p : {'X', 'Y', 'Z'}) {
        ex += oracle::kron(oracle::pauli(p), oracle::pauli(p));
    }
    EXPECT_LT(max_abs(heisenberg_derivative(0.0) + I * ex), 1e-15);
}

TEST(GateDerivative, EncodingAtOriginUsesSeriesLimit) {
    const CMat d = encoding_coordinate_derivative(Vector3::Zero(), 0.7, 2, false);
    EXPECT_LT(max_abs(d + I * 0.7 * oracle::pauli('Z')), 1e-15);
    const CMat da = encoding_coordinate_derivative(Vector3::Zero(), 0.7, 0, true);
    EXPECT_LT(max_abs(da + I * 0.7 * oracle::kron(oracle::pauli('X'), oracle::pauli('X'))),
              1e-15);
}

TEST(GateDerivative, AllFamiliesMatchFiniteDifferences) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const double j = u(rng);
        EXPECT_LT(max_abs(heisenberg_derivative(j) -
                          oracle::matrix_fd([](double p) { return heisenberg_matrix<double>(p); },
                                            j, h)),
                  1e-7);
        EXPECT_LT(max_abs(rz_derivative(j) -
                          oracle::matrix_fd([](double p) { return rz_matrix<double>(p); }, j, h)),
                  1e-7);
        const Vector3 x(u(rng), u(rng), u(rng));
        const double alpha = u(rng);
        for (bool anc : {false, true}) {
            EXPECT_LT(max_abs(encoding_scale_derivative(x, alpha, anc) -
                              oracle::matrix_fd(
                                  [&](double a) { return encoding_matrix<double>(x, a, anc); },
                                  alpha, h)),
                      1e-7);
            for (int k = 0; k < 3; ++k) {
                auto at = [&](double p) {
                    Vector3 y = x;
                    y[k] = p;
                    return encoding_matrix<double>(y, alpha, anc);
                };
                EXPECT_LT(max_abs(encoding_coordinate_derivative(x, alpha, k, anc) -
                                  oracle::matrix_fd(at, x[k], h)),
                          1e-7);
            }
        }
    }
}

TEST(GateDerivative, UnitaryTangentIsAntiHermitian) {
    const Vector3 x(0.4, -0.3, 0.9);
    const CMat u = encoding_matrix<double>(x, 1.2, true);
    const CMat du = encoding_coordinate_derivative(x, 1.2, 1, true);
    EXPECT_LT(max_abs(du.adjoint() * u + u.adjoint() * du), 1e-10);
}

TEST(GateDerivative, CircuitBindingsMatchOps) {
    std::mt19937_64 rng(2);
    const auto spec = make_spec(System::triatomic, 2, 2, true);
    const Circuit c = build_circuit(spec, oracle::random_weights(spec, rng),
                                    random_model_input(spec.system, rng));
    for (std::size_t k = 0; k < c.ops.size(); ++k) {
        const auto ds = gate_derivatives(c, k);
        const std::size_t expected = c.ops[k].role == OpRole::encoding ? 4u : 1u;
        EXPECT_EQ(ds.size(), expected);
        for (const auto &d : ds) {
            EXPECT_EQ(d.gate_index, k);
        }
    }
    EXPECT_THROW(gate_derivatives(c, c.ops.size()), std::out_of_range);
}

TEST(FiniteDiff, ScalarExamples) {
    const Eigen::VectorXd three = Eigen::VectorXd::Constant(1, 3.0);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    auto sq = [](const Eigen::VectorXd &v) { return v[0] * v[0]; };
    auto sn = [](const Eigen::VectorXd &v) { return std::sin(v[0]); };
    EXPECT_NEAR(finite_diff_oracle(sq, three, 1e-5)[0], 6.0, 1e-9);
    EXPECT_NEAR(finite_diff_oracle(sn, zero, 1e-5)[0], 1.0, 1e-10);
    EXPECT_THROW(finite_diff_oracle(sq, three, 0.0), std::invalid_argument);
}

TEST(GradWeights, ZeroPointHasVanishingEncodingScaleGradient) {
    for (const auto &spec : all_specs()) {
        ModelInput in;
        in.coords.assign(static_cast<std::size_t>(num_model_atoms(spec.system)), Vector3::Zero());
        const WeightSet w = WeightSet::zeros(spec);
        const Eigen::VectorXd g = grad_weights(spec, w, in);
        for (int a = 0; a < spec.num_encoding_scales(); ++a) {
            EXPECT_NEAR(g[encoding_scale_index(spec, a)], 0.0, 1e-14);
        }
    }
}

TEST(GradWeights, MatchesFiniteDifferences) {
    std::mt19937_64 rng(3);
    for (const auto &spec : all_specs()) {
        for (int trial = 0; trial < 20; ++trial) {
            const WeightSet w = oracle::random_weights(spec, rng);
            const ModelInput in = random_model_input(spec.system, rng);
            const Eigen::VectorXd g = grad_weights(spec, w, in);
            const Eigen::VectorXd fd = finite_diff_oracle(
                [&](const Eigen::VectorXd &p) {
                    return evaluate(spec, WeightSet::unflatten(spec, p), in);
                },
                w.flatten(), 1e-5);
            for (Eigen::Index i = 0; i < g.size(); ++i) {
                expect_close(g[i], fd[i]);
            }
        }
    }
}

TEST(GradWeights, SharedParameterEqualsSumOfSplitUses) {
    std::mt19937_64 rng(4);
    for (System sys : {System::triatomic, System::dimer}) {
        auto tied = make_spec(sys, 2, sys == System::dimer ? 1 : 2, true);
        auto untied = tied;
        untied.tie_weights = false;
        const WeightSet wt = oracle::random_weights(tied, rng);
        WeightSet wu = WeightSet::zeros(untied);
        const int per = tied.weights_per_block();
        for (int d = 0; d < tied.depth; ++d) {
            for (int b = 0; b < tied.blocks; ++b) {
                for (int k = 0; k < per; ++k) {
                    wu.layer_weights(d, b * (per + 1) + k) = wt.layer_weights(d, b * per + k);
                }
                const int shared = sys == System::dimer ? 0 : 2;
                wu.layer_weights(d, b * (per + 1) + per) = wt.layer_weights(d, b * per + shared);
            }
        }
        wu.sb_angles = wt.sb_angles;
        wu.enc_scales = wt.enc_scales;
        const ModelInput in = random_model_input(sys, rng);
        ASSERT_NEAR(evaluate(tied, wt, in), evaluate(untied, wu, in), 1e-13);
        const Eigen::VectorXd gt = grad_weights(tied, wt, in);
        const Eigen::VectorXd gu = grad_weights(untied, wu, in);
        for (int d = 0; d < tied.depth; ++d) {
            for (int b = 0; b < tied.blocks; ++b) {
                const int shared = sys == System::dimer ? 0 : 2;
                const double sum = gu[layer_weight_index(untied, d, b * (per + 1) + shared)] +
                                   gu[layer_weight_index(untied, d, b * (per + 1) + per)];
                EXPECT_NEAR(gt[layer_weight_index(tied, d, b * per + shared)], sum, 1e-12);
            }
        }
    }
}

TEST(GradInputs, MatchesFiniteDifferences) {
    std::mt19937_64 rng(5);
    for (const auto &spec : all_specs()) {
        for (int trial = 0; trial < 20; ++trial) {
            const WeightSet w = oracle::random_weights(spec, rng);
            const ModelInput in = random_model_input(spec.system, rng);
            const Circuit c = build_circuit(spec, w, in);
            const auto g = adjoint_gradient(c).inputs;
            for (std::size_t a = 0; a < in.coords.size(); ++a) {
                for (int k = 0; k < 3; ++k) {
                    expect_close(g[a][k], coordinate_fd(c, a, k, 1e-5));
                }
            }
        }
    }
}

TEST(GradInputs, OrthogonalToRigidRotations) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto &spec : {make_spec(System::diatomic, 3), make_spec(System::dimer, 2)}) {
        for (int trial = 0; trial < 10; ++trial) {
            const WeightSet w = oracle::random_weights(spec, rng);
            const ModelInput in = random_model_input(spec.system, rng);
            const auto g = grad_inputs(spec, w, in);
            const Vector3 omega(u(rng), u(rng), u(rng));
            double dir = 0.0;
            for (std::size_t a = 0; a < g.size(); ++a) {
                dir += g[a].dot(omega.cross(in.coords[a]));
            }
            EXPECT_LT(std::abs(dir), 1e-9);
        }
    }
}

TEST(GradInputs, SeriesBranchAtOrigin) {
    std::mt19937_64 rng(7);
    for (const auto &spec : all_specs()) {
        const WeightSet w = oracle::random_weights(spec, rng);
        ModelInput zero;
        zero.coords.assign(static_cast<std::size_t>(num_model_atoms(spec.system)),
                           Vector3::Zero());
        const auto g = grad_inputs(spec, w, zero);
        ModelInput nudged = zero;
        for (auto &x : nudged.coords) {
            x = Vector3::Constant(1e-9);
        }
        if (spec.system == System::diatomic) {
            nudged.coords[1] = -nudged.coords[0];
        }
        if (spec.system == System::dimer) {
            nudged.coords[3] = -nudged.coords[0];
        }
        const Circuit c = build_circuit(spec, w, nudged);
        for (std::size_t a = 0; a < g.size(); ++a) {
            for (int k = 0; k < 3; ++k) {
                ASSERT_TRUE(std::isfinite(g[a][k]));
                const double fd = coordinate_fd(c, a, k, 1e-5);
                EXPECT_NEAR(g[a][k], fd, 1e-4);
            }
        }
    }
}

TEST(GradInputs, FirstOrderErrorDecaysQuadratically) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n;
    const auto spec = make_spec(System::diatomic, 3);
    const WeightSet w = oracle::random_weights(spec, rng);
    const ModelInput in = random_model_input(spec.system, rng);
    const auto g = grad_inputs(spec, w, in);
    Eigen::VectorXd delta(6);
    for (int i = 0; i < 6; ++i) {
        delta[i] = n(rng);
    }
    Eigen::VectorXd grad(6);
    grad << g[0], g[1];
    const Circuit c = build_circuit(spec, w, in);
    const double f0 = evaluate(c);
    auto err = [&](double t) {
        Circuit moved = c;
        for (std::size_t atom = 0; atom < 2; ++atom) {
            for (int k = 0; k < 3; ++k) {
                moved = shifted(moved, atom, k, t * delta[3 * static_cast<Eigen::Index>(atom) + k]);
            }
        }
        return std::abs(evaluate(moved) - f0 - t * grad.dot(delta));
    };
    const double ratio = err(1e-2) / err(5e-3);
    EXPECT_NEAR(ratio, 4.0, 0.5);
}

TEST(Directional, MatchesFiniteDifferenceOfForceProjection) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    for (const auto &spec : all_specs()) {
        const WeightSet w = oracle::random_weights(spec, rng);
        const ModelInput in = random_model_input(spec.system, rng);
        std::vector<Vector3> v(in.coords.size());
        for (auto &x : v) {
            x = Vector3(n(rng), n(rng), n(rng));
        }
        const DirectionalGradient dg = directional_adjoint(build_circuit(spec, w, in), v);
        const auto g = grad_inputs(spec, w, in);
        double proj = 0.0;
        for (std::size_t a = 0; a < v.size(); ++a) {
            proj += v[a].dot(g[a]);
        }
        EXPECT_NEAR(dg.derivative, proj, 1e-12 * std::max(1.0, std::abs(proj)));
        EXPECT_NEAR(dg.value, evaluate(spec, w, in), 1e-13);
        const Eigen::VectorXd fd = finite_diff_oracle(
            [&](const Eigen::VectorXd &p) {
                const auto gi = grad_inputs(spec, WeightSet::unflatten(spec, p), in);
                double s = 0.0;
                for (std::size_t a = 0; a < v.size(); ++a) {
                    s += v[a].dot(gi[a]);
                }
                return s;
            },
            w.flatten(), 1e-5);
        for (Eigen::Index i = 0; i < fd.size(); ++i) {
            expect_close(dg.derivative_weights[i], fd[i], 1e-5, 1e-7);
        }
    }
}

} // namespace
} // namespace eqforce
