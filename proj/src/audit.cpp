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

#include "json_format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace eqforce {

bool AuditReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AuditCheck &c) { return c.pass; });
}

void AuditReport::add(std::string name, double max_deviation, int trials) {
    checks.push_back({std::move(name), max_deviation, trials, max_deviation < tolerance});
}

void AuditReport::merge(const AuditReport &other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::string AuditReport::to_json() const {
    nlohmann::ordered_json j;
    j["tolerance"] = tolerance;
    j["all_pass"] = all_pass();
    auto arr = nlohmann::ordered_json::array();
    for (const auto &c : checks) {
        nlohmann::ordered_json item;
        item["name"] = c.name;
        item["max_deviation"] = c.max_deviation;
        item["trials"] = c.trials;
        item["pass"] = c.pass;
        arr.push_back(std::move(item));
    }
    j["checks"] = std::move(arr);
    return detail::to_json_string(j);
}

std::string AuditReport::to_text() const {
    std::ostringstream out;
    for (const auto &c : checks) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-4s %-40s max_dev=%.3e trials=%d\n",
                      c.pass ? "ok" : "FAIL", c.name.c_str(), c.max_deviation, c.trials);
        out << line;
    }
    out << (all_pass() ? "all checks passed" : "some checks FAILED") << '\n';
    return out.str();
}

ModelInput random_model_input(System system, std::mt19937_64 &rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    auto draw = [&] { return Vector3(u(rng), u(rng), u(rng)); };
    ModelInput in;
    switch (system) {
    case System::diatomic: {
        const Vector3 x = draw();
        in.coords = {x, -x};
        break;
    }
    case System::triatomic:
        in.coords = {draw(), draw()};
        break;
    case System::dimer:
        for (int a = 0; a < 6; ++a) {
            in.coords.push_back(draw());
        }
        in.coords[3] = -in.coords[0];
        break;
    }
    return in;
}

EulerRotation random_rotation(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    EulerRotation r;
    r.psi = u(rng);
    r.theta = u(rng);
    r.phi = u(rng);
    return r;
}

namespace {

ModelInput transformed(const ModelInput &in, const Mat3<double> &r) {
    ModelInput out;
    for (const auto &x : in.coords) {
        out.coords.push_back(r * x);
    }
    return out;
}

ModelInput permuted(const ModelInput &in, std::initializer_list<int> order) {
    ModelInput out;
    for (int i : order) {
        out.coords.push_back(in.coords[static_cast<std::size_t>(i)]);
    }
    return out;
}

/// Dense n-qubit operator of a local matrix on `targets`.
CMatrix<double> embed(int n, const std::vector<int> &targets, const CMatrix<double> &m) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix<double> out = CMatrix<double>::Identity(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        CVector<double> col = out.col(k);
        kernels::apply_local<double>(col, n, targets, m);
        out.col(k) = col;
    }
    return out;
}

double max_abs(const CMatrix<double> &m) { return m.cwiseAbs().maxCoeff(); }

CMatrix<double> commutator(const CMatrix<double> &a, const CMatrix<double> &b) {
    return a * b - b * a;
}

CMatrix<double> heisenberg_dense(int n, int i, int j) {
    return embed(n, {i, j}, exchange_matrix<double>());
}

Vector3 random_vector(std::mt19937_64 &rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

} // namespace

AuditReport audit_invariance(const ArchitectureSpec &spec, const WeightSet &weights,
                             int trials, std::uint64_t seed, double tolerance) {
    spec.validate();
    weights.validate(spec);
    AuditReport report;
    report.tolerance = tolerance;
    std::mt19937_64 rng(seed);

    auto f = [&](const ModelInput &in) { return evaluate(spec, weights, in); };

    double rot = 0.0;
    for (int t = 0; t < trials; ++t) {
        const ModelInput in = random_model_input(spec.system, rng);
        EulerRotation g = random_rotation(rng);
        if (spec.symmetry_breaking) {
            g.psi = 0.0;
            g.phi = 0.0;
        }
        rot = std::max(rot, std::abs(f(transformed(in, rotation_rep_data<double>(g))) - f(in)));
    }
    report.add(spec.symmetry_breaking ? "rotation_z_invariance" : "rotation_invariance", rot,
               trials);

    if (spec.system == System::triatomic) {
        double dev = 0.0;
        for (int t = 0; t < trials; ++t) {
            const ModelInput in = random_model_input(spec.system, rng);
            dev = std::max(dev, std::abs(f(permuted(in, {1, 0})) - f(in)));
        }
        report.add("hydrogen_swap_invariance", dev, trials);
    }

    if (spec.system == System::dimer) {
        double h1 = 0.0, h2 = 0.0, mol = 0.0, refl = 0.0, combo = 0.0;
        for (int t = 0; t < trials; ++t) {
            const ModelInput in = random_model_input(spec.system, rng);
            const double f0 = f(in);
            h1 = std::max(h1, std::abs(f(permuted(in, {0, 2, 1, 3, 4, 5})) - f0));
            h2 = std::max(h2, std::abs(f(permuted(in, {0, 1, 2, 3, 5, 4})) - f0));
            mol = std::max(mol, std::abs(f(permuted(in, {3, 4, 5, 0, 1, 2})) - f0));
            refl = std::max(refl, std::abs(f(transformed(in, -Mat3<double>::Identity())) - f0));
            EulerRotation g = random_rotation(rng);
            if (spec.symmetry_breaking) {
                g.psi = 0.0;
                g.phi = 0.0;
            }
            const ModelInput moved =
                transformed(permuted(in, {3, 5, 4, 0, 2, 1}), -rotation_rep_data<double>(g));
            combo = std::max(combo, std::abs(f(moved) - f0));
        }
        report.add("hydrogen_swap_invariance_molecule_1", h1, trials);
        report.add("hydrogen_swap_invariance_molecule_2", h2, trials);
        report.add("molecule_swap_invariance", mol, trials);
        report.add("reflection_invariance", refl, trials);
        report.add("combined_group_invariance", combo, trials);
    }
    return report;
}

AuditReport audit_equivariance(int trials, std::uint64_t seed, double tolerance) {
    AuditReport report;
    report.tolerance = tolerance;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coupling(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> scale(0.1, 3.0);

    const CMatrix<double> i2 = CMatrix<double>::Identity(2, 2);
    const CMatrix<double> z = pauli_matrix<double>(Pauli::Z);

    double enc = 0.0, enc_anc = 0.0, refl = 0.0, spin_rot = 0.0, circuit = 0.0;
    for (int t = 0; t < trials; ++t) {
        const EulerRotation g = random_rotation(rng);
        const CMatrix<double> r = euler_matrix<double>(g);
        const Mat3<double> rd = rotation_rep_data<double>(g);
        const Vector3 x = random_vector(rng, 2.0);
        const double alpha = scale(rng);

        enc = std::max(enc, max_abs(encoding_matrix<double>(rd * x, alpha, false) -
                                    r * encoding_matrix<double>(x, alpha, false) * r.adjoint()));
        const CMatrix<double> ri = kron(r, i2);
        enc_anc = std::max(enc_anc,
                           max_abs(encoding_matrix<double>(rd * x, alpha, true) -
                                   ri * encoding_matrix<double>(x, alpha, true) * ri.adjoint()));
        const CMatrix<double> iz = kron(i2, z);
        refl = std::max(refl, max_abs(encoding_matrix<double>(Vector3(-x), alpha, true) -
                                      iz * encoding_matrix<double>(x, alpha, true) * iz));

        const CMatrix<double> rr = kron(r, r);
        spin_rot = std::max(spin_rot, max_abs(commutator(rr, heisenberg_matrix<double>(coupling(rng)))));

        // Diatomic model unitary: M(rX) = R^{x4} M(X) R^{x4 dagger}.
        ArchitectureSpec spec;
        spec.system = System::diatomic;
        spec.depth = 2;
        WeightSet w = WeightSet::zeros(spec);
        for (Eigen::Index c = 0; c < w.layer_weights.cols(); ++c) {
            w.layer_weights(0, c) = coupling(rng);
            w.layer_weights(1, c) = coupling(rng);
        }
        w.enc_scales[0] = alpha;
        const ModelInput in{{x, -x}};
        const ModelInput rin{{rd * x, -(rd * x)}};
        const CMatrix<double> m = circuit_unitary(build_circuit(spec, w, in));
        const CMatrix<double> mr = circuit_unitary(build_circuit(spec, w, rin));
        const CMatrix<double> r4 = kron(kron(rr, r), r);
        circuit = std::max(circuit, max_abs(mr - r4 * m * r4.adjoint()));
    }
    report.add("encoding_rotation_conjugation", enc, trials);
    report.add("reflect_encoding_rotation_conjugation", enc_anc, trials);
    report.add("reflection_conjugation", refl, trials);
    report.add("heisenberg_commutes_with_rotations", spin_rot, trials);
    report.add("circuit_rotation_equivariance", circuit, trials);

    double spin = 0.0;
    const CMatrix<double> s = exchange_matrix<double>();
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        const CMatrix<double> total =
            kron(pauli_matrix<double>(p), i2) + kron(i2, pauli_matrix<double>(p));
        spin = std::max(spin, max_abs(commutator(total, s)));
    }
    report.add("total_spin_commutes_with_exchange", spin, 3);

    // SWAP identities on three and four qubits.
    const CMatrix<double> swap2 = swap_matrix<double>();
    const CMatrix<double> pauli_sum =
        0.5 * (CMatrix<double>::Identity(4, 4) + kron(pauli_matrix<double>(Pauli::X),
                                                      pauli_matrix<double>(Pauli::X)) +
               kron(pauli_matrix<double>(Pauli::Y), pauli_matrix<double>(Pauli::Y)) +
               kron(z, z));
    report.add("swap_pauli_decomposition", max_abs(swap2 - pauli_sum), 1);

    double same_pair = 0.0, paired = 0.0, relabel = 0.0;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (i == j) {
                continue;
            }
            const int l = 6 - i - j;
            const CMatrix<double> sw = embed(3, {i, j}, swap2);
            same_pair = std::max(same_pair, max_abs(commutator(sw, heisenberg_dense(3, i, j))));
            paired = std::max(paired, max_abs(commutator(sw, heisenberg_dense(3, i, l)) +
                                              commutator(sw, heisenberg_dense(3, l, j))));
            relabel = std::max(relabel, max_abs(sw * heisenberg_dense(3, i, l) * sw -
                                                heisenberg_dense(3, j, l)));
        }
    }
    report.add("swap_commutes_with_own_exchange", same_pair, 6);
    report.add("swap_paired_exchange_commutator", paired, 6);
    report.add("swap_relabels_exchange", relabel, 6);

    // Hydrogen swap (2,4) and molecule-style swap (1,2)(3,4) on the 4-qubit block.
    double block = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double j1 = coupling(rng), j2 = coupling(rng), j3 = coupling(rng);
        const CMatrix<double> u = embed(4, {1, 4}, heisenberg_matrix<double>(j3)) *
                                  embed(4, {2, 3}, heisenberg_matrix<double>(j3)) *
                                  embed(4, {3, 4}, heisenberg_matrix<double>(j2)) *
                                  embed(4, {1, 2}, heisenberg_matrix<double>(j1));
        const CMatrix<double> p = embed(4, {1, 2}, swap2) * embed(4, {3, 4}, swap2);
        block = std::max(block, max_abs(commutator(p, u)));
    }
    report.add("pair_swap_commutes_with_triatomic_block", block, trials);

    // Singlet: eigenstate of exchange (-3), SWAP (-1), rotations (+1), RH (e^{3iJ}).
    const StateVector<double> singlet = prepare_singlet_pairs<double>(2, {{1, 2}});
    const CVector<double> &sv = singlet.amplitudes();
    double eig = max_abs(s * sv + 3.0 * sv);
    eig = std::max(eig, max_abs(swap2 * sv + sv));
    for (int t = 0; t < trials; ++t) {
        const CMatrix<double> r = euler_matrix<double>(random_rotation(rng));
        eig = std::max(eig, max_abs(kron(r, r) * sv - sv));
        const double j = coupling(rng);
        eig = std::max(eig, max_abs(heisenberg_matrix<double>(j) * sv -
                                    std::exp(Complex<double>(0.0, 3.0 * j)) * sv));
    }
    report.add("singlet_eigenstate", eig, trials);
    return report;
}

} // namespace eqforce
