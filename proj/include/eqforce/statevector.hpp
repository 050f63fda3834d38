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

/**
 * @file
 * Dense statevector simulation for up to eight qubits.
 *
 * Qubits are numbered from 1. The basis ket |q1 q2 ... qN> is stored at
 * index sum_i q_i 2^(N-i), i.e. qubit 1 is the most significant bit.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eqforce {

inline constexpr int kMaxQubits = 8;

template <typename T> using Complex = std::complex<T>;
template <typename T>
using CVector = Eigen::Matrix<Complex<T>, Eigen::Dynamic, 1>;
template <typename T>
using CMatrix = Eigen::Matrix<Complex<T>, Eigen::Dynamic, Eigen::Dynamic>;

inline void check_qubit_count(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                    " outside 1.." +
                                    std::to_string(kMaxQubits));
    }
}

inline void check_qubit_index(int num_qubits, int qubit) {
    if (qubit < 1 || qubit > num_qubits) {
        throw std::invalid_argument("qubit index " + std::to_string(qubit) +
                                    " outside 1.." +
                                    std::to_string(num_qubits));
    }
}

/// Bit mask of `qubit` inside a basis index of a `num_qubits` register.
inline std::size_t qubit_mask(int num_qubits, int qubit) {
    return std::size_t{1} << static_cast<unsigned>(num_qubits - qubit);
}

template <typename T = double> class StateVector {
  public:
    StateVector(int num_qubits, CVector<T> amplitudes)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        check_qubit_count(num_qubits);
        if (amplitudes_.size() !=
            static_cast<Eigen::Index>(std::size_t{1} << num_qubits)) {
            throw std::invalid_argument(
                "amplitude count does not match 2^num_qubits");
        }
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    [[nodiscard]] const CVector<T> &amplitudes() const { return amplitudes_; }
    [[nodiscard]] Complex<T> operator[](std::size_t index) const {
        return amplitudes_[static_cast<Eigen::Index>(index)];
    }
    [[nodiscard]] T norm_squared() const { return amplitudes_.squaredNorm(); }

  private:
    int num_qubits_;
    CVector<T> amplitudes_;
};

/// Global-phase-insensitive comparison: |<a|b>| > 1 - tol.
template <typename T>
bool same_state(const StateVector<T> &a, const StateVector<T> &b,
                T tol = T(1e-12)) {
    if (a.num_qubits() != b.num_qubits()) {
        return false;
    }
    return std::abs(a.amplitudes().dot(b.amplitudes())) > T(1) - tol;
}

template <typename T = double>
StateVector<T> init_basis_state(int num_qubits, std::span<const int> bits) {
    check_qubit_count(num_qubits);
    if (static_cast<int>(bits.size()) != num_qubits) {
        throw std::invalid_argument("bitstring length must equal qubit count");
    }
    std::size_t index = 0;
    for (int q = 1; q <= num_qubits; ++q) {
        const int bit = bits[static_cast<std::size_t>(q - 1)];
        if (bit != 0 && bit != 1) {
            throw std::invalid_argument("bitstring entries must be 0 or 1");
        }
        if (bit == 1) {
            index |= qubit_mask(num_qubits, q);
        }
    }
    CVector<T> amps = CVector<T>::Zero(std::size_t{1} << num_qubits);
    amps[static_cast<Eigen::Index>(index)] = Complex<T>(1);
    return StateVector<T>(num_qubits, std::move(amps));
}

template <typename T = double>
StateVector<T> init_basis_state(int num_qubits,
                                std::initializer_list<int> bits) {
    return init_basis_state<T>(num_qubits,
                               std::span<const int>(bits.begin(), bits.size()));
}

/**
 * Tensor product of singlets (|0_i 1_j> - |1_i 0_j>)/sqrt(2) over `pairs`,
 * with the unpaired qubits set to `rest` (listed in increasing qubit order).
 * Amplitudes are assigned directly.
 */
template <typename T = double>
StateVector<T> prepare_singlet_pairs(int num_qubits,
                                     std::span<const std::pair<int, int>> pairs,
                                     std::span<const int> rest) {
    check_qubit_count(num_qubits);
    std::vector<bool> used(static_cast<std::size_t>(num_qubits) + 1, false);
    for (const auto &[i, j] : pairs) {
        check_qubit_index(num_qubits, i);
        check_qubit_index(num_qubits, j);
        if (i == j || used[static_cast<std::size_t>(i)] ||
            used[static_cast<std::size_t>(j)]) {
            throw std::invalid_argument("singlet pairs must be disjoint");
        }
        used[static_cast<std::size_t>(i)] = true;
        used[static_cast<std::size_t>(j)] = true;
    }
    std::size_t base = 0;
    std::size_t next_rest = 0;
    for (int q = 1; q <= num_qubits; ++q) {
        if (used[static_cast<std::size_t>(q)]) {
            continue;
        }
        if (next_rest >= rest.size()) {
            throw std::invalid_argument("rest bits do not cover unpaired qubits");
        }
        const int bit = rest[next_rest++];
        if (bit != 0 && bit != 1) {
            throw std::invalid_argument("rest entries must be 0 or 1");
        }
        if (bit == 1) {
            base |= qubit_mask(num_qubits, q);
        }
    }
    if (next_rest != rest.size()) {
        throw std::invalid_argument("more rest bits than unpaired qubits");
    }

    CVector<T> amps = CVector<T>::Zero(std::size_t{1} << num_qubits);
    const T norm = std::pow(T(1) / std::sqrt(T(2)),
                            static_cast<T>(pairs.size()));
    const std::size_t combos = std::size_t{1} << pairs.size();
    for (std::size_t choice = 0; choice < combos; ++choice) {
        std::size_t index = base;
        T sign = T(1);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [i, j] = pairs[p];
            if ((choice >> p) & 1U) {
                index |= qubit_mask(num_qubits, i); // |1_i 0_j>
                sign = -sign;
            } else {
                index |= qubit_mask(num_qubits, j); // |0_i 1_j>
            }
        }
        amps[static_cast<Eigen::Index>(index)] = Complex<T>(sign * norm);
    }
    return StateVector<T>(num_qubits, std::move(amps));
}

template <typename T = double>
StateVector<T>
prepare_singlet_pairs(int num_qubits,
                      std::initializer_list<std::pair<int, int>> pairs,
                      std::initializer_list<int> rest = {}) {
    return prepare_singlet_pairs<T>(
        num_qubits, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()),
        std::span<const int>(rest.begin(), rest.size()));
}

/// Max-norm of U^dagger U - I.
template <typename T> T unitarity_defect(const CMatrix<T> &m) {
    const auto n = m.rows();
    return (m.adjoint() * m - CMatrix<T>::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// A one- or two-qubit unitary together with the qubits it acts on. The
/// matrix index uses the first target as the most significant bit.
template <typename T = double> class GateAction {
  public:
    static constexpr double kUnitarityTolerance = 1e-12;

    GateAction(std::vector<int> targets, CMatrix<T> matrix)
        : targets_(std::move(targets)), matrix_(std::move(matrix)) {
        if (targets_.empty() || targets_.size() > 2) {
            throw std::invalid_argument("gates act on one or two qubits");
        }
        if (targets_.size() == 2 && targets_[0] == targets_[1]) {
            throw std::invalid_argument("gate targets must be distinct");
        }
        const Eigen::Index dim = Eigen::Index{1} << targets_.size();
        if (matrix_.rows() != dim || matrix_.cols() != dim) {
            throw std::invalid_argument("gate matrix shape does not match targets");
        }
        if (!(unitarity_defect(matrix_) < T(kUnitarityTolerance))) {
            throw std::invalid_argument("gate matrix is not unitary");
        }
    }

    [[nodiscard]] const std::vector<int> &targets() const { return targets_; }
    [[nodiscard]] const CMatrix<T> &matrix() const { return matrix_; }

  private:
    std::vector<int> targets_;
    CMatrix<T> matrix_;
};

namespace kernels {

/// In-place application of an arbitrary local matrix (unitary or not) on
/// one or two target qubits.
template <typename T>
void apply_local(CVector<T> &amps, int num_qubits, std::span<const int> targets,
                 const CMatrix<T> &m) {
    const std::size_t dim = static_cast<std::size_t>(amps.size());
    for (int q : targets) {
        check_qubit_index(num_qubits, q);
    }
    if (targets.size() == 1) {
        const std::size_t mask = qubit_mask(num_qubits, targets[0]);
        const Complex<T> m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0),
                         m11 = m(1, 1);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & mask) {
                continue;
            }
            const Complex<T> a0 = amps[static_cast<Eigen::Index>(i)];
            const Complex<T> a1 = amps[static_cast<Eigen::Index>(i | mask)];
            amps[static_cast<Eigen::Index>(i)] = m00 * a0 + m01 * a1;
            amps[static_cast<Eigen::Index>(i | mask)] = m10 * a0 + m11 * a1;
        }
        return;
    }
    if (targets.size() == 2) {
        const std::size_t ma = qubit_mask(num_qubits, targets[0]);
        const std::size_t mb = qubit_mask(num_qubits, targets[1]);
        if (ma == mb) {
            throw std::invalid_argument("gate targets must be distinct");
        }
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & ma) || (i & mb)) {
                continue;
            }
            const std::size_t idx[4] = {i, i | mb, i | ma, i | ma | mb};
            Complex<T> in[4];
            for (int k = 0; k < 4; ++k) {
                in[k] = amps[static_cast<Eigen::Index>(idx[k])];
            }
            for (int r = 0; r < 4; ++r) {
                Complex<T> acc = m(r, 0) * in[0];
                for (int c = 1; c < 4; ++c) {
                    acc += m(r, c) * in[c];
                }
                amps[static_cast<Eigen::Index>(idx[r])] = acc;
            }
        }
        return;
    }
    throw std::invalid_argument("local matrices act on one or two qubits");
}

template <typename T>
void apply_gate_inplace(CVector<T> &amps, int num_qubits,
                        const GateAction<T> &gate) {
    apply_local<T>(amps, num_qubits, gate.targets(), gate.matrix());
}

template <typename T>
void apply_gate_adjoint_inplace(CVector<T> &amps, int num_qubits,
                                const GateAction<T> &gate) {
    const CMatrix<T> adj = gate.matrix().adjoint();
    apply_local<T>(amps, num_qubits, gate.targets(), adj);
}

} // namespace kernels

template <typename T>
StateVector<T> apply_gate(const StateVector<T> &state, const GateAction<T> &gate) {
    CVector<T> amps = state.amplitudes();
    kernels::apply_gate_inplace(amps, state.num_qubits(), gate);
    return StateVector<T>(state.num_qubits(), std::move(amps));
}

template <typename T>
StateVector<T> apply_gates(const StateVector<T> &state,
                           std::span<const GateAction<T>> gates) {
    CVector<T> amps = state.amplitudes();
    for (const auto &g : gates) {
        kernels::apply_gate_inplace(amps, state.num_qubits(), g);
    }
    return StateVector<T>(state.num_qubits(), std::move(amps));
}

// ---------------------------------------------------------------------------
// Pauli strings and observables

enum class Pauli { X, Y, Z };

struct PauliString {
    std::map<int, Pauli> factors;

    PauliString() = default;
    PauliString(std::initializer_list<std::pair<const int, Pauli>> f)
        : factors(f) {}

    [[nodiscard]] std::string to_string() const {
        if (factors.empty()) {
            return "I";
        }
        std::string out;
        for (const auto &[q, p] : factors) {
            out += (p == Pauli::X ? 'X' : p == Pauli::Y ? 'Y' : 'Z');
            out += std::to_string(q);
        }
        return out;
    }
};

struct PauliTerm {
    double coefficient;
    PauliString pauli;
};

/// Real-weighted sum of Pauli strings; Hermitian by construction.
struct Observable {
    int num_qubits = 0;
    std::vector<PauliTerm> terms;

    void validate() const {
        check_qubit_count(num_qubits);
        for (const auto &t : terms) {
            for (const auto &[q, p] : t.pauli.factors) {
                check_qubit_index(num_qubits, q);
            }
        }
    }

    [[nodiscard]] std::string to_string() const;
};

inline std::string Observable::to_string() const {
    std::string out;
    for (const auto &t : terms) {
        if (!out.empty()) {
            out += " + ";
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g*", t.coefficient);
        out += buf + t.pauli.to_string();
    }
    return out.empty() ? "0" : out;
}

/// sigma_i . sigma_j = X_i X_j + Y_i Y_j + Z_i Z_j
inline Observable exchange_observable(int num_qubits, int i, int j) {
    Observable obs{num_qubits, {}};
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        obs.terms.push_back({1.0, PauliString{{i, p}, {j, p}}});
    }
    obs.validate();
    return obs;
}

/// Multiplies every term by a single-qubit Pauli on a qubit none of the
/// terms touch.
inline Observable times_pauli(Observable obs, int qubit, Pauli p) {
    for (auto &t : obs.terms) {
        if (t.pauli.factors.contains(qubit)) {
            throw std::invalid_argument("qubit already carries a Pauli factor");
        }
        t.pauli.factors.emplace(qubit, p);
    }
    obs.validate();
    return obs;
}

namespace kernels {

/// out += coefficient * P |amps>
template <typename T>
void accumulate_pauli(CVector<T> &out, const CVector<T> &amps, int num_qubits,
                      const PauliString &pauli, T coefficient) {
    std::size_t flip = 0;
    std::size_t zmask = 0;
    std::size_t ymask = 0;
    for (const auto &[q, p] : pauli.factors) {
        const std::size_t m = qubit_mask(num_qubits, q);
        if (p == Pauli::X || p == Pauli::Y) {
            flip |= m;
        }
        if (p == Pauli::Z) {
            zmask |= m;
        }
        if (p == Pauli::Y) {
            ymask |= m;
        }
    }
    const int ny = std::popcount(ymask);
    // Y|b> = i(-1)^b |1-b>, so the phase is i^ny (-1)^(popcount(k & (ymask|zmask))).
    static const Complex<T> ipow[4] = {Complex<T>(1, 0), Complex<T>(0, 1),
                                       Complex<T>(-1, 0), Complex<T>(0, -1)};
    const Complex<T> base = ipow[ny % 4] * coefficient;
    const std::size_t sign_mask = ymask | zmask;
    const std::size_t dim = static_cast<std::size_t>(amps.size());
    for (std::size_t k = 0; k < dim; ++k) {
        const bool negative = std::popcount(k & sign_mask) & 1;
        const Complex<T> v = amps[static_cast<Eigen::Index>(k)];
        out[static_cast<Eigen::Index>(k ^ flip)] += negative ? -base * v : base * v;
    }
}

} // namespace kernels

/// O|psi> as a raw vector.
template <typename T>
CVector<T> apply_observable(const Observable &obs, const CVector<T> &amps,
                            int num_qubits) {
    if (obs.num_qubits != num_qubits) {
        throw std::invalid_argument("observable and state qubit counts differ");
    }
    CVector<T> out = CVector<T>::Zero(amps.size());
    for (const auto &t : obs.terms) {
        kernels::accumulate_pauli<T>(out, amps, num_qubits, t.pauli,
                                     static_cast<T>(t.coefficient));
    }
    return out;
}

/// <psi|O|psi> as a complex number; the imaginary part is rounding residue.
template <typename T>
Complex<T> expectation_complex(const StateVector<T> &state, const Observable &obs) {
    const CVector<T> o_psi =
        apply_observable<T>(obs, state.amplitudes(), state.num_qubits());
    return state.amplitudes().dot(o_psi);
}

template <typename T>
T expectation(const StateVector<T> &state, const Observable &obs) {
    return expectation_complex(state, obs).real();
}

template <typename T = double> CMatrix<T> pauli_matrix(Pauli p) {
    CMatrix<T> m(2, 2);
    const Complex<T> i(0, 1);
    switch (p) {
    case Pauli::X:
        m << 0, 1, 1, 0;
        break;
    case Pauli::Y:
        m << Complex<T>(0), -i, i, Complex<T>(0);
        break;
    case Pauli::Z:
        m << 1, 0, 0, -1;
        break;
    }
    return m;
}

template <typename T>
CMatrix<T> kron(const CMatrix<T> &a, const CMatrix<T> &b) {
    CMatrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

/// Dense 2^N x 2^N matrix of a Pauli string (qubit 1 leftmost factor).
template <typename T = double>
CMatrix<T> dense_matrix(const PauliString &pauli, int num_qubits) {
    CMatrix<T> out = CMatrix<T>::Identity(1, 1);
    for (int q = 1; q <= num_qubits; ++q) {
        const auto it = pauli.factors.find(q);
        const CMatrix<T> f = it == pauli.factors.end()
                                 ? CMatrix<T>(CMatrix<T>::Identity(2, 2))
                                 : pauli_matrix<T>(it->second);
        out = kron<T>(out, f);
    }
    return out;
}

template <typename T = double> CMatrix<T> dense_matrix(const Observable &obs) {
    obs.validate();
    const Eigen::Index dim = Eigen::Index{1} << obs.num_qubits;
    CMatrix<T> out = CMatrix<T>::Zero(dim, dim);
    for (const auto &t : obs.terms) {
        out += static_cast<T>(t.coefficient) * dense_matrix<T>(t.pauli, obs.num_qubits);
    }
    return out;
}

template <typename T = double> struct SpectralRange {
    T min;
    T max;
};

/// Exact extreme eigenvalues of the dense Hermitian matrix of `obs`.
template <typename T = double> SpectralRange<T> spectral_range(const Observable &obs) {
    const CMatrix<T> m = dense_matrix<T>(obs);
    Eigen::SelfAdjointEigenSolver<CMatrix<T>> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigensolver failed on observable matrix");
    }
    const auto &ev = solver.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

} // namespace eqforce
