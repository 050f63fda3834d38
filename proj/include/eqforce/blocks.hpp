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
 * Gate families for rotation-, permutation- and reflection-equivariant
 * circuits, and the group representations used to check them.
 *
 * Single-qubit rotations are R_l(a) = exp(-i a sigma_l / 2). Euler rotations
 * use the X-Z-X order on both sides: the data-space matrix is
 * r_x(psi) r_z(theta) r_x(phi) and the Hilbert-space operator is
 * R_X(psi) R_Z(theta) R_X(phi), so that
 * R (x . sigma) R^dagger = (r x) . sigma.
 */
#pragma once

#include "eqforce/statevector.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace eqforce {

template <typename T> using Vec3 = Eigen::Matrix<T, 3, 1>;
template <typename T> using Mat3 = Eigen::Matrix<T, 3, 3>;

using Vector3 = Vec3<double>;

struct EulerRotation {
    double psi = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

/// x . sigma as a 2x2 matrix.
template <typename T = double> CMatrix<T> sigma_dot(const Vec3<T> &x) {
    return x[0] * pauli_matrix<T>(Pauli::X) + x[1] * pauli_matrix<T>(Pauli::Y) +
           x[2] * pauli_matrix<T>(Pauli::Z);
}

/// Pauli-vector generator of an encoding gate, with the ancilla X factor
/// appended for the reflection-equivariant variant: (x.sigma) or (x.sigma) (x) X.
template <typename T = double>
CMatrix<T> encoding_generator(const Vec3<T> &x, bool with_ancilla) {
    const CMatrix<T> s = sigma_dot<T>(x);
    return with_ancilla ? kron<T>(s, pauli_matrix<T>(Pauli::X)) : s;
}

/// (XX + YY + ZZ) on two qubits.
template <typename T = double> CMatrix<T> exchange_matrix() {
    CMatrix<T> m = CMatrix<T>::Zero(4, 4);
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        m += kron<T>(pauli_matrix<T>(p), pauli_matrix<T>(p));
    }
    return m;
}

/// Projector onto (|01> - |10>)/sqrt(2).
template <typename T = double> CMatrix<T> singlet_projector() {
    CMatrix<T> p = CMatrix<T>::Zero(4, 4);
    p(1, 1) = p(2, 2) = T(0.5);
    p(1, 2) = p(2, 1) = T(-0.5);
    return p;
}

template <typename T = double> CMatrix<T> heisenberg_matrix(T coupling) {
    const Complex<T> i(0, 1);
    const CMatrix<T> ps = singlet_projector<T>();
    const CMatrix<T> pt = CMatrix<T>::Identity(4, 4) - ps;
    return std::exp(-i * coupling) * pt + std::exp(T(3) * i * coupling) * ps;
}

/// RH(i,j; J) = exp(-i J sigma_i . sigma_j), from the spectral split of the
/// exchange operator (+1 on the triplet, -3 on the singlet).
template <typename T = double>
GateAction<T> heisenberg_gate(int i, int j, T coupling) {
    if (i == j) {
        throw std::invalid_argument("heisenberg_gate needs two distinct qubits");
    }
    return GateAction<T>({i, j}, heisenberg_matrix<T>(coupling));
}

template <typename T = double> CMatrix<T> rx_matrix(T angle) {
    CMatrix<T> m(2, 2);
    const T c = std::cos(angle / 2), s = std::sin(angle / 2);
    m << Complex<T>(c, 0), Complex<T>(0, -s), Complex<T>(0, -s), Complex<T>(c, 0);
    return m;
}

template <typename T = double> CMatrix<T> rz_matrix(T angle) {
    CMatrix<T> m = CMatrix<T>::Zero(2, 2);
    m(0, 0) = std::polar(T(1), -angle / 2);
    m(1, 1) = std::polar(T(1), angle / 2);
    return m;
}

/// cos(alpha |x|) I - i sin(alpha |x|) (x.S)/|x|, exact identity at x = 0.
template <typename T = double>
CMatrix<T> encoding_matrix(const Vec3<T> &x, T alpha, bool with_ancilla) {
    const Eigen::Index dim = with_ancilla ? 4 : 2;
    const T r = x.norm();
    if (r == T(0)) {
        return CMatrix<T>::Identity(dim, dim);
    }
    const T angle = alpha * r;
    const Complex<T> i(0, 1);
    return std::cos(angle) * CMatrix<T>::Identity(dim, dim) -
           (i * std::sin(angle)) * encoding_generator<T>(x / r, with_ancilla);
}

/// exp(-i alpha x . sigma^(i)).
template <typename T = double>
GateAction<T> su2_encoding_gate(int qubit, const Vec3<T> &x, T alpha) {
    return GateAction<T>({qubit}, encoding_matrix<T>(x, alpha, false));
}

/// exp(-i alpha (x . sigma^(i)) X^(ancilla)); uses (x.sigma (x) X)^2 = |x|^2 I.
template <typename T = double>
GateAction<T> reflect_encoding_gate(int qubit, int ancilla, const Vec3<T> &x,
                                    T alpha) {
    if (qubit == ancilla) {
        throw std::invalid_argument("encoding qubit and ancilla must differ");
    }
    return GateAction<T>({qubit, ancilla}, encoding_matrix<T>(x, alpha, true));
}

/// Equal-angle R_Z(epsilon) on every listed qubit.
template <typename T = double>
std::vector<GateAction<T>> symmetry_breaking_layer(std::span<const int> qubits,
                                                   T epsilon) {
    if (qubits.empty()) {
        throw std::invalid_argument("symmetry-breaking layer needs qubits");
    }
    std::vector<GateAction<T>> out;
    out.reserve(qubits.size());
    for (int q : qubits) {
        out.emplace_back(std::vector<int>{q}, rz_matrix<T>(epsilon));
    }
    return out;
}

/// R_X(psi) R_Z(theta) R_X(phi) as a 2x2 matrix.
template <typename T = double> CMatrix<T> euler_matrix(const EulerRotation &rot) {
    return rx_matrix<T>(static_cast<T>(rot.psi)) *
           rz_matrix<T>(static_cast<T>(rot.theta)) *
           rx_matrix<T>(static_cast<T>(rot.phi));
}

template <typename T = double>
std::vector<GateAction<T>> rotation_rep_hilbert(std::span<const int> qubits,
                                                const EulerRotation &rot) {
    const CMatrix<T> m = euler_matrix<T>(rot);
    std::vector<GateAction<T>> out;
    out.reserve(qubits.size());
    for (int q : qubits) {
        out.emplace_back(std::vector<int>{q}, m);
    }
    return out;
}

template <typename T = double> Mat3<T> axis_rotation(int axis, T angle) {
    const T c = std::cos(angle), s = std::sin(angle);
    Mat3<T> m = Mat3<T>::Identity();
    const int a = (axis + 1) % 3, b = (axis + 2) % 3;
    m(a, a) = c;
    m(a, b) = -s;
    m(b, a) = s;
    m(b, b) = c;
    return m;
}

/// r_x(psi) r_z(theta) r_x(phi), active rotations on R^3.
template <typename T = double> Mat3<T> rotation_rep_data(const EulerRotation &rot) {
    return axis_rotation<T>(0, static_cast<T>(rot.psi)) *
           axis_rotation<T>(2, static_cast<T>(rot.theta)) *
           axis_rotation<T>(0, static_cast<T>(rot.phi));
}

template <typename T = double> CMatrix<T> swap_matrix() {
    CMatrix<T> m = CMatrix<T>::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = Complex<T>(1);
    return m;
}

template <typename T = double>
std::vector<GateAction<T>>
swap_rep(std::span<const std::pair<int, int>> pairs) {
    std::vector<int> seen;
    std::vector<GateAction<T>> out;
    for (const auto &[i, j] : pairs) {
        for (int q : {i, j}) {
            if (std::find(seen.begin(), seen.end(), q) != seen.end()) {
                throw std::invalid_argument("swap pairs must be disjoint");
            }
            seen.push_back(q);
        }
        out.emplace_back(std::vector<int>{i, j}, swap_matrix<T>());
    }
    return out;
}

template <typename T = double>
std::vector<GateAction<T>>
swap_rep(std::initializer_list<std::pair<int, int>> pairs) {
    return swap_rep<T>(std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}

/// Z on the ancilla; pairs with x -> -x on the data side.
template <typename T = double> GateAction<T> reflection_rep(int ancilla) {
    return GateAction<T>({ancilla}, pauli_matrix<T>(Pauli::Z));
}

} // namespace eqforce
