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
#include "eqforce/autodiff.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace eqforce {

namespace {

const Complex<double> kI(0.0, 1.0);

Vector3 unit(int component) {
    Vector3 e = Vector3::Zero();
    e[component] = 1.0;
    return e;
}

double overlap_re(const CVector<double> &bra, const CVector<double> &ket) {
    return bra.dot(ket).real();
}

/// M|psi> for a local matrix without touching psi.
CVector<double> applied(const CVector<double> &psi, int num_qubits,
                        const std::vector<int> &targets, const CMatrix<double> &m) {
    CVector<double> out = psi;
    kernels::apply_local<double>(out, num_qubits, targets, m);
    return out;
}

CMatrix<double> weight_derivative(const CircuitOp &op) {
    switch (op.kind) {
    case OpKind::encoding:
        return encoding_scale_derivative(op.x, op.parameter, op.with_ancilla);
    case OpKind::heisenberg:
        return heisenberg_derivative(op.parameter);
    case OpKind::rotation_z:
        return rz_derivative(op.parameter);
    }
    throw std::logic_error("unknown gate kind");
}

} // namespace

CMatrix<double> heisenberg_derivative(double coupling) {
    return -kI * exchange_matrix<double>() * heisenberg_matrix<double>(coupling);
}

CMatrix<double> rz_derivative(double angle) {
    return (-0.5 * kI) * pauli_matrix<double>(Pauli::Z) * rz_matrix<double>(angle);
}

CMatrix<double> encoding_scale_derivative(const Vector3 &x, double alpha,
                                          bool with_ancilla) {
    return -kI * encoding_generator<double>(x, with_ancilla) *
           encoding_matrix<double>(x, alpha, with_ancilla);
}

CMatrix<double> encoding_coordinate_derivative(const Vector3 &x, double alpha,
                                               int component, bool with_ancilla) {
    if (component < 0 || component > 2) {
        throw std::invalid_argument("coordinate component must be 0, 1 or 2");
    }
    const Vector3 ek = unit(component);
    const double r = x.norm();
    if (r < kSeriesThreshold) {
        return (-kI * alpha) * encoding_generator<double>(ek, with_ancilla);
    }
    const Eigen::Index dim = with_ancilla ? 4 : 2;
    const Vector3 n = x / r;
    const double nk = n[component];
    const double angle = alpha * r;
    const double s = std::sin(angle), c = std::cos(angle);
    return (-alpha * nk * s) * CMatrix<double>::Identity(dim, dim) -
           kI * ((alpha * nk * c) * encoding_generator<double>(n, with_ancilla) +
                 (s / r) * encoding_generator<double>(ek - nk * n, with_ancilla));
}

std::vector<GateDerivative> gate_derivatives(const Circuit &circuit,
                                             std::size_t gate_index) {
    const CircuitOp &op = circuit.ops.at(gate_index);
    std::vector<GateDerivative> out;
    if (op.weight_index < 0 || op.weight_index >= circuit.num_weights) {
        throw std::invalid_argument("gate has no valid weight binding");
    }
    out.push_back({gate_index, {ParameterId::Kind::weight, op.weight_index, 0},
                   weight_derivative(op)});
    if (op.kind == OpKind::encoding) {
        if (op.atom < 0 || op.atom >= circuit.num_atoms) {
            throw std::invalid_argument("encoding gate has no valid atom binding");
        }
        for (int c = 0; c < 3; ++c) {
            out.push_back({gate_index, {ParameterId::Kind::coordinate, op.atom, c},
                           encoding_coordinate_derivative(op.x, op.parameter, c,
                                                          op.with_ancilla)});
        }
    }
    return out;
}

ModelGradient adjoint_gradient(const Circuit &circuit) {
    const int n = circuit.initial.num_qubits();
    const std::size_t num_ops = circuit.ops.size();

    std::vector<CVector<double>> states;
    states.reserve(num_ops + 1);
    states.push_back(circuit.initial.amplitudes());
    for (const auto &op : circuit.ops) {
        CVector<double> next = states.back();
        kernels::apply_gate_inplace(next, n, op.gate);
        states.push_back(std::move(next));
    }

    ModelGradient grad;
    grad.weights = Eigen::VectorXd::Zero(circuit.num_weights);
    grad.inputs.assign(static_cast<std::size_t>(circuit.num_atoms), Vector3::Zero());

    CVector<double> lambda = apply_observable<double>(circuit.observable, states.back(), n);
    grad.value = overlap_re(states.back(), lambda);

    for (std::size_t k = num_ops; k-- > 0;) {
        const CircuitOp &op = circuit.ops[k];
        const CVector<double> &psi = states[k];
        for (const auto &d : gate_derivatives(circuit, k)) {
            const double g =
                2.0 * overlap_re(lambda, applied(psi, n, op.gate.targets(), d.dmatrix));
            if (d.parameter.kind == ParameterId::Kind::weight) {
                grad.weights[d.parameter.index] += g;
            } else {
                grad.inputs[static_cast<std::size_t>(d.parameter.index)][d.parameter.component] += g;
            }
        }
        kernels::apply_gate_adjoint_inplace(lambda, n, op.gate);
    }
    return grad;
}

Eigen::VectorXd grad_weights(const ArchitectureSpec &spec, const WeightSet &weights,
                             const ModelInput &input) {
    return adjoint_gradient(build_circuit(spec, weights, input)).weights;
}

std::vector<Vector3> grad_inputs(const ArchitectureSpec &spec, const WeightSet &weights,
                                 const ModelInput &input) {
    return adjoint_gradient(build_circuit(spec, weights, input)).inputs;
}

DirectionalGradient directional_adjoint(const Circuit &circuit,
                                        std::span<const Vector3> direction) {
    if (direction.size() != static_cast<std::size_t>(circuit.num_atoms)) {
        throw std::invalid_argument("direction needs one vector per model coordinate");
    }
    const int n = circuit.initial.num_qubits();
    const std::size_t num_ops = circuit.ops.size();

    // Tangent of each gate along the direction (encodings only).
    std::vector<std::optional<CMatrix<double>>> gate_tangent(num_ops);
    for (std::size_t k = 0; k < num_ops; ++k) {
        const CircuitOp &op = circuit.ops[k];
        if (op.kind != OpKind::encoding) {
            continue;
        }
        const Vector3 &v = direction[static_cast<std::size_t>(op.atom)];
        const Eigen::Index dim = op.with_ancilla ? 4 : 2;
        CMatrix<double> t = CMatrix<double>::Zero(dim, dim);
        for (int c = 0; c < 3; ++c) {
            if (v[c] != 0.0) {
                t += v[c] * encoding_coordinate_derivative(op.x, op.parameter, c,
                                                           op.with_ancilla);
            }
        }
        gate_tangent[k] = std::move(t);
    }

    std::vector<CVector<double>> states;
    std::vector<CVector<double>> tangents;
    states.reserve(num_ops + 1);
    tangents.reserve(num_ops + 1);
    states.push_back(circuit.initial.amplitudes());
    tangents.push_back(CVector<double>::Zero(states.back().size()));
    for (std::size_t k = 0; k < num_ops; ++k) {
        const CircuitOp &op = circuit.ops[k];
        CVector<double> next = states[k];
        kernels::apply_gate_inplace(next, n, op.gate);
        CVector<double> next_tangent = tangents[k];
        kernels::apply_gate_inplace(next_tangent, n, op.gate);
        if (gate_tangent[k]) {
            next_tangent += applied(states[k], n, op.gate.targets(), *gate_tangent[k]);
        }
        states.push_back(std::move(next));
        tangents.push_back(std::move(next_tangent));
    }

    DirectionalGradient out;
    out.weights = Eigen::VectorXd::Zero(circuit.num_weights);
    out.derivative_weights = Eigen::VectorXd::Zero(circuit.num_weights);

    CVector<double> lambda = apply_observable<double>(circuit.observable, states.back(), n);
    CVector<double> lambda_dot =
        apply_observable<double>(circuit.observable, tangents.back(), n);
    out.value = overlap_re(states.back(), lambda);
    out.derivative = 2.0 * overlap_re(lambda, tangents.back());

    for (std::size_t k = num_ops; k-- > 0;) {
        const CircuitOp &op = circuit.ops[k];
        const auto &targets = op.gate.targets();
        const CVector<double> &psi = states[k];
        const CVector<double> &psi_dot = tangents[k];

        const CMatrix<double> dg = weight_derivative(op);
        const CVector<double> dg_psi = applied(psi, n, targets, dg);
        double mixed = overlap_re(lambda_dot, dg_psi) +
                       overlap_re(lambda, applied(psi_dot, n, targets, dg));
        if (gate_tangent[k]) {
            // d/dv of -i (x.S) G  =  -i (v.S) G - i (x.S) dG/dv
            const Vector3 &v = direction[static_cast<std::size_t>(op.atom)];
            const CMatrix<double> d2g =
                -kI * (encoding_generator<double>(v, op.with_ancilla) * op.gate.matrix() +
                       encoding_generator<double>(op.x, op.with_ancilla) * *gate_tangent[k]);
            mixed += overlap_re(lambda, applied(psi, n, targets, d2g));
        }
        out.weights[op.weight_index] += 2.0 * overlap_re(lambda, dg_psi);
        out.derivative_weights[op.weight_index] += 2.0 * mixed;

        kernels::apply_gate_adjoint_inplace(lambda_dot, n, op.gate);
        if (gate_tangent[k]) {
            const CMatrix<double> tangent_adj = gate_tangent[k]->adjoint();
            lambda_dot += applied(lambda, n, targets, tangent_adj);
        }
        kernels::apply_gate_adjoint_inplace(lambda, n, op.gate);
    }
    return out;
}

Eigen::VectorXd finite_diff_oracle(const std::function<double(const Eigen::VectorXd &)> &f,
                                   const Eigen::VectorXd &point, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    Eigen::VectorXd grad(point.size());
    Eigen::VectorXd p = point;
    for (Eigen::Index i = 0; i < point.size(); ++i) {
        p[i] = point[i] + h;
        const double up = f(p);
        p[i] = point[i] - h;
        const double down = f(p);
        p[i] = point[i];
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

} // namespace eqforce
