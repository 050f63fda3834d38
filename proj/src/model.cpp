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
#include "eqforce/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace eqforce {

int ArchitectureSpec::weights_per_block() const {
    if (!tie_weights && system != System::diatomic) {
        return 4;
    }
    return 3;
}

void ArchitectureSpec::validate() const {
    if (depth < 1) {
        throw std::invalid_argument("depth must be >= 1");
    }
    if (blocks < 1) {
        throw std::invalid_argument("blocks must be >= 1");
    }
    if (system == System::dimer && blocks != 1) {
        throw std::invalid_argument("the dimer model uses exactly one block per layer");
    }
}

int param_count(const ArchitectureSpec &spec) {
    spec.validate();
    return spec.depth * spec.blocks * spec.weights_per_block() +
           (spec.symmetry_breaking ? spec.depth : 0) + spec.num_encoding_scales();
}

namespace {

int layer_stride(const ArchitectureSpec &spec) {
    return spec.blocks * spec.weights_per_block() + (spec.symmetry_breaking ? 1 : 0);
}

} // namespace

int layer_weight_index(const ArchitectureSpec &spec, int layer, int column) {
    return layer * layer_stride(spec) + column;
}

int sb_angle_index(const ArchitectureSpec &spec, int layer) {
    if (!spec.symmetry_breaking) {
        throw std::invalid_argument("model has no symmetry-breaking angles");
    }
    return layer * layer_stride(spec) + spec.blocks * spec.weights_per_block();
}

int encoding_scale_index(const ArchitectureSpec &spec, int which) {
    return spec.depth * layer_stride(spec) + which;
}

WeightSet WeightSet::zeros(const ArchitectureSpec &spec) {
    spec.validate();
    WeightSet w;
    w.layer_weights = Eigen::MatrixXd::Zero(spec.depth, spec.blocks * spec.weights_per_block());
    w.sb_angles = Eigen::VectorXd::Zero(spec.symmetry_breaking ? spec.depth : 0);
    w.enc_scales = Eigen::VectorXd::Zero(spec.num_encoding_scales());
    return w;
}

void WeightSet::validate(const ArchitectureSpec &spec) const {
    spec.validate();
    if (layer_weights.rows() != spec.depth ||
        layer_weights.cols() != spec.blocks * spec.weights_per_block()) {
        throw std::invalid_argument("layer weight shape does not match architecture");
    }
    if (sb_angles.size() != (spec.symmetry_breaking ? spec.depth : 0)) {
        throw std::invalid_argument("symmetry-breaking angle count does not match architecture");
    }
    if (enc_scales.size() != spec.num_encoding_scales()) {
        throw std::invalid_argument("encoding scale count does not match architecture");
    }
    if (!layer_weights.allFinite() || !sb_angles.allFinite() || !enc_scales.allFinite()) {
        throw std::invalid_argument("weights must be finite");
    }
}

Eigen::VectorXd WeightSet::flatten() const {
    const Eigen::Index cols = layer_weights.cols();
    const bool sb = sb_angles.size() > 0;
    Eigen::VectorXd flat(layer_weights.size() + sb_angles.size() + enc_scales.size());
    Eigen::Index k = 0;
    for (Eigen::Index d = 0; d < layer_weights.rows(); ++d) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            flat[k++] = layer_weights(d, c);
        }
        if (sb) {
            flat[k++] = sb_angles[d];
        }
    }
    for (Eigen::Index a = 0; a < enc_scales.size(); ++a) {
        flat[k++] = enc_scales[a];
    }
    return flat;
}

WeightSet WeightSet::unflatten(const ArchitectureSpec &spec, const Eigen::VectorXd &flat) {
    if (flat.size() != param_count(spec)) {
        throw std::invalid_argument("flat weight vector has " + std::to_string(flat.size()) +
                                    " entries, architecture needs " +
                                    std::to_string(param_count(spec)));
    }
    WeightSet w = zeros(spec);
    Eigen::Index k = 0;
    for (int d = 0; d < spec.depth; ++d) {
        for (Eigen::Index c = 0; c < w.layer_weights.cols(); ++c) {
            w.layer_weights(d, c) = flat[k++];
        }
        if (spec.symmetry_breaking) {
            w.sb_angles[d] = flat[k++];
        }
    }
    for (Eigen::Index a = 0; a < w.enc_scales.size(); ++a) {
        w.enc_scales[a] = flat[k++];
    }
    return w;
}

void validate_input(const ArchitectureSpec &spec, const ModelInput &input, double tol) {
    const auto &x = input.coords;
    const auto expected = static_cast<std::size_t>(num_model_atoms(spec.system));
    if (x.size() != expected) {
        throw std::invalid_argument("model input needs " + std::to_string(expected) +
                                    " coordinates, got " + std::to_string(x.size()));
    }
    for (const auto &v : x) {
        if (!v.allFinite()) {
            throw std::invalid_argument("model input coordinates must be finite");
        }
    }
    switch (spec.system) {
    case System::diatomic:
        if ((x[0] + x[1]).cwiseAbs().maxCoeff() > tol) {
            throw std::invalid_argument("diatomic input must satisfy x1 = -x2");
        }
        break;
    case System::triatomic:
        break; // unique atom at the origin is implicit
    case System::dimer:
        if ((x[0] + x[3]).cwiseAbs().maxCoeff() > tol) {
            throw std::invalid_argument("dimer input must satisfy x_O1 = -x_O2");
        }
        break;
    }
}

Observable model_observable(const ArchitectureSpec &spec) {
    if (spec.system == System::dimer) {
        return times_pauli(exchange_observable(7, 1, 4), 7, Pauli::Z);
    }
    return exchange_observable(4, 1, 2);
}

StateVector<double> model_initial_state(const ArchitectureSpec &spec) {
    const int n = spec.num_qubits();
    if (spec.initial_state == InitialState::all_zero) {
        std::vector<int> zeros(static_cast<std::size_t>(n), 0);
        return init_basis_state<double>(n, zeros);
    }
    if (spec.system == System::dimer) {
        return prepare_singlet_pairs<double>(7, {{2, 3}, {5, 6}, {4, 1}}, {0});
    }
    return prepare_singlet_pairs<double>(4, {{1, 2}, {3, 4}});
}

namespace {

class CircuitBuilder {
  public:
    CircuitBuilder(const ArchitectureSpec &spec, const WeightSet &weights,
                   const ModelInput &input)
        : spec_(spec), weights_(weights), input_(input) {}

    std::vector<CircuitOp> build() {
        encoding_layer(0);
        for (int d = 0; d < spec_.depth; ++d) {
            trainable_layer(d);
            if (spec_.symmetry_breaking) {
                symmetry_breaking(d);
            }
            encoding_layer(d + 1);
        }
        return std::move(ops_);
    }

  private:
    void encoding_layer(int layer) {
        if (spec_.system == System::dimer) {
            for (int atom = 0; atom < 6; ++atom) {
                const int which = (atom == 0 || atom == 3) ? 0 : 1;
                const double alpha = weights_.enc_scales[which];
                const Vector3 &x = input_.coords[static_cast<std::size_t>(atom)];
                CircuitOp op{reflect_encoding_gate<double>(atom + 1, 7, x, alpha),
                             OpKind::encoding, OpRole::encoding};
                op.layer = layer;
                op.weight_index = encoding_scale_index(spec_, which);
                op.atom = atom;
                op.x = x;
                op.parameter = alpha;
                op.with_ancilla = true;
                ops_.push_back(std::move(op));
            }
            return;
        }
        const double alpha = weights_.enc_scales[0];
        // Phi1(x1) Phi2(x2) Phi3(x1) Phi4(x2)
        for (int qubit = 1; qubit <= 4; ++qubit) {
            const int atom = (qubit - 1) % 2;
            const Vector3 &x = input_.coords[static_cast<std::size_t>(atom)];
            CircuitOp op{su2_encoding_gate<double>(qubit, x, alpha), OpKind::encoding,
                         OpRole::encoding};
            op.layer = layer;
            op.weight_index = encoding_scale_index(spec_, 0);
            op.atom = atom;
            op.x = x;
            op.parameter = alpha;
            ops_.push_back(std::move(op));
        }
    }

    void heisenberg(int layer, int i, int j, int column) {
        const double coupling = weights_.layer_weights(layer, column);
        CircuitOp op{heisenberg_gate<double>(i, j, coupling), OpKind::heisenberg,
                     OpRole::trainable};
        op.layer = layer;
        op.weight_index = layer_weight_index(spec_, layer, column);
        op.parameter = coupling;
        ops_.push_back(std::move(op));
    }

    void rotation_z(int layer, int qubit, double angle, int weight_index, OpRole role) {
        CircuitOp op{GateAction<double>({qubit}, rz_matrix<double>(angle)),
                     OpKind::rotation_z, role};
        op.layer = layer;
        op.weight_index = weight_index;
        op.parameter = angle;
        ops_.push_back(std::move(op));
    }

    // Operator products are applied right to left.
    void trainable_layer(int d) {
        const int k = spec_.weights_per_block();
        if (spec_.system == System::dimer) {
            // RH(2,3;j1) RH(5,6;j1) RH(1,4;j2) R_Z^(7)(j3)
            rotation_z(d, 7, weights_.layer_weights(d, 2), layer_weight_index(spec_, d, 2),
                       OpRole::trainable);
            heisenberg(d, 1, 4, 1);
            heisenberg(d, 5, 6, spec_.tie_weights ? 0 : 3);
            heisenberg(d, 2, 3, 0);
            return;
        }
        for (int b = 0; b < spec_.blocks; ++b) {
            const int base = b * k;
            if (spec_.system == System::triatomic) {
                heisenberg(d, 1, 4, base + (spec_.tie_weights ? 2 : 3));
            }
            heisenberg(d, 2, 3, base + 2);
            heisenberg(d, 3, 4, base + 1);
            heisenberg(d, 1, 2, base + 0);
        }
    }

    void symmetry_breaking(int d) {
        const double eps = weights_.sb_angles[d];
        for (int q = 1; q <= spec_.num_qubits(); ++q) {
            rotation_z(d, q, eps, sb_angle_index(spec_, d), OpRole::symmetry_breaking);
        }
    }

    const ArchitectureSpec &spec_;
    const WeightSet &weights_;
    const ModelInput &input_;
    std::vector<CircuitOp> ops_;
};

} // namespace

Circuit build_circuit(const ArchitectureSpec &spec, const WeightSet &weights,
                      const ModelInput &input) {
    weights.validate(spec);
    validate_input(spec, input);
    Circuit circuit{model_initial_state(spec), CircuitBuilder(spec, weights, input).build(),
                    model_observable(spec), param_count(spec),
                    num_model_atoms(spec.system)};
    return circuit;
}

StateVector<double> run_circuit(const Circuit &circuit) {
    CVector<double> amps = circuit.initial.amplitudes();
    const int n = circuit.initial.num_qubits();
    for (const auto &op : circuit.ops) {
        kernels::apply_gate_inplace(amps, n, op.gate);
    }
    return StateVector<double>(n, std::move(amps));
}

double evaluate(const Circuit &circuit) {
    return expectation(run_circuit(circuit), circuit.observable);
}

double evaluate(const ArchitectureSpec &spec, const WeightSet &weights,
                const ModelInput &input) {
    return evaluate(build_circuit(spec, weights, input));
}

CMatrix<double> circuit_unitary(const Circuit &circuit) {
    const int n = circuit.initial.num_qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix<double> u = CMatrix<double>::Identity(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        CVector<double> col = u.col(c);
        for (const auto &op : circuit.ops) {
            kernels::apply_gate_inplace(col, n, op.gate);
        }
        u.col(c) = col;
    }
    return u;
}

} // namespace eqforce
