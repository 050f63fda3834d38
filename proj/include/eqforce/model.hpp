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
 * The three invariant re-uploading models.
 *
 * A circuit is Phi(X), then for each of the D trainable layers: U_d, the
 * optional symmetry-breaking R_Z layer, Phi(X). Gates are stored in the order
 * they act on the state.
 *
 *  - diatomic / triatomic (4 qubits): atom 0 is encoded on qubits 1 and 3,
 *    atom 1 on qubits 2 and 4, with one shared scale alpha. A block is
 *    RH(1,2;j1) RH(3,4;j2) RH(2,3;j3) [RH(1,4;j3) for triatomic]. Initial
 *    state |S12>|S34>, observable sigma1.sigma2.
 *  - dimer (7 qubits, qubit 7 is the reflection ancilla): atom i on qubit i+1
 *    with alpha_O for oxygens and alpha_H for hydrogens. Layer
 *    RH(2,3;j1) RH(5,6;j1) RH(1,4;j2) R_Z^(7)(j3). Initial state
 *    |S23>|S56>|S41>|0>, observable (sigma1.sigma4) Z7.
 */
#pragma once

#include "eqforce/blocks.hpp"
#include "eqforce/statevector.hpp"
#include "eqforce/system.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace eqforce {

struct Scaler;

enum class InitialState { singlet_pairs, all_zero };

struct ArchitectureSpec {
    System system = System::diatomic;
    int depth = 1;
    int blocks = 1;
    bool symmetry_breaking = false;
    /// When false, the weight shared by two Heisenberg gates (RH(2,3)/RH(1,4)
    /// for triatomic, RH(2,3)/RH(5,6) for dimer) is split in two. Only used
    /// for gradient checks and audit negative controls.
    bool tie_weights = true;
    InitialState initial_state = InitialState::singlet_pairs;

    [[nodiscard]] int num_qubits() const { return eqforce::num_qubits(system); }
    /// Columns of one block in WeightSet::layer_weights.
    [[nodiscard]] int weights_per_block() const;
    [[nodiscard]] int num_encoding_scales() const {
        return system == System::dimer ? 2 : 1;
    }
    void validate() const;
};

/// D*B*3 + D*[sb] + 1 for monomers, D*3 + D*[sb] + 2 for the dimer.
int param_count(const ArchitectureSpec &spec);

struct WeightSet {
    Eigen::MatrixXd layer_weights; ///< depth x (blocks * weights_per_block)
    Eigen::VectorXd sb_angles;     ///< depth entries iff symmetry breaking
    Eigen::VectorXd enc_scales;    ///< alpha_enc, or (alpha_O, alpha_H)

    static WeightSet zeros(const ArchitectureSpec &spec);
    void validate(const ArchitectureSpec &spec) const;

    /// Per layer: the block weights then the sb angle; encoding scales last.
    [[nodiscard]] Eigen::VectorXd flatten() const;
    static WeightSet unflatten(const ArchitectureSpec &spec,
                               const Eigen::VectorXd &flat);
};

/// Flat positions into WeightSet::flatten().
int layer_weight_index(const ArchitectureSpec &spec, int layer, int column);
int sb_angle_index(const ArchitectureSpec &spec, int layer);
int encoding_scale_index(const ArchitectureSpec &spec, int which);

/// Centered Cartesian inputs in angstrom: (x1, x2) for monomers, the six
/// dimer atoms in O, H, H, O, H, H order.
struct ModelInput {
    std::vector<Vector3> coords;
};

inline constexpr double kCenteringTolerance = 1e-9;

void validate_input(const ArchitectureSpec &spec, const ModelInput &input,
                    double tol = kCenteringTolerance);

enum class OpKind { encoding, heisenberg, rotation_z };
enum class OpRole { encoding, trainable, symmetry_breaking };

/// One gate plus the bindings needed to differentiate it.
struct CircuitOp {
    GateAction<double> gate;
    OpKind kind;
    OpRole role;
    int layer = 0;
    int weight_index = -1; ///< J, epsilon or alpha position in the flat weights
    int atom = -1;         ///< model-coordinate index (encodings)
    Vector3 x = Vector3::Zero();
    double parameter = 0.0; ///< J, epsilon or alpha
    bool with_ancilla = false;
};

struct Circuit {
    StateVector<double> initial;
    std::vector<CircuitOp> ops;
    Observable observable;
    int num_weights = 0;
    int num_atoms = 0;
};

Observable model_observable(const ArchitectureSpec &spec);
StateVector<double> model_initial_state(const ArchitectureSpec &spec);

Circuit build_circuit(const ArchitectureSpec &spec, const WeightSet &weights,
                      const ModelInput &input);

StateVector<double> run_circuit(const Circuit &circuit);
double evaluate(const Circuit &circuit);
double evaluate(const ArchitectureSpec &spec, const WeightSet &weights,
                const ModelInput &input);

/// Whole-circuit unitary M(X) (columns are M|k>); for checks on small registers.
CMatrix<double> circuit_unitary(const Circuit &circuit);

struct EnergyForces {
    double energy;               ///< eV
    std::vector<Vector3> forces; ///< eV/angstrom, one per raw atom
};

/// Centers raw positions, evaluates the model and maps back to physical
/// units. Forces are chain-ruled through the centering map, so they sum to
/// zero.
EnergyForces predict_energy_forces(const ArchitectureSpec &spec,
                                   const WeightSet &weights,
                                   std::span<const Vector3> raw_positions,
                                   const Scaler &scaler);

} // namespace eqforce
