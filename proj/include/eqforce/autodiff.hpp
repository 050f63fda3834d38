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
 * Exact derivatives of the model output by adjoint sweeps over the gate list.
 *
 * For f = <psi_n|O|psi_n> and psi_{k+1} = G_k psi_k, the derivative with
 * respect to a parameter p of gate k is 2 Re <lambda_{k+1}| dG_k/dp |psi_k>,
 * where lambda_{k+1} = G_{k+1}^dagger ... G_{n-1}^dagger O psi_n. Each gate
 * family has a closed-form dG/dp.
 *
 * The directional variant propagates a tangent along an input direction v
 * through both the forward and the adjoint sweep, which yields
 * grad_Theta (v . grad_x f) exactly. Training with force labels needs this
 * mixed derivative.
 */
#pragma once

#include "eqforce/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace eqforce {

/// Below this |x| the coordinate derivative of an encoding uses its series
/// limit -i alpha S_k.
inline constexpr double kSeriesThreshold = 1e-8;

struct ParameterId {
    enum class Kind { weight, coordinate };
    Kind kind = Kind::weight;
    int index = 0;     ///< flat weight index, or model atom
    int component = 0; ///< Cartesian component for coordinates
};

struct GateDerivative {
    std::size_t gate_index = 0;
    ParameterId parameter;
    CMatrix<double> dmatrix;
};

/// d/dJ exp(-i J S) with S = XX+YY+ZZ: -i S U.
CMatrix<double> heisenberg_derivative(double coupling);
/// d/d(eps) R_Z(eps): -(i/2) Z U.
CMatrix<double> rz_derivative(double angle);
/// d/d(alpha) of an encoding: -i (x.S) U.
CMatrix<double> encoding_scale_derivative(const Vector3 &x, double alpha,
                                          bool with_ancilla);
/// d/dx_k of an encoding, switching to the series limit for |x| < kSeriesThreshold.
CMatrix<double> encoding_coordinate_derivative(const Vector3 &x, double alpha,
                                               int component, bool with_ancilla);

/// All closed-form derivatives of one circuit gate (weights and coordinates).
std::vector<GateDerivative> gate_derivatives(const Circuit &circuit,
                                             std::size_t gate_index);

struct ModelGradient {
    double value = 0.0;
    Eigen::VectorXd weights;     ///< d f / d Theta in flatten() order
    std::vector<Vector3> inputs; ///< d f / d x_i per model coordinate
};

/// One forward pass plus one adjoint sweep.
ModelGradient adjoint_gradient(const Circuit &circuit);

Eigen::VectorXd grad_weights(const ArchitectureSpec &spec, const WeightSet &weights,
                             const ModelInput &input);
std::vector<Vector3> grad_inputs(const ArchitectureSpec &spec,
                                 const WeightSet &weights, const ModelInput &input);

struct DirectionalGradient {
    double value = 0.0;
    double derivative = 0.0;          ///< v . grad_x f
    Eigen::VectorXd weights;          ///< grad_Theta f
    Eigen::VectorXd derivative_weights; ///< grad_Theta (v . grad_x f)
};

/// Forward-over-reverse sweep along the model-coordinate direction `v`.
DirectionalGradient directional_adjoint(const Circuit &circuit,
                                        std::span<const Vector3> direction);

/// Central differences (f(p + h e_i) - f(p - h e_i)) / 2h.
Eigen::VectorXd finite_diff_oracle(const std::function<double(const Eigen::VectorXd &)> &f,
                                   const Eigen::VectorXd &point, double h = 1e-5);

} // namespace eqforce
