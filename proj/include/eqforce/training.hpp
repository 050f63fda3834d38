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
#pragma once

#include "eqforce/data.hpp"
#include "eqforce/model.hpp"
#include "eqforce/scaler.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqforce {

/// Non-finite loss or gradient during training.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Spectral range of the model observable, the default label range.
LabelRange default_label_range(const ArchitectureSpec &spec);

std::vector<Vector3> scale_forces(const Scaler &scaler, std::span<const Vector3> forces);
std::vector<Vector3> unscale_forces(const Scaler &scaler, std::span<const Vector3> forces);

enum class LossKind { energy_only, energy_and_force };

struct LossSpec {
    LossKind kind = LossKind::energy_only;
    double energy_weight = 1.0;
    double force_weight = 0.0;

    static LossSpec energy_only() { return {LossKind::energy_only, 1.0, 0.0}; }
    static LossSpec energy_and_force() {
        return {LossKind::energy_and_force, 0.5, 0.5};
    }
};

/// How grad_Theta of the force residual is obtained.
enum class ForceGradientMode { exact, finite_difference };

struct LossValue {
    double value = 0.0;
    double energy_mse = 0.0; ///< scaled units
    double force_mse = 0.0;  ///< scaled units, 0 without force term
    Eigen::VectorXd gradient; ///< flatten() order
};

/**
 * w_E MSE(f - scaled E) + w_F MSE(-grad f - scaled F) over the batch, in
 * scaled units. Force components follow each sample's mask. Samples are
 * reduced sequentially in order.
 */
LossValue loss(const ArchitectureSpec &spec, const WeightSet &weights,
               std::span<const Sample> batch, const Scaler &scaler,
               const LossSpec &loss_spec,
               ForceGradientMode mode = ForceGradientMode::exact);

struct AdamHyper {
    double lr = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    Eigen::VectorXd first_moment;
    Eigen::VectorXd second_moment;
    long step_count = 0;
    AdamHyper hyper;

    static AdamState zeros(Eigen::Index size, AdamHyper hyper = {});
};

/// One bias-corrected ADAM update; returns the new weights.
Eigen::VectorXd adam_step(AdamState &state, const Eigen::VectorXd &weights,
                          const Eigen::VectorXd &gradient);

enum class InitScheme { near_identity, identity_blocks };

struct EarlyStop {
    int window = 100;
    double rel_tol = 1e-9;
};

struct TrainConfig {
    int max_iter = 3000;
    std::uint64_t seed = 0;
    InitScheme init = InitScheme::near_identity;
    double initial_enc_scale = 1.0; ///< starting alpha for every encoding scale
    AdamHyper adam{};
    double noise_std = 0.0; ///< eV, applied by callers via add_label_noise
    LossSpec loss = LossSpec::energy_only();
    std::optional<EarlyStop> early_stop;
    std::optional<LabelRange> label_range; ///< defaults to the observable spectrum
    ForceGradientMode force_gradient = ForceGradientMode::exact;
};

WeightSet initial_weights(const ArchitectureSpec &spec, InitScheme scheme,
                          std::uint64_t seed, double enc_scale = 1.0);

struct TrainResult {
    WeightSet weights;           ///< lowest train loss seen
    Scaler scaler;
    std::vector<double> history; ///< loss at the weights of each iteration
    int iterations = 0;
    double best_loss = 0.0;
};

/// Full-batch ADAM. Fits the scaler on the training energies.
TrainResult train(const ArchitectureSpec &spec, const Dataset &dataset,
                  const TrainConfig &config);

/// Energies += N(0, e_std^2) draws; positions and forces untouched.
Dataset add_label_noise(const Dataset &dataset, double e_std, std::uint64_t seed);

struct Metrics {
    double mse_energy = 0.0;            ///< eV^2
    std::optional<double> mse_force;    ///< eV^2/angstrom^2, absent without labels
};

Metrics metrics(const ArchitectureSpec &spec, const WeightSet &weights,
                const Dataset &dataset, const Scaler &scaler);

} // namespace eqforce
