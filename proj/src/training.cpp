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
#include "eqforce/training.hpp"

#include "eqforce/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace eqforce {

Scaler fit_scaler(std::span<const double> energies, LabelRange range) {
    if (!(range.hi > range.lo)) {
        throw std::invalid_argument("label range must satisfy lo < hi");
    }
    if (energies.empty()) {
        throw std::invalid_argument("cannot fit a scaler to no energies");
    }
    const auto [lo_it, hi_it] = std::minmax_element(energies.begin(), energies.end());
    const double e_min = *lo_it, e_max = *hi_it;
    if (!std::isfinite(e_min) || !std::isfinite(e_max)) {
        throw std::invalid_argument("energies must be finite");
    }
    if (!(e_max > e_min)) {
        throw std::invalid_argument("degenerate energies: need at least two distinct values");
    }
    Scaler s;
    s.slope = (range.hi - range.lo) / (e_max - e_min);
    s.offset = range.lo - s.slope * e_min;
    s.target_range = range;
    return s;
}

LabelRange default_label_range(const ArchitectureSpec &spec) {
    const auto sr = spectral_range(model_observable(spec));
    return {sr.min, sr.max};
}

std::vector<Vector3> scale_forces(const Scaler &scaler, std::span<const Vector3> forces) {
    std::vector<Vector3> out;
    out.reserve(forces.size());
    for (const auto &f : forces) {
        out.push_back(scaler.slope * f);
    }
    return out;
}

std::vector<Vector3> unscale_forces(const Scaler &scaler, std::span<const Vector3> forces) {
    std::vector<Vector3> out;
    out.reserve(forces.size());
    for (const auto &f : forces) {
        out.push_back(f / scaler.slope);
    }
    return out;
}

namespace {

/// v . grad_x f at fixed weights, through grad_inputs.
double directional_derivative(const ArchitectureSpec &spec, const WeightSet &weights,
                              const ModelInput &input, std::span<const Vector3> v) {
    const auto g = grad_inputs(spec, weights, input);
    double out = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        out += g[j].dot(v[j]);
    }
    return out;
}

} // namespace

LossValue loss(const ArchitectureSpec &spec, const WeightSet &weights,
               std::span<const Sample> batch, const Scaler &scaler,
               const LossSpec &loss_spec, ForceGradientMode mode) {
    spec.validate();
    weights.validate(spec);
    if (batch.empty()) {
        throw std::invalid_argument("loss needs a nonempty batch");
    }
    const bool use_forces =
        loss_spec.kind == LossKind::energy_and_force && loss_spec.force_weight != 0.0;

    const Eigen::Index p = param_count(spec);
    Eigen::VectorXd energy_grad = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd force_grad = Eigen::VectorXd::Zero(p);
    double energy_sq = 0.0, force_sq = 0.0;
    long force_count = 0;

    for (std::size_t s = 0; s < batch.size(); ++s) {
        const Sample &sample = batch[s];
        if (use_forces && !sample.forces) {
            throw std::invalid_argument("sample " + std::to_string(s) +
                                        " has no force labels");
        }
        const ModelInput input = center_positions(spec.system, sample.positions);
        const Circuit circuit = build_circuit(spec, weights, input);
        const ModelGradient g = adjoint_gradient(circuit);

        const double e_res = g.value - scaler.scale_energy(sample.energy);
        energy_sq += e_res * e_res;
        energy_grad += (2.0 * e_res) * g.weights;

        if (!use_forces) {
            continue;
        }
        const auto raw_grad = pullback_gradient(spec.system, g.inputs);
        std::vector<Vector3> residual(raw_grad.size(), Vector3::Zero());
        for (std::size_t a = 0; a < raw_grad.size(); ++a) {
            for (int c = 0; c < 3; ++c) {
                if (sample.force_included(a, c)) {
                    residual[a][c] =
                        -raw_grad[a][c] - scaler.scale_force((*sample.forces)[a][c]);
                    force_sq += residual[a][c] * residual[a][c];
                    ++force_count;
                }
            }
        }
        // sum_a r_a . (-df/dp_a) = -(v . grad_x f) with v the pushed-forward residual
        const auto v = pushforward_direction(spec.system, residual);
        if (mode == ForceGradientMode::exact) {
            const DirectionalGradient dg = directional_adjoint(circuit, v);
            force_grad -= 2.0 * dg.derivative_weights;
        } else {
            constexpr double h = 1e-4;
            const Eigen::VectorXd flat = weights.flatten();
            Eigen::VectorXd probe = flat;
            for (Eigen::Index i = 0; i < p; ++i) {
                probe[i] = flat[i] + h;
                const double up = directional_derivative(
                    spec, WeightSet::unflatten(spec, probe), input, v);
                probe[i] = flat[i] - h;
                const double down = directional_derivative(
                    spec, WeightSet::unflatten(spec, probe), input, v);
                probe[i] = flat[i];
                force_grad[i] -= 2.0 * (up - down) / (2.0 * h);
            }
        }
    }

    const auto n = static_cast<double>(batch.size());
    LossValue out;
    out.energy_mse = energy_sq / n;
    out.value = loss_spec.energy_weight * out.energy_mse;
    out.gradient = (loss_spec.energy_weight / n) * energy_grad;
    if (use_forces) {
        if (force_count == 0) {
            throw std::invalid_argument("force loss requested but no force component is "
                                        "included by the masks");
        }
        const auto k = static_cast<double>(force_count);
        out.force_mse = force_sq / k;
        out.value += loss_spec.force_weight * out.force_mse;
        out.gradient += (loss_spec.force_weight / k) * force_grad;
    }
    return out;
}

AdamState AdamState::zeros(Eigen::Index size, AdamHyper hyper) {
    AdamState s;
    s.first_moment = Eigen::VectorXd::Zero(size);
    s.second_moment = Eigen::VectorXd::Zero(size);
    s.hyper = hyper;
    return s;
}

Eigen::VectorXd adam_step(AdamState &state, const Eigen::VectorXd &weights,
                          const Eigen::VectorXd &gradient) {
    if (weights.size() != gradient.size() || weights.size() != state.first_moment.size() ||
        weights.size() != state.second_moment.size()) {
        throw std::invalid_argument("ADAM shapes do not match");
    }
    const AdamHyper &h = state.hyper;
    ++state.step_count;
    state.first_moment = h.beta1 * state.first_moment + (1.0 - h.beta1) * gradient;
    state.second_moment =
        h.beta2 * state.second_moment + (1.0 - h.beta2) * gradient.cwiseAbs2();
    const auto t = static_cast<double>(state.step_count);
    const double c1 = 1.0 - std::pow(h.beta1, t);
    const double c2 = 1.0 - std::pow(h.beta2, t);
    Eigen::VectorXd out = weights;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        const double m_hat = state.first_moment[i] / c1;
        const double v_hat = state.second_moment[i] / c2;
        out[i] -= h.lr * m_hat / (std::sqrt(v_hat) + h.eps);
    }
    return out;
}

WeightSet initial_weights(const ArchitectureSpec &spec, InitScheme scheme,
                          std::uint64_t seed, double enc_scale) {
    spec.validate();
    WeightSet w = WeightSet::zeros(spec);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.01, 0.01);
    for (Eigen::Index d = 0; d < w.layer_weights.rows(); ++d) {
        for (Eigen::Index c = 0; c < w.layer_weights.cols(); ++c) {
            w.layer_weights(d, c) = u(rng);
        }
    }
    if (scheme == InitScheme::identity_blocks) {
        for (Eigen::Index d = 1; d < w.layer_weights.rows(); d += 2) {
            w.layer_weights.row(d) = -w.layer_weights.row(d - 1);
        }
    }
    w.sb_angles.setConstant(0.1);
    w.enc_scales.setConstant(enc_scale);
    return w;
}

TrainResult train(const ArchitectureSpec &spec, const Dataset &dataset,
                  const TrainConfig &config) {
    spec.validate();
    if (config.max_iter < 1) {
        throw std::invalid_argument("max_iter must be at least 1");
    }
    if (dataset.system != spec.system) {
        throw std::invalid_argument("dataset system does not match the architecture");
    }
    if (dataset.samples.empty()) {
        throw std::invalid_argument("training set is empty");
    }
    std::vector<double> energies;
    energies.reserve(dataset.samples.size());
    for (const auto &s : dataset.samples) {
        energies.push_back(s.energy);
    }

    TrainResult result;
    result.scaler =
        fit_scaler(energies, config.label_range.value_or(default_label_range(spec)));

    WeightSet current = initial_weights(spec, config.init, config.seed, config.initial_enc_scale);
    Eigen::VectorXd flat = current.flatten();
    AdamState adam = AdamState::zeros(flat.size(), config.adam);

    result.weights = current;
    result.best_loss = std::numeric_limits<double>::infinity();
    double window_start_best = result.best_loss;

    for (int it = 0; it < config.max_iter; ++it) {
        const LossValue lv = loss(spec, current, dataset.samples, result.scaler, config.loss,
                                  config.force_gradient);
        if (!std::isfinite(lv.value) || !lv.gradient.allFinite()) {
            throw NumericError("non-finite loss or gradient at iteration " +
                               std::to_string(it));
        }
        result.history.push_back(lv.value);
        if (lv.value < result.best_loss) {
            result.best_loss = lv.value;
            result.weights = current;
        }
        flat = adam_step(adam, flat, lv.gradient);
        current = WeightSet::unflatten(spec, flat);
        result.iterations = it + 1;

        if (config.early_stop && (it + 1) % config.early_stop->window == 0) {
            const bool stalled =
                std::isfinite(window_start_best) &&
                window_start_best - result.best_loss <=
                    config.early_stop->rel_tol * std::abs(window_start_best);
            if (stalled) {
                break;
            }
            window_start_best = result.best_loss;
        }
    }
    return result;
}

Dataset add_label_noise(const Dataset &dataset, double e_std, std::uint64_t seed) {
    if (!(e_std >= 0.0)) {
        throw std::invalid_argument("noise standard deviation must be non-negative");
    }
    Dataset out = dataset;
    if (e_std == 0.0) {
        return out;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, e_std);
    for (auto &s : out.samples) {
        s.energy += gauss(rng);
    }
    return out;
}

Metrics metrics(const ArchitectureSpec &spec, const WeightSet &weights,
                const Dataset &dataset, const Scaler &scaler) {
    if (dataset.samples.empty()) {
        throw std::invalid_argument("metrics need a nonempty dataset");
    }
    double e_sq = 0.0, f_sq = 0.0;
    long f_count = 0;
    for (const auto &s : dataset.samples) {
        const EnergyForces ef = predict_energy_forces(spec, weights, s.positions, scaler);
        e_sq += (ef.energy - s.energy) * (ef.energy - s.energy);
        for (std::size_t a = 0; a < s.positions.size(); ++a) {
            for (int c = 0; c < 3; ++c) {
                if (s.force_included(a, c)) {
                    const double d = ef.forces[a][c] - (*s.forces)[a][c];
                    f_sq += d * d;
                    ++f_count;
                }
            }
        }
    }
    Metrics m;
    m.mse_energy = e_sq / static_cast<double>(dataset.samples.size());
    if (f_count > 0) {
        m.mse_force = f_sq / static_cast<double>(f_count);
    }
    return m;
}

EnergyForces predict_energy_forces(const ArchitectureSpec &spec, const WeightSet &weights,
                                   std::span<const Vector3> raw_positions,
                                   const Scaler &scaler) {
    const ModelInput input = center_positions(spec.system, raw_positions);
    const ModelGradient g = adjoint_gradient(build_circuit(spec, weights, input));
    const auto raw = pullback_gradient(spec.system, g.inputs);
    EnergyForces out;
    out.energy = scaler.unscale_energy(g.value);
    out.forces.reserve(raw.size());
    for (const auto &v : raw) {
        out.forces.push_back(-v / scaler.slope);
    }
    return out;
}

} // namespace eqforce
