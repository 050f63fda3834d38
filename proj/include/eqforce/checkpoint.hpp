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
 * Self-contained JSON checkpoints: architecture, weights, label scaler and
 * training metadata. Numbers use 17 significant digits.
 */
#pragma once

#include "eqforce/model.hpp"
#include "eqforce/scaler.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eqforce {

inline constexpr int kCheckpointFormatVersion = 1;

class CheckpointError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TrainingMetadata {
    std::uint64_t seed = 0;
    int iterations = 0;
    double best_loss = 0.0;
    double train_mse_energy = 0.0;
    std::optional<double> train_mse_force;
    std::optional<double> test_mse_energy;
    std::optional<double> test_mse_force;
    /// Flag echo of the run that produced the checkpoint, in insertion order.
    std::vector<std::pair<std::string, std::string>> config;
};

struct Checkpoint {
    int format_version = kCheckpointFormatVersion;
    ArchitectureSpec architecture;
    WeightSet weights;
    Scaler scaler;
    TrainingMetadata metadata;
};

std::string checkpoint_to_string(const Checkpoint &ckpt);
Checkpoint checkpoint_from_string(const std::string &text);
void save_checkpoint(const Checkpoint &ckpt, const std::filesystem::path &path);
Checkpoint load_checkpoint(const std::filesystem::path &path);

} // namespace eqforce
