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
 * Numerical certification of model invariances and of the operator
 * identities behind them.
 */
#pragma once

#include "eqforce/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace eqforce {

struct AuditCheck {
    std::string name;
    double max_deviation = 0.0;
    int trials = 0;
    bool pass = false;
};

struct AuditReport {
    double tolerance = 0.0;
    std::vector<AuditCheck> checks;

    [[nodiscard]] bool all_pass() const;
    void add(std::string name, double max_deviation, int trials);
    void merge(const AuditReport &other);
    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::string to_text() const;
};

/// Random centered input for `system`, coordinates uniform in [-scale, scale].
ModelInput random_model_input(System system, std::mt19937_64 &rng, double scale = 2.0);
EulerRotation random_rotation(std::mt19937_64 &rng);

/**
 * |f(gX) - f(X)| over random inputs and group elements for every symmetry
 * the model claims: rotations (about z only when symmetry breaking is on),
 * hydrogen swaps, molecule swap and the global reflection x -> -x.
 */
AuditReport audit_invariance(const ArchitectureSpec &spec, const WeightSet &weights,
                             int trials, std::uint64_t seed, double tolerance = 1e-9);

/// Dense operator identities of the building blocks on up to four qubits.
AuditReport audit_equivariance(int trials, std::uint64_t seed,
                               double tolerance = 1e-12);

} // namespace eqforce
