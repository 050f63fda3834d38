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

#include <stdexcept>
#include <string>
#include <string_view>

namespace eqforce {

/// Molecular system families with a dedicated invariant model.
enum class System { diatomic, triatomic, dimer };

inline std::string to_string(System s) {
    switch (s) {
    case System::diatomic:
        return "diatomic";
    case System::triatomic:
        return "triatomic";
    case System::dimer:
        return "dimer";
    }
    return "unknown";
}

inline System parse_system(std::string_view name) {
    if (name == "diatomic") {
        return System::diatomic;
    }
    if (name == "triatomic") {
        return System::triatomic;
    }
    if (name == "dimer") {
        return System::dimer;
    }
    throw std::invalid_argument("unknown system '" + std::string(name) +
                                "' (expected diatomic, triatomic or dimer)");
}

inline int num_qubits(System s) { return s == System::dimer ? 7 : 4; }

/// Atoms in a raw configuration: AB, OHH, OHHOHH.
inline int num_atoms(System s) {
    switch (s) {
    case System::diatomic:
        return 2;
    case System::triatomic:
        return 3;
    case System::dimer:
        return 6;
    }
    return 0;
}

/// Position vectors fed to the model after centering.
inline int num_model_atoms(System s) { return s == System::dimer ? 6 : 2; }

} // namespace eqforce
