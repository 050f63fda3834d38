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

#include <span>
#include <utility>

namespace eqforce {

struct LabelRange {
    double lo = -1.0;
    double hi = 1.0;
};

/// Affine label map scaled = slope * E + offset. Forces scale by the slope
/// alone.
struct Scaler {
    double slope = 1.0;
    double offset = 0.0;
    LabelRange target_range{};

    [[nodiscard]] double scale_energy(double e) const { return slope * e + offset; }
    [[nodiscard]] double unscale_energy(double f) const { return (f - offset) / slope; }
    [[nodiscard]] double scale_force(double f) const { return slope * f; }
    [[nodiscard]] double unscale_force(double f) const { return f / slope; }
};

/// Min-max fit sending [E_min, E_max] onto [lo, hi]. Throws on fewer than two
/// distinct energies or an empty/inverted range.
Scaler fit_scaler(std::span<const double> energies, LabelRange range);

} // namespace eqforce
