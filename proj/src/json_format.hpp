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

#include <json.hpp>

#include <ostream>
#include <string>

namespace eqforce::detail {

/// %.17g, with ".0" appended when the text would otherwise parse as an
/// integer (keeps -0.0 and integral doubles typed as floats).
std::string format_double(double value);

/// Compact JSON with every floating-point number written by format_double.
void write_json(std::ostream &out, const nlohmann::ordered_json &value);
std::string to_json_string(const nlohmann::ordered_json &value);

} // namespace eqforce::detail
