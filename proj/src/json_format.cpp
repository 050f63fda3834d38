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
#include "json_format.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace eqforce::detail {

std::string format_double(double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("cannot serialize a non-finite number");
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    std::string out(buf);
    if (out.find_first_of(".eE") == std::string::npos) {
        out += ".0";
    }
    return out;
}

void write_json(std::ostream &out, const nlohmann::ordered_json &value) {
    using value_t = nlohmann::ordered_json::value_t;
    switch (value.type()) {
    case value_t::object: {
        out << '{';
        bool first = true;
        for (const auto &[key, item] : value.items()) {
            if (!first) {
                out << ',';
            }
            first = false;
            out << nlohmann::ordered_json(key).dump() << ':';
            write_json(out, item);
        }
        out << '}';
        break;
    }
    case value_t::array: {
        out << '[';
        bool first = true;
        for (const auto &item : value) {
            if (!first) {
                out << ',';
            }
            first = false;
            write_json(out, item);
        }
        out << ']';
        break;
    }
    case value_t::number_float:
        out << format_double(value.get<double>());
        break;
    default:
        out << value.dump();
        break;
    }
}

std::string to_json_string(const nlohmann::ordered_json &value) {
    std::ostringstream out;
    write_json(out, value);
    return out.str();
}

} // namespace eqforce::detail
