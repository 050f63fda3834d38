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
#include "eqforce/checkpoint.hpp"

#include "json_format.hpp"

#include <fstream>
#include <sstream>

namespace eqforce {

namespace {

using ojson = nlohmann::ordered_json;

ojson vector_json(const Eigen::VectorXd &v) {
    auto out = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

Eigen::VectorXd vector_from(const nlohmann::json &j, Eigen::Index expected,
                            const char *what) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expected) {
        throw CheckpointError(std::string(what) + " has the wrong length");
    }
    Eigen::VectorXd v(expected);
    for (Eigen::Index i = 0; i < expected; ++i) {
        v[i] = j[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

void optional_number(ojson &obj, const char *key, const std::optional<double> &v) {
    if (v) {
        obj[key] = *v;
    } else {
        obj[key] = nullptr;
    }
}

std::optional<double> read_optional(const nlohmann::json &obj, const char *key) {
    if (!obj.contains(key) || obj[key].is_null()) {
        return std::nullopt;
    }
    return obj[key].get<double>();
}

const char *initial_state_name(InitialState s) {
    return s == InitialState::singlet_pairs ? "singlet_pairs" : "all_zero";
}

InitialState parse_initial_state(const std::string &s) {
    if (s == "singlet_pairs") {
        return InitialState::singlet_pairs;
    }
    if (s == "all_zero") {
        return InitialState::all_zero;
    }
    throw CheckpointError("unknown initial state \"" + s + "\"");
}

} // namespace

std::string checkpoint_to_string(const Checkpoint &ckpt) {
    ckpt.architecture.validate();
    ckpt.weights.validate(ckpt.architecture);

    ojson j;
    j["format"] = "eqforce-checkpoint";
    j["format_version"] = ckpt.format_version;

    const ArchitectureSpec &a = ckpt.architecture;
    ojson arch;
    arch["system"] = to_string(a.system);
    arch["depth"] = a.depth;
    arch["blocks"] = a.blocks;
    arch["symmetry_breaking"] = a.symmetry_breaking;
    arch["tie_weights"] = a.tie_weights;
    arch["initial_state"] = initial_state_name(a.initial_state);
    arch["param_count"] = param_count(a);
    j["architecture"] = std::move(arch);

    ojson w;
    auto rows = ojson::array();
    for (Eigen::Index d = 0; d < ckpt.weights.layer_weights.rows(); ++d) {
        rows.push_back(vector_json(ckpt.weights.layer_weights.row(d).transpose()));
    }
    w["layer_weights"] = std::move(rows);
    w["sb_angles"] = vector_json(ckpt.weights.sb_angles);
    w["enc_scales"] = vector_json(ckpt.weights.enc_scales);
    j["weights"] = std::move(w);

    ojson sc;
    sc["slope"] = ckpt.scaler.slope;
    sc["offset"] = ckpt.scaler.offset;
    sc["target_range"] = {ckpt.scaler.target_range.lo, ckpt.scaler.target_range.hi};
    j["scaler"] = std::move(sc);

    const TrainingMetadata &m = ckpt.metadata;
    ojson meta;
    meta["seed"] = m.seed;
    meta["iterations"] = m.iterations;
    meta["best_loss"] = m.best_loss;
    meta["train_mse_energy"] = m.train_mse_energy;
    optional_number(meta, "train_mse_force", m.train_mse_force);
    optional_number(meta, "test_mse_energy", m.test_mse_energy);
    optional_number(meta, "test_mse_force", m.test_mse_force);
    ojson config = ojson::object();
    for (const auto &[k, v] : m.config) {
        config[k] = v;
    }
    meta["config"] = std::move(config);
    j["training"] = std::move(meta);

    return detail::to_json_string(j) + "\n";
}

Checkpoint checkpoint_from_string(const std::string &text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", "") != "eqforce-checkpoint") {
            throw CheckpointError("not an eqforce checkpoint");
        }
        Checkpoint c;
        c.format_version = j.at("format_version").get<int>();
        if (c.format_version != kCheckpointFormatVersion) {
            throw CheckpointError("unsupported checkpoint format_version " +
                                  std::to_string(c.format_version));
        }
        const auto &arch = j.at("architecture");
        c.architecture.system = parse_system(arch.at("system").get<std::string>());
        c.architecture.depth = arch.at("depth").get<int>();
        c.architecture.blocks = arch.at("blocks").get<int>();
        c.architecture.symmetry_breaking = arch.at("symmetry_breaking").get<bool>();
        c.architecture.tie_weights = arch.value("tie_weights", true);
        c.architecture.initial_state =
            parse_initial_state(arch.value("initial_state", std::string("singlet_pairs")));
        c.architecture.validate();

        c.weights = WeightSet::zeros(c.architecture);
        const auto &w = j.at("weights");
        const auto &rows = w.at("layer_weights");
        if (!rows.is_array() ||
            static_cast<Eigen::Index>(rows.size()) != c.weights.layer_weights.rows()) {
            throw CheckpointError("layer_weights has the wrong number of layers");
        }
        for (Eigen::Index d = 0; d < c.weights.layer_weights.rows(); ++d) {
            c.weights.layer_weights.row(d) =
                vector_from(rows[static_cast<std::size_t>(d)], c.weights.layer_weights.cols(),
                            "layer_weights row")
                    .transpose();
        }
        c.weights.sb_angles = vector_from(w.at("sb_angles"), c.weights.sb_angles.size(),
                                          "sb_angles");
        c.weights.enc_scales = vector_from(w.at("enc_scales"), c.weights.enc_scales.size(),
                                           "enc_scales");
        c.weights.validate(c.architecture);

        const auto &sc = j.at("scaler");
        c.scaler.slope = sc.at("slope").get<double>();
        c.scaler.offset = sc.at("offset").get<double>();
        c.scaler.target_range = {sc.at("target_range").at(0).get<double>(),
                                 sc.at("target_range").at(1).get<double>()};
        if (!(c.scaler.slope > 0.0)) {
            throw CheckpointError("scaler slope must be positive");
        }

        if (j.contains("training")) {
            const auto &m = j["training"];
            c.metadata.seed = m.value("seed", std::uint64_t{0});
            c.metadata.iterations = m.value("iterations", 0);
            c.metadata.best_loss = m.value("best_loss", 0.0);
            c.metadata.train_mse_energy = m.value("train_mse_energy", 0.0);
            c.metadata.train_mse_force = read_optional(m, "train_mse_force");
            c.metadata.test_mse_energy = read_optional(m, "test_mse_energy");
            c.metadata.test_mse_force = read_optional(m, "test_mse_force");
            if (m.contains("config")) {
                for (const auto &[k, v] : m["config"].items()) {
                    c.metadata.config.emplace_back(k, v.get<std::string>());
                }
            }
        }
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw CheckpointError(std::string("invalid checkpoint: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw CheckpointError(std::string("invalid checkpoint: ") + e.what());
    }
}

void save_checkpoint(const Checkpoint &ckpt, const std::filesystem::path &path) {
    const std::string text = checkpoint_to_string(ckpt);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write checkpoint " + path.string());
    }
    out << text;
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return checkpoint_from_string(buf.str());
}

} // namespace eqforce
