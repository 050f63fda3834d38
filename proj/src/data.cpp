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
#include "eqforce/data.hpp"

#include "json_format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace eqforce {

namespace {

constexpr const char *kFormatName = "eqforce-dataset";
constexpr int kFormatVersion = 1;

Vector3 parse_vec3(const nlohmann::json &j, const char *what, std::size_t line) {
    if (!j.is_array() || j.size() != 3) {
        throw DatasetError(std::string(what) + " entries must be 3-vectors", line);
    }
    Vector3 v;
    for (int c = 0; c < 3; ++c) {
        if (!j[static_cast<std::size_t>(c)].is_number()) {
            throw DatasetError(std::string(what) + " entries must be numeric", line);
        }
        v[c] = j[static_cast<std::size_t>(c)].get<double>();
    }
    return v;
}

std::vector<Vector3> parse_vec3_list(const nlohmann::json &j, const char *what,
                                     std::size_t line) {
    if (!j.is_array()) {
        throw DatasetError(std::string("\"") + what + "\" must be an array", line);
    }
    std::vector<Vector3> out;
    for (const auto &item : j) {
        out.push_back(parse_vec3(item, what, line));
    }
    return out;
}

Sample parse_record(const nlohmann::json &j, std::size_t line) {
    if (!j.is_object()) {
        throw DatasetError("record must be a JSON object", line);
    }
    for (const char *key : {"species", "positions", "energy"}) {
        if (!j.contains(key)) {
            throw DatasetError(std::string("record missing \"") + key + "\"", line);
        }
    }
    Sample s;
    if (!j["species"].is_array()) {
        throw DatasetError("\"species\" must be an array of strings", line);
    }
    for (const auto &sp : j["species"]) {
        if (!sp.is_string()) {
            throw DatasetError("\"species\" must be an array of strings", line);
        }
        s.species.push_back(sp.get<std::string>());
    }
    s.positions = parse_vec3_list(j["positions"], "positions", line);
    if (s.positions.size() != s.species.size()) {
        throw DatasetError("positions and species lengths differ", line);
    }
    if (!j["energy"].is_number()) {
        throw DatasetError("\"energy\" must be a number", line);
    }
    s.energy = j["energy"].get<double>();
    if (j.contains("forces") && !j["forces"].is_null()) {
        s.forces = parse_vec3_list(j["forces"], "forces", line);
        if (s.forces->size() != s.positions.size()) {
            throw DatasetError("forces need one 3-vector per atom", line);
        }
    }
    if (j.contains("force_mask") && !j["force_mask"].is_null()) {
        const auto &m = j["force_mask"];
        if (!s.forces) {
            throw DatasetError("force_mask given without forces", line);
        }
        if (!m.is_array() || m.size() != s.positions.size()) {
            throw DatasetError("force_mask needs one entry per atom", line);
        }
        ForceMask mask;
        for (const auto &row : m) {
            if (!row.is_array() || row.size() != 3) {
                throw DatasetError("force_mask entries must be 3 booleans", line);
            }
            std::array<bool, 3> r{};
            for (std::size_t c = 0; c < 3; ++c) {
                if (!row[c].is_boolean()) {
                    throw DatasetError("force_mask entries must be booleans", line);
                }
                r[c] = row[c].get<bool>();
            }
            mask.push_back(r);
        }
        s.force_mask = std::move(mask);
    }
    return s;
}

template <typename V> void permute(std::vector<V> &values, const std::vector<int> &order) {
    std::vector<V> out;
    out.reserve(order.size());
    for (int i : order) {
        out.push_back(values[static_cast<std::size_t>(i)]);
    }
    values = std::move(out);
}

/// Atom order that puts the sample into canonical form for `system`.
std::vector<int> canonical_order(System system, const std::vector<std::string> &species,
                                 std::size_t line) {
    const auto n = static_cast<std::size_t>(num_atoms(system));
    if (species.size() != n) {
        throw DatasetError(to_string(system) + " samples need " + std::to_string(n) +
                               " atoms, got " + std::to_string(species.size()),
                           line);
    }
    switch (system) {
    case System::diatomic:
        return {0, 1};
    case System::triatomic: {
        for (int u = 0; u < 3; ++u) {
            const auto &a = species[static_cast<std::size_t>((u + 1) % 3)];
            const auto &b = species[static_cast<std::size_t>((u + 2) % 3)];
            if (a == b && species[static_cast<std::size_t>(u)] != a) {
                std::vector<int> order{u};
                for (int i = 0; i < 3; ++i) {
                    if (i != u) {
                        order.push_back(i);
                    }
                }
                return order;
            }
        }
        throw DatasetError("ambiguous triatomic species: need one unique atom and two "
                           "identical ones",
                           line);
    }
    case System::dimer: {
        const auto &x = species[0];
        const auto &y = species[1];
        const bool ok = x != y && species[2] == y && species[3] == x && species[4] == y &&
                        species[5] == y;
        if (!ok) {
            throw DatasetError("dimer species must be ordered X,Y,Y,X,Y,Y", line);
        }
        return {0, 1, 2, 3, 4, 5};
    }
    }
    return {};
}

void canonicalize_sample(System system, Sample &s, std::size_t line) {
    const std::vector<int> order = canonical_order(system, s.species, line);
    permute(s.species, order);
    permute(s.positions, order);
    if (s.forces) {
        permute(*s.forces, order);
    }
    if (s.force_mask) {
        permute(*s.force_mask, order);
    }
}

void check_species(const Sample &reference, Sample &s, System system, std::size_t line) {
    if (s.species == reference.species) {
        return;
    }
    if (system == System::diatomic && s.species[0] == reference.species[1] &&
        s.species[1] == reference.species[0]) {
        const std::vector<int> swap{1, 0};
        permute(s.species, swap);
        permute(s.positions, swap);
        if (s.forces) {
            permute(*s.forces, swap);
        }
        if (s.force_mask) {
            permute(*s.force_mask, swap);
        }
        return;
    }
    throw DatasetError("species mismatch with the first record", line);
}

nlohmann::ordered_json vec3_json(const Vector3 &v) {
    return nlohmann::ordered_json::array({v[0], v[1], v[2]});
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

Vector3 random_unit(std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        Vector3 v(gauss(rng), gauss(rng), gauss(rng));
        const double r = v.norm();
        if (r > 1e-12) {
            return v / r;
        }
    }
}

/// Uniformly distributed rotation from a random unit quaternion.
Mat3<double> random_rotation_matrix(std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    q.normalize();
    return q.toRotationMatrix();
}

Vector3 random_translation(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng), u(rng)};
}

} // namespace

Dataset read_dataset(std::istream &in) {
    Dataset ds;
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error &e) {
            throw DatasetError(std::string("malformed JSON: ") + e.what(), line);
        }
        if (!have_header) {
            if (!j.is_object() || j.value("format", "") != kFormatName) {
                throw DatasetError("first line must be the eqforce-dataset header", line);
            }
            if (j.value("version", 0) != kFormatVersion) {
                throw DatasetError("unsupported dataset version", line);
            }
            if (!j.contains("units") || !j["units"].is_object() ||
                j["units"].value("length", "") != "angstrom" ||
                j["units"].value("energy", "") != "eV") {
                throw DatasetError(
                    "header needs units {\"length\":\"angstrom\",\"energy\":\"eV\"}", line);
            }
            if (!j.contains("system") || !j["system"].is_string()) {
                throw DatasetError("header missing \"system\"", line);
            }
            try {
                ds.system = parse_system(j["system"].get<std::string>());
            } catch (const std::invalid_argument &e) {
                throw DatasetError(e.what(), line);
            }
            ds.source = j.value("source", "");
            have_header = true;
            continue;
        }
        Sample s = parse_record(j, line);
        canonicalize_sample(ds.system, s, line);
        if (!ds.samples.empty()) {
            check_species(ds.samples.front(), s, ds.system, line);
        }
        ds.samples.push_back(std::move(s));
    }
    if (!have_header) {
        throw DatasetError("empty dataset file (no header)", 0);
    }
    return ds;
}

void write_dataset(const Dataset &dataset, std::ostream &out) {
    nlohmann::ordered_json header;
    header["format"] = kFormatName;
    header["version"] = kFormatVersion;
    header["system"] = to_string(dataset.system);
    header["units"] = {{"length", "angstrom"}, {"energy", "eV"}};
    header["source"] = dataset.source;
    detail::write_json(out, header);
    out << '\n';
    for (const auto &s : dataset.samples) {
        nlohmann::ordered_json rec;
        rec["species"] = s.species;
        auto pos = nlohmann::ordered_json::array();
        for (const auto &p : s.positions) {
            pos.push_back(vec3_json(p));
        }
        rec["positions"] = std::move(pos);
        rec["energy"] = s.energy;
        if (s.forces) {
            auto f = nlohmann::ordered_json::array();
            for (const auto &v : *s.forces) {
                f.push_back(vec3_json(v));
            }
            rec["forces"] = std::move(f);
        }
        if (s.force_mask) {
            auto m = nlohmann::ordered_json::array();
            for (const auto &row : *s.force_mask) {
                m.push_back({row[0], row[1], row[2]});
            }
            rec["force_mask"] = std::move(m);
        }
        detail::write_json(out, rec);
        out << '\n';
    }
}

Dataset load_dataset(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset " + path.string());
    }
    return read_dataset(in);
}

void save_dataset(const Dataset &dataset, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write dataset " + path.string());
    }
    write_dataset(dataset, out);
}

void canonicalize_species(Dataset &dataset) {
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        canonicalize_sample(dataset.system, dataset.samples[i], 0);
        if (i > 0) {
            check_species(dataset.samples.front(), dataset.samples[i], dataset.system, 0);
        }
    }
}

// ---------------------------------------------------------------------------

CenteringMap centering_map(System system) {
    switch (system) {
    case System::diatomic:
        return {{0.5, 0.5}, {0, 1}};
    case System::triatomic:
        return {{1.0, 0.0, 0.0}, {1, 2}};
    case System::dimer:
        return {{0.5, 0.0, 0.0, 0.5, 0.0, 0.0}, {0, 1, 2, 3, 4, 5}};
    }
    return {};
}

ModelInput center_positions(System system, std::span<const Vector3> positions) {
    const CenteringMap map = centering_map(system);
    if (positions.size() != map.reference_weights.size()) {
        throw std::invalid_argument(to_string(system) + " centering needs " +
                                    std::to_string(map.reference_weights.size()) +
                                    " positions");
    }
    Vector3 c = Vector3::Zero();
    for (std::size_t a = 0; a < positions.size(); ++a) {
        if (map.reference_weights[a] != 0.0) {
            c += map.reference_weights[a] * positions[a];
        }
    }
    ModelInput out;
    for (int a : map.model_atoms) {
        out.coords.push_back(positions[static_cast<std::size_t>(a)] - c);
    }
    if (system == System::diatomic) {
        // exact x1 = -x2
        out.coords[1] = -out.coords[0];
    } else if (system == System::dimer) {
        out.coords[3] = -out.coords[0];
    }
    return out;
}

ModelInput center_diatomic(std::span<const Vector3> positions) {
    return center_positions(System::diatomic, positions);
}

ModelInput center_triatomic(std::span<const Vector3> positions) {
    return center_positions(System::triatomic, positions);
}

ModelInput center_dimer(std::span<const Vector3> positions) {
    return center_positions(System::dimer, positions);
}

std::vector<Vector3> pullback_gradient(System system,
                                       std::span<const Vector3> model_gradient) {
    const CenteringMap map = centering_map(system);
    if (model_gradient.size() != map.model_atoms.size()) {
        throw std::invalid_argument("model gradient size does not match system");
    }
    Vector3 total = Vector3::Zero();
    for (const auto &g : model_gradient) {
        total += g;
    }
    std::vector<Vector3> raw(map.reference_weights.size(), Vector3::Zero());
    for (std::size_t j = 0; j < map.model_atoms.size(); ++j) {
        raw[static_cast<std::size_t>(map.model_atoms[j])] += model_gradient[j];
    }
    for (std::size_t a = 0; a < raw.size(); ++a) {
        raw[a] -= map.reference_weights[a] * total;
    }
    return raw;
}

std::vector<Vector3> pushforward_direction(System system,
                                           std::span<const Vector3> raw_vectors) {
    const CenteringMap map = centering_map(system);
    if (raw_vectors.size() != map.reference_weights.size()) {
        throw std::invalid_argument("raw vector count does not match system");
    }
    Vector3 ref = Vector3::Zero();
    for (std::size_t a = 0; a < raw_vectors.size(); ++a) {
        ref += map.reference_weights[a] * raw_vectors[a];
    }
    std::vector<Vector3> out;
    for (int a : map.model_atoms) {
        out.push_back(raw_vectors[static_cast<std::size_t>(a)] - ref);
    }
    return out;
}

// ---------------------------------------------------------------------------

double morse_energy(double r, const MorseParams &p) {
    const double e = 1.0 - std::exp(-p.width * (r - p.equilibrium));
    return p.well_depth * e * e;
}

double morse_derivative(double r, const MorseParams &p) {
    const double x = std::exp(-p.width * (r - p.equilibrium));
    return 2.0 * p.well_depth * p.width * x * (1.0 - x);
}

std::pair<double, std::vector<Vector3>>
morse_energy_forces(std::span<const Vector3> positions, const MorseParams &p) {
    const Vector3 d = positions[1] - positions[0];
    const double r = d.norm();
    const Vector3 u = d / r;
    const double de = morse_derivative(r, p);
    return {morse_energy(r, p), {de * u, -de * u}};
}

Dataset synth_diatomic(int n, const MorseParams &params, std::uint64_t seed) {
    if (n < 0 || !(params.r_min > 0.0) || !(params.r_max >= params.r_min)) {
        throw std::invalid_argument("invalid diatomic generator settings");
    }
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> bond(params.r_min, params.r_max);
    Dataset ds;
    ds.system = System::diatomic;
    ds.source = "synthetic morse";
    for (int i = 0; i < n; ++i) {
        double r = bond(rng);
        if (params.sampling == BondSampling::grid) {
            r = n == 1 ? params.r_min
                       : params.r_min + (params.r_max - params.r_min) * i / (n - 1);
        }
        const Vector3 u = random_unit(rng);
        const Vector3 c = random_translation(rng);
        Sample s;
        s.species = {params.species_a, params.species_b};
        s.positions = {c - 0.5 * r * u, c + 0.5 * r * u};
        auto [e, f] = morse_energy_forces(s.positions, params);
        s.energy = e;
        s.forces = std::move(f);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

std::pair<double, std::vector<Vector3>>
water_energy_forces(std::span<const Vector3> positions, const WaterParams &p) {
    const Vector3 u1 = positions[1] - positions[0];
    const Vector3 u2 = positions[2] - positions[0];
    const double r1 = u1.norm(), r2 = u2.norm();
    const Vector3 e1 = u1 / r1, e2 = u2 / r2;
    const double cos_t = std::clamp(e1.dot(e2), -1.0, 1.0);
    const double theta = std::acos(cos_t);
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));

    const double energy = 0.5 * p.bond_k * ((r1 - p.bond_length) * (r1 - p.bond_length) +
                                            (r2 - p.bond_length) * (r2 - p.bond_length)) +
                          0.5 * p.angle_k * (theta - p.angle) * (theta - p.angle);

    const double de_r1 = p.bond_k * (r1 - p.bond_length);
    const double de_r2 = p.bond_k * (r2 - p.bond_length);
    const double de_t = p.angle_k * (theta - p.angle);
    const Vector3 dt_h1 = -(e2 - cos_t * e1) / (r1 * sin_t);
    const Vector3 dt_h2 = -(e1 - cos_t * e2) / (r2 * sin_t);

    const Vector3 g_h1 = de_r1 * e1 + de_t * dt_h1;
    const Vector3 g_h2 = de_r2 * e2 + de_t * dt_h2;
    const Vector3 g_o = -(g_h1 + g_h2);
    return {energy, {-g_o, -g_h1, -g_h2}};
}

Dataset synth_triatomic(int n, const WaterParams &params, std::uint64_t seed) {
    if (n < 0) {
        throw std::invalid_argument("sample count must be non-negative");
    }
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> bond(params.bond_length - params.bond_spread,
                                                params.bond_length + params.bond_spread);
    std::uniform_real_distribution<double> angle(params.angle - params.angle_spread,
                                                 params.angle + params.angle_spread);
    Dataset ds;
    ds.system = System::triatomic;
    ds.source = "synthetic harmonic water";
    for (int i = 0; i < n; ++i) {
        const double r1 = bond(rng), r2 = bond(rng), theta = angle(rng);
        const Mat3<double> rot = random_rotation_matrix(rng);
        const Vector3 origin = random_translation(rng);
        Sample s;
        s.species = {"O", "H", "H"};
        s.positions = {origin, origin + rot * Vector3(r1, 0.0, 0.0),
                       origin + rot * Vector3(r2 * std::cos(theta), r2 * std::sin(theta), 0.0)};
        auto [e, f] = water_energy_forces(s.positions, params);
        s.energy = e;
        s.forces = std::move(f);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

double cut_energy(double s, const DimerCutParams &p) {
    return 0.5 * p.harmonic_k * s * s + p.quartic * s * s * s * s;
}

double cut_derivative(double s, const DimerCutParams &p) {
    return p.harmonic_k * s + 4.0 * p.quartic * s * s * s;
}

std::vector<Vector3> dimer_reference_geometry() {
    const Vector3 shift(0.3, -0.2, 0.1);
    return {
        Vector3(-1.45, 0.00, 0.00) + shift,  Vector3(-0.49, 0.05, 0.03) + shift,
        Vector3(-1.75, 0.90, 0.05) + shift,  Vector3(1.45, 0.00, 0.00) + shift,
        Vector3(1.80, -0.45, 0.75) + shift,  Vector3(1.80, -0.45, -0.75) + shift,
    };
}

Dataset synth_dimer_1dcut(int n, const DimerCutParams &params, std::uint64_t seed) {
    if (n < 0 || params.moving_atom < 0 || params.moving_atom >= 6 || params.axis < 0 ||
        params.axis > 2 || !(params.s_max >= params.s_min)) {
        throw std::invalid_argument("invalid dimer cut settings");
    }
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> disp(params.s_min, params.s_max);
    const auto reference = dimer_reference_geometry();
    const auto moving = static_cast<std::size_t>(params.moving_atom);
    Dataset ds;
    ds.system = System::dimer;
    ds.source = "synthetic dimer 1d cut";
    for (int i = 0; i < n; ++i) {
        const double s = disp(rng);
        Sample smp;
        smp.species = {"O", "H", "H", "O", "H", "H"};
        smp.positions = reference;
        smp.positions[moving][params.axis] += s;
        smp.energy = cut_energy(s, params);
        std::vector<Vector3> forces(6, Vector3::Zero());
        forces[moving][params.axis] = -cut_derivative(s, params);
        smp.forces = std::move(forces);
        ForceMask mask(6, {false, false, false});
        mask[moving][static_cast<std::size_t>(params.axis)] = true;
        smp.force_mask = std::move(mask);
        ds.samples.push_back(std::move(smp));
    }
    return ds;
}

std::pair<Dataset, Dataset> split(const Dataset &dataset, double fraction,
                                  std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("split fraction must lie in [0, 1]");
    }
    std::vector<std::size_t> order(dataset.samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = make_rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const auto n_train =
        static_cast<std::size_t>(std::floor(static_cast<double>(order.size()) * fraction));
    Dataset train{dataset.system, {}, dataset.source};
    Dataset test{dataset.system, {}, dataset.source};
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? train : test).samples.push_back(dataset.samples[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

} // namespace eqforce
