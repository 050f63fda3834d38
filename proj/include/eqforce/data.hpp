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
 * Datasets of molecular configurations, their JSON-lines file format,
 * centering, and synthetic potential energy surfaces.
 *
 * File layout: the first line is a header object
 *   {"format":"eqforce-dataset","version":1,"system":"diatomic",
 *    "units":{"length":"angstrom","energy":"eV"},"source":"..."}
 * followed by one record per line
 *   {"species":[...],"positions":[[x,y,z],...],"energy":E,
 *    "forces":[[...],...],"force_mask":[[true,false,false],...]}
 * where forces and force_mask are optional. Numbers are written with 17
 * significant digits so values survive a round trip bit for bit.
 */
#pragma once

#include "eqforce/blocks.hpp"
#include "eqforce/model.hpp"
#include "eqforce/system.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eqforce {

using ForceMask = std::vector<std::array<bool, 3>>;

struct Sample {
    std::vector<std::string> species;
    std::vector<Vector3> positions;       ///< angstrom
    double energy = 0.0;                  ///< eV
    std::optional<std::vector<Vector3>> forces; ///< eV/angstrom
    std::optional<ForceMask> force_mask;

    /// Whether component `c` of atom `a` enters force losses and metrics.
    [[nodiscard]] bool force_included(std::size_t a, int c) const {
        return forces.has_value() &&
               (!force_mask.has_value() || (*force_mask)[a][static_cast<std::size_t>(c)]);
    }
};

struct Dataset {
    System system = System::diatomic;
    std::vector<Sample> samples;
    std::string source;
};

/// Malformed dataset content; `line` is 1-based, 0 when not line specific.
class DatasetError : public std::runtime_error {
  public:
    DatasetError(const std::string &what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                  : what),
          line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

Dataset read_dataset(std::istream &in);
void write_dataset(const Dataset &dataset, std::ostream &out);
Dataset load_dataset(const std::filesystem::path &path);
void save_dataset(const Dataset &dataset, const std::filesystem::path &path);

/// Brings every sample into the canonical atom order (triatomic: unique atom
/// first; dimer: X,Y,Y,X,Y,Y) and checks species are homogeneous.
void canonicalize_species(Dataset &dataset);

// ---------------------------------------------------------------------------
// Centering

/// Reference point c = sum_a w_a p_a and the raw atoms fed to the model as
/// p_a - c.
struct CenteringMap {
    std::vector<double> reference_weights;
    std::vector<int> model_atoms;
};

CenteringMap centering_map(System system);

ModelInput center_diatomic(std::span<const Vector3> positions);
ModelInput center_triatomic(std::span<const Vector3> positions);
ModelInput center_dimer(std::span<const Vector3> positions);
ModelInput center_positions(System system, std::span<const Vector3> positions);

/// Gradient over raw atoms from a gradient over model coordinates (J^T g).
std::vector<Vector3> pullback_gradient(System system,
                                       std::span<const Vector3> model_gradient);

/// Model-coordinate vector v with v . g = r . (J^T g) for every g (v = J r).
std::vector<Vector3> pushforward_direction(System system,
                                           std::span<const Vector3> raw_vectors);

// ---------------------------------------------------------------------------
// Synthetic surfaces

enum class BondSampling { uniform, grid };

struct MorseParams {
    double well_depth = 2.5;  ///< eV
    double width = 1.0;       ///< 1/angstrom
    double equilibrium = 1.6; ///< angstrom
    double r_min = 0.9;
    double r_max = 4.5;
    std::string species_a = "Li";
    std::string species_b = "H";
    /// Uniform random bond lengths, or n evenly spaced ones over [r_min, r_max]
    /// (orientations and translations stay random).
    BondSampling sampling = BondSampling::uniform;
};

double morse_energy(double r, const MorseParams &p);
double morse_derivative(double r, const MorseParams &p);
/// Energy and analytic forces of a two-atom configuration.
std::pair<double, std::vector<Vector3>>
morse_energy_forces(std::span<const Vector3> positions, const MorseParams &p);

Dataset synth_diatomic(int n, const MorseParams &params, std::uint64_t seed);

struct WaterParams {
    double bond_k = 45.0;                     ///< eV/angstrom^2
    double bond_length = 0.9572;              ///< angstrom
    double angle_k = 3.3;                     ///< eV/rad^2
    double angle = 1.8242181341844732;        ///< rad (104.52 deg)
    double bond_spread = 0.12;                ///< sampled r0 +- spread
    double angle_spread = 0.26;               ///< sampled theta0 +- spread
};

/// 1/2 k_b (r1-r0)^2 + 1/2 k_b (r2-r0)^2 + 1/2 k_theta (theta-theta0)^2 with
/// analytic forces, atoms ordered O, H, H.
std::pair<double, std::vector<Vector3>>
water_energy_forces(std::span<const Vector3> positions, const WaterParams &p);

Dataset synth_triatomic(int n, const WaterParams &params, std::uint64_t seed);

struct DimerCutParams {
    double harmonic_k = 30.0; ///< eV/angstrom^2
    double quartic = 40.0;    ///< eV/angstrom^4
    double s_min = -0.15;     ///< angstrom
    double s_max = 0.20;
    int moving_atom = 1;      ///< H1 of the first molecule
    int axis = 0;             ///< Cartesian direction of the cut
};

/// E(s) = 1/2 k s^2 + q s^4 along the cut coordinate s.
double cut_energy(double s, const DimerCutParams &p);
double cut_derivative(double s, const DimerCutParams &p);
/// Frozen reference geometry of the dimer (O, H, H, O, H, H).
std::vector<Vector3> dimer_reference_geometry();

Dataset synth_dimer_1dcut(int n, const DimerCutParams &params, std::uint64_t seed);

/// Seeded shuffle, then the first floor(n * fraction) samples go to train.
std::pair<Dataset, Dataset> split(const Dataset &dataset, double fraction,
                                  std::uint64_t seed);

} // namespace eqforce
