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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

namespace eqforce {
namespace {

const char *kHeader =
    R"({"format":"eqforce-dataset","version":1,"system":"diatomic","units":{"length":"angstrom","energy":"eV"}})";

Vector3 random_vec(std::mt19937_64 &rng, double scale = 3.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

template <typename EnergyForces>
void expect_forces_are_negative_gradient(std::vector<Vector3> pos, EnergyForces &&ef) {
    const auto [e, f] = ef(pos);
    (void)e;
    const double h = 1e-5;
    for (std::size_t a = 0; a < pos.size(); ++a) {
        for (int k = 0; k < 3; ++k) {
            auto plus = pos, minus = pos;
            plus[a][k] += h;
            minus[a][k] -= h;
            const double fd = -(ef(plus).first - ef(minus).first) / (2 * h);
            EXPECT_NEAR(f[a][k], fd, 1e-8 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST(DatasetIo, RoundTripIsBitIdentical) {
    Dataset d = synth_triatomic(20, WaterParams{}, 4);
    std::stringstream buf;
    write_dataset(d, buf);
    const Dataset back = read_dataset(buf);
    ASSERT_EQ(back.samples.size(), d.samples.size());
    EXPECT_EQ(back.system, System::triatomic);
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        EXPECT_EQ(back.samples[i].energy, d.samples[i].energy);
        for (std::size_t a = 0; a < 3; ++a) {
            EXPECT_EQ(back.samples[i].positions[a], d.samples[i].positions[a]);
            EXPECT_EQ((*back.samples[i].forces)[a], (*d.samples[i].forces)[a]);
        }
    }
}

TEST(DatasetIo, FileRoundTrip) {
    const Dataset d = synth_dimer_1dcut(5, DimerCutParams{}, 2);
    const auto path = std::filesystem::temp_directory_path() / "eqforce_test_roundtrip.jsonl";
    save_dataset(d, path);
    const Dataset back = load_dataset(path);
    std::filesystem::remove(path);
    ASSERT_EQ(back.samples.size(), 5u);
    EXPECT_EQ(*back.samples[3].force_mask, *d.samples[3].force_mask);
    EXPECT_EQ(back.samples[3].energy, d.samples[3].energy);
}

TEST(DatasetIo, MissingEnergyNamesLine) {
    std::stringstream in;
    in << kHeader << "\n"
       << R"({"species":["Li","H"],"positions":[[0,0,0],[0,0,1.6]],"energy":0.1})" << "\n"
       << R"({"species":["Li","H"],"positions":[[0,0,0],[0,0,1.7]]})" << "\n";
    try {
        read_dataset(in);
        FAIL() << "expected DatasetError";
    } catch (const DatasetError &e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("energy"), std::string::npos);
    }
}

TEST(DatasetIo, ForcesOptionalPerSample) {
    std::stringstream in;
    in << kHeader << "\n"
       << R"({"species":["Li","H"],"positions":[[0,0,0],[0,0,1.6]],"energy":0.1,"forces":[[0,0,1],[0,0,-1]]})"
       << "\n"
       << R"({"species":["Li","H"],"positions":[[0,0,0],[0,0,1.7]],"energy":0.2})" << "\n";
    const Dataset d = read_dataset(in);
    ASSERT_EQ(d.samples.size(), 2u);
    EXPECT_TRUE(d.samples[0].forces.has_value());
    EXPECT_FALSE(d.samples[1].forces.has_value());
}

TEST(DatasetIo, HeaderErrors) {
    std::stringstream empty;
    EXPECT_THROW(read_dataset(empty), DatasetError);
    std::stringstream no_units;
    no_units << R"({"format":"eqforce-dataset","version":1,"system":"diatomic"})" << "\n";
    EXPECT_THROW(read_dataset(no_units), DatasetError);
    std::stringstream bad_json;
    bad_json << kHeader << "\n{not json\n";
    try {
        read_dataset(bad_json);
        FAIL();
    } catch (const DatasetError &e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(DatasetIo, SpeciesMismatchRejected) {
    std::stringstream in;
    in << kHeader << "\n"
       << R"({"species":["Li","H"],"positions":[[0,0,0],[0,0,1.6]],"energy":0.1})" << "\n"
       << R"({"species":["Na","H"],"positions":[[0,0,0],[0,0,1.7]],"energy":0.2})" << "\n";
    EXPECT_THROW(read_dataset(in), DatasetError);
}

TEST(Canonicalize, TriatomicUniqueAtomMovesFirst) {
    std::stringstream in;
    in << R"({"format":"eqforce-dataset","version":1,"system":"triatomic","units":{"length":"angstrom","energy":"eV"}})"
       << "\n"
       << R"({"species":["H","O","H"],"positions":[[1,0,0],[0,0,0],[0,1,0]],"energy":0.5,"forces":[[1,0,0],[2,0,0],[3,0,0]]})"
       << "\n";
    const Dataset d = read_dataset(in);
    EXPECT_EQ(d.samples[0].species[0], "O");
    EXPECT_EQ(d.samples[0].positions[0], Vector3(0, 0, 0));
    EXPECT_EQ((*d.samples[0].forces)[0], Vector3(2, 0, 0));
}

TEST(Canonicalize, DimerOrderEnforced) {
    std::stringstream in;
    in << R"({"format":"eqforce-dataset","version":1,"system":"dimer","units":{"length":"angstrom","energy":"eV"}})"
       << "\n"
       << R"({"species":["O","O","H","H","H","H"],"positions":[[0,0,0],[1,0,0],[2,0,0],[3,0,0],[4,0,0],[5,0,0]],"energy":0})"
       << "\n";
    EXPECT_THROW(read_dataset(in), DatasetError);
}

TEST(Centering, DiatomicMidpoint) {
    const std::vector<Vector3> p{Vector3(0, 0, 0), Vector3(0, 0, 1.6)};
    const ModelInput m = center_diatomic(p);
    EXPECT_EQ(m.coords[0], Vector3(0, 0, -0.8));
    EXPECT_EQ(m.coords[1], Vector3(0, 0, 0.8));
    const ModelInput again = center_diatomic(m.coords);
    EXPECT_EQ(again.coords[0], m.coords[0]);
    EXPECT_EQ(again.coords[1], m.coords[1]);
}

TEST(Centering, TriatomicOxygenAtOrigin) {
    const Vector3 t(0.3, -1.2, 2.0);
    const std::vector<Vector3> p{t, Vector3(1, 0, 0) + t, Vector3(0, 1, 0) + t};
    const ModelInput m = center_triatomic(p);
    ASSERT_EQ(m.coords.size(), 2u);
    EXPECT_LT((m.coords[0] - Vector3(1, 0, 0)).norm(), 1e-15);
    EXPECT_LT((m.coords[1] - Vector3(0, 1, 0)).norm(), 1e-15);
    const std::vector<Vector3> at_origin{Vector3::Zero(), Vector3(1, 2, 3), Vector3(-1, 0, 2)};
    EXPECT_EQ(center_triatomic(at_origin).coords[0], Vector3(1, 2, 3));
}

TEST(Centering, TranslationInvariantAndIdempotent) {
    std::mt19937_64 rng(3);
    for (System sys : {System::diatomic, System::triatomic, System::dimer}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vector3> p(static_cast<std::size_t>(num_atoms(sys)));
            for (auto &x : p) {
                x = random_vec(rng);
            }
            const Vector3 t = random_vec(rng, 5.0);
            auto q = p;
            for (auto &x : q) {
                x += t;
            }
            const ModelInput a = center_positions(sys, p);
            const ModelInput b = center_positions(sys, q);
            for (std::size_t i = 0; i < a.coords.size(); ++i) {
                EXPECT_LT((a.coords[i] - b.coords[i]).cwiseAbs().maxCoeff(), 1e-12);
            }
            if (sys == System::diatomic) {
                EXPECT_EQ(a.coords[0], (-a.coords[1]).eval());
            }
            if (sys == System::dimer) {
                EXPECT_EQ(a.coords[0], (-a.coords[3]).eval());
                const ModelInput again = center_dimer(a.coords);
                for (std::size_t i = 0; i < 6; ++i) {
                    EXPECT_EQ(again.coords[i], a.coords[i]);
                }
            }
        }
    }
}

TEST(Centering, PullbackMatchesPushforwardAdjoint) {
    std::mt19937_64 rng(4);
    for (System sys : {System::diatomic, System::triatomic, System::dimer}) {
        std::vector<Vector3> g(static_cast<std::size_t>(num_model_atoms(sys)));
        std::vector<Vector3> r(static_cast<std::size_t>(num_atoms(sys)));
        for (auto &x : g) {
            x = random_vec(rng);
        }
        for (auto &x : r) {
            x = random_vec(rng);
        }
        const auto jt_g = pullback_gradient(sys, g);
        const auto j_r = pushforward_direction(sys, r);
        double lhs = 0.0, rhs = 0.0;
        Vector3 total = Vector3::Zero();
        for (std::size_t i = 0; i < r.size(); ++i) {
            lhs += r[i].dot(jt_g[i]);
            total += jt_g[i];
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            rhs += g[i].dot(j_r[i]);
        }
        EXPECT_NEAR(lhs, rhs, 1e-12);
        EXPECT_LT(total.norm(), 1e-12);
    }
}

TEST(Morse, MinimumAndAsymptote) {
    const MorseParams p;
    EXPECT_DOUBLE_EQ(morse_energy(p.equilibrium, p), 0.0);
    EXPECT_DOUBLE_EQ(morse_derivative(p.equilibrium, p), 0.0);
    EXPECT_NEAR(morse_energy(60.0, p), p.well_depth, 1e-12);
}

TEST(Morse, ForcesAreNegativeGradient) {
    std::mt19937_64 rng(5);
    const MorseParams p;
    for (int trial = 0; trial < 10; ++trial) {
        expect_forces_are_negative_gradient({random_vec(rng), random_vec(rng)},
                                            [&](const std::vector<Vector3> &x) {
                                                return morse_energy_forces(x, p);
                                            });
    }
}

TEST(Morse, SynthRespectsRangeAndGrid) {
    MorseParams p;
    const Dataset d = synth_diatomic(50, p, 6);
    for (const auto &s : d.samples) {
        const double r = (s.positions[1] - s.positions[0]).norm();
        EXPECT_GE(r, p.r_min - 1e-12);
        EXPECT_LE(r, p.r_max + 1e-12);
        EXPECT_NEAR(s.energy, morse_energy(r, p), 1e-12);
    }
    p.sampling = BondSampling::grid;
    const Dataset g = synth_diatomic(5, p, 6);
    for (int i = 0; i < 5; ++i) {
        const auto &s = g.samples[static_cast<std::size_t>(i)];
        EXPECT_NEAR((s.positions[1] - s.positions[0]).norm(),
                    p.r_min + (p.r_max - p.r_min) * i / 4.0, 1e-12);
    }
}

TEST(Water, EquilibriumIsZero) {
    const WaterParams p;
    const std::vector<Vector3> eq{
        Vector3::Zero(), Vector3(p.bond_length, 0, 0),
        Vector3(p.bond_length * std::cos(p.angle), p.bond_length * std::sin(p.angle), 0)};
    const auto [e, f] = water_energy_forces(eq, p);
    EXPECT_NEAR(e, 0.0, 1e-20);
    for (const auto &x : f) {
        EXPECT_LT(x.norm(), 1e-12);
    }
}

TEST(Water, SymmetricAndForcesAreNegativeGradient) {
    std::mt19937_64 rng(7);
    const WaterParams p;
    const Dataset d = synth_triatomic(10, p, 7);
    for (const auto &s : d.samples) {
        const std::vector<Vector3> swapped{s.positions[0], s.positions[2], s.positions[1]};
        EXPECT_NEAR(water_energy_forces(swapped, p).first, s.energy, 1e-14);
        expect_forces_are_negative_gradient(s.positions, [&](const std::vector<Vector3> &x) {
            return water_energy_forces(x, p);
        });
    }
}

TEST(DimerCut, MaskFrozenCoordinatesAndEnergy) {
    const DimerCutParams p;
    const Dataset d = synth_dimer_1dcut(30, p, 8);
    const auto ref = dimer_reference_geometry();
    const auto moving = static_cast<std::size_t>(p.moving_atom);
    for (const auto &s : d.samples) {
        int on = 0;
        for (const auto &m : *s.force_mask) {
            on += std::count(m.begin(), m.end(), true);
        }
        EXPECT_EQ(on, 1);
        EXPECT_TRUE((*s.force_mask)[moving][static_cast<std::size_t>(p.axis)]);
        for (std::size_t a = 0; a < 6; ++a) {
            for (int k = 0; k < 3; ++k) {
                if (a == moving && k == p.axis) {
                    continue;
                }
                EXPECT_EQ(s.positions[a][k], d.samples[0].positions[a][k]);
            }
        }
        const double cut = s.positions[moving][p.axis] - ref[moving][p.axis];
        EXPECT_GE(cut, p.s_min - 1e-12);
        EXPECT_LE(cut, p.s_max + 1e-12);
        EXPECT_NEAR(s.energy, 0.5 * p.harmonic_k * cut * cut + p.quartic * std::pow(cut, 4),
                    1e-12);
        EXPECT_NEAR((*s.forces)[moving][p.axis], -cut_derivative(cut, p), 1e-12);
    }
    const double s = 0.07, h = 1e-5;
    EXPECT_NEAR(cut_derivative(s, p), (cut_energy(s + h, p) - cut_energy(s - h, p)) / (2 * h),
                1e-8);
}

TEST(Split, SizesDisjointAndReproducible) {
    const Dataset d = synth_diatomic(17, MorseParams{}, 9);
    const auto [tr, te] = split(d, 0.7, 3);
    EXPECT_EQ(tr.samples.size(), 11u);
    EXPECT_EQ(te.samples.size(), 6u);
    std::vector<double> all, parts;
    for (const auto &s : d.samples) {
        all.push_back(s.energy);
    }
    for (const auto *part : {&tr, &te}) {
        for (const auto &s : part->samples) {
            parts.push_back(s.energy);
        }
    }
    std::sort(all.begin(), all.end());
    std::sort(parts.begin(), parts.end());
    EXPECT_EQ(all, parts);
    const auto [tr2, te2] = split(d, 0.7, 3);
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        EXPECT_EQ(tr.samples[i].energy, tr2.samples[i].energy);
    }
    const auto [everything, none] = split(d, 1.0, 3);
    EXPECT_EQ(everything.samples.size(), 17u);
    EXPECT_TRUE(none.samples.empty());
}

TEST(Synth, SameSeedSameData) {
    const Dataset a = synth_triatomic(5, WaterParams{}, 11);
    const Dataset b = synth_triatomic(5, WaterParams{}, 11);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(a.samples[i].positions, b.samples[i].positions);
    }
}

} // namespace
} // namespace eqforce
