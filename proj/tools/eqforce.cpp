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
#include "eqforce/audit.hpp"
#include "eqforce/checkpoint.hpp"
#include "eqforce/data.hpp"
#include "eqforce/training.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace eqforce;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require_file(const std::string &path, const char *what) {
    if (!std::filesystem::is_regular_file(path)) {
        throw UsageError(std::string(what) + " not found: " + path);
    }
}

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    return out;
}

System system_flag(const std::string &name) {
    try {
        return parse_system(name);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

// --------------------------------------------------------------------- synth

struct SynthOptions {
    std::string system;
    int n = 100;
    std::uint64_t seed = 0;
    std::string out;
    MorseParams morse;
    std::string sampling = "uniform";
    WaterParams water;
    double angle_deg = 104.52;
    DimerCutParams cut;
};

void add_synth(CLI::App &app, SynthOptions &o) {
    auto *cmd = app.add_subcommand("synth", "Write a synthetic dataset");
    cmd->add_option("--system", o.system, "diatomic | triatomic | dimer")->required();
    cmd->add_option("--n", o.n, "Number of samples")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--out", o.out, "Output dataset (JSON lines)")->required();
    cmd->add_option("--morse-depth", o.morse.well_depth, "Morse well depth [eV]");
    cmd->add_option("--morse-width", o.morse.width, "Morse width a [1/angstrom]");
    cmd->add_option("--morse-req", o.morse.equilibrium, "Morse equilibrium bond [angstrom]");
    cmd->add_option("--r-min", o.morse.r_min, "Shortest bond [angstrom]");
    cmd->add_option("--r-max", o.morse.r_max, "Longest bond [angstrom]");
    cmd->add_option("--sampling", o.sampling, "Bond lengths: uniform | grid")
        ->check(CLI::IsMember({"uniform", "grid"}));
    cmd->add_option("--bond-k", o.water.bond_k, "Bond force constant [eV/angstrom^2]");
    cmd->add_option("--bond-length", o.water.bond_length, "Equilibrium bond [angstrom]");
    cmd->add_option("--angle-k", o.water.angle_k, "Angle force constant [eV/rad^2]");
    cmd->add_option("--angle-deg", o.angle_deg, "Equilibrium angle [deg]");
    cmd->add_option("--bond-spread", o.water.bond_spread, "Bond sampling half-width");
    cmd->add_option("--angle-spread", o.water.angle_spread, "Angle sampling half-width [rad]");
    cmd->add_option("--cut-k", o.cut.harmonic_k, "Cut harmonic constant [eV/angstrom^2]");
    cmd->add_option("--cut-quartic", o.cut.quartic, "Cut quartic constant [eV/angstrom^4]");
    cmd->add_option("--s-min", o.cut.s_min, "Smallest cut displacement [angstrom]");
    cmd->add_option("--s-max", o.cut.s_max, "Largest cut displacement [angstrom]");
    cmd->add_option("--moving-atom", o.cut.moving_atom, "Atom moved along the cut")
        ->check(CLI::Range(0, 5));
    cmd->add_option("--axis", o.cut.axis, "Cartesian axis of the cut")->check(CLI::Range(0, 2));
}

int run_synth(const SynthOptions &o) {
    Dataset ds;
    switch (system_flag(o.system)) {
    case System::diatomic: {
        MorseParams p = o.morse;
        p.sampling = o.sampling == "grid" ? BondSampling::grid : BondSampling::uniform;
        ds = synth_diatomic(o.n, p, o.seed);
        break;
    }
    case System::triatomic: {
        WaterParams p = o.water;
        p.angle = o.angle_deg * std::numbers::pi / 180.0;
        ds = synth_triatomic(o.n, p, o.seed);
        break;
    }
    case System::dimer:
        ds = synth_dimer_1dcut(o.n, o.cut, o.seed);
        break;
    }
    save_dataset(ds, o.out);
    std::cout << "synth system=" << to_string(ds.system) << " samples=" << ds.samples.size()
              << " out=" << o.out << '\n';
    return kExitOk;
}

// --------------------------------------------------------------------- train

struct TrainOptions {
    std::string system;
    std::string data;
    std::string test_data;
    int depth = 1;
    int blocks = 1;
    std::string sb = "off";
    std::string loss = "e";
    int max_iter = 3000;
    double lr = 0.05;
    std::uint64_t seed = 0;
    double noise_std = 0.0;
    double split = 0.5;
    std::string out;
    std::string history;
    std::vector<double> label_range;
    std::string init = "near_identity";
    double enc_scale = 1.0;
    std::string force_grad = "exact";
    bool early_stop = false;
};

void add_train(CLI::App &app, TrainOptions &o) {
    auto *cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
    cmd->add_option("--system", o.system, "diatomic | triatomic | dimer");
    cmd->add_option("--data", o.data, "Dataset (JSON lines)")->required();
    cmd->add_option("--test-data", o.test_data, "Separate test set; disables --split");
    cmd->add_option("--depth", o.depth, "Trainable layers D")->check(CLI::PositiveNumber);
    cmd->add_option("--blocks", o.blocks, "Blocks per layer B")->check(CLI::PositiveNumber);
    cmd->add_option("--sb", o.sb, "Symmetry-breaking layer")->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--loss", o.loss, "e: energy only, ef: energy and forces")
        ->check(CLI::IsMember({"e", "ef"}));
    cmd->add_option("--max-iter", o.max_iter, "ADAM iterations")->check(CLI::PositiveNumber);
    cmd->add_option("--lr", o.lr, "ADAM learning rate")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "Seed for split, noise and initialization");
    cmd->add_option("--noise-std", o.noise_std, "Gaussian label noise on training energies [eV]")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--split", o.split, "Training fraction")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--out", o.out, "Checkpoint path")->required();
    cmd->add_option("--history", o.history, "Loss history CSV");
    cmd->add_option("--label-range", o.label_range, "Scaled label interval lo hi")
        ->expected(2);
    cmd->add_option("--init", o.init, "near_identity | identity_blocks")
        ->check(CLI::IsMember({"near_identity", "identity_blocks"}));
    cmd->add_option("--enc-scale", o.enc_scale, "Initial encoding scale");
    cmd->add_option("--force-grad", o.force_grad, "exact | fd")
        ->check(CLI::IsMember({"exact", "fd"}));
    cmd->add_flag("--early-stop", o.early_stop, "Stop when the loss stalls");
}

int run_train(const TrainOptions &o) {
    require_file(o.data, "dataset");
    Dataset all = load_dataset(o.data);
    if (!o.system.empty() && system_flag(o.system) != all.system) {
        throw UsageError("--system " + o.system + " does not match dataset system " +
                         to_string(all.system));
    }
    Dataset train_set, test_set;
    if (!o.test_data.empty()) {
        require_file(o.test_data, "test dataset");
        train_set = std::move(all);
        test_set = load_dataset(o.test_data);
        if (test_set.system != train_set.system) {
            throw UsageError("test dataset system does not match");
        }
    } else {
        std::tie(train_set, test_set) = split(all, o.split, o.seed);
    }
    if (train_set.samples.empty()) {
        throw UsageError("training split is empty");
    }
    train_set = add_label_noise(train_set, o.noise_std, o.seed);

    ArchitectureSpec spec;
    spec.system = train_set.system;
    spec.depth = o.depth;
    spec.blocks = o.blocks;
    spec.symmetry_breaking = o.sb == "on";
    try {
        spec.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }

    TrainConfig cfg;
    cfg.max_iter = o.max_iter;
    cfg.seed = o.seed;
    cfg.init = o.init == "identity_blocks" ? InitScheme::identity_blocks
                                           : InitScheme::near_identity;
    cfg.initial_enc_scale = o.enc_scale;
    cfg.adam.lr = o.lr;
    cfg.noise_std = o.noise_std;
    cfg.loss = o.loss == "ef" ? LossSpec::energy_and_force() : LossSpec::energy_only();
    cfg.force_gradient =
        o.force_grad == "fd" ? ForceGradientMode::finite_difference : ForceGradientMode::exact;
    if (o.early_stop) {
        cfg.early_stop = EarlyStop{};
    }
    if (!o.label_range.empty()) {
        cfg.label_range = LabelRange{o.label_range[0], o.label_range[1]};
    }

    const TrainResult result = train(spec, train_set, cfg);

    Checkpoint ckpt;
    ckpt.architecture = spec;
    ckpt.weights = result.weights;
    ckpt.scaler = result.scaler;
    TrainingMetadata &meta = ckpt.metadata;
    meta.seed = o.seed;
    meta.iterations = result.iterations;
    meta.best_loss = result.best_loss;
    const Metrics train_m = metrics(spec, result.weights, train_set, result.scaler);
    meta.train_mse_energy = train_m.mse_energy;
    meta.train_mse_force = train_m.mse_force;
    if (!test_set.samples.empty()) {
        const Metrics test_m = metrics(spec, result.weights, test_set, result.scaler);
        meta.test_mse_energy = test_m.mse_energy;
        meta.test_mse_force = test_m.mse_force;
    }
    meta.config = {
        {"data", o.data},
        {"test_data", o.test_data},
        {"depth", std::to_string(o.depth)},
        {"blocks", std::to_string(o.blocks)},
        {"sb", o.sb},
        {"loss", o.loss},
        {"max_iter", std::to_string(o.max_iter)},
        {"lr", fmt17(o.lr)},
        {"noise_std", fmt17(o.noise_std)},
        {"split", fmt17(o.split)},
        {"init", o.init},
        {"enc_scale", fmt17(o.enc_scale)},
        {"force_grad", o.force_grad},
        {"label_range", fmt17(result.scaler.target_range.lo) + " " +
                            fmt17(result.scaler.target_range.hi)},
        {"train_samples", std::to_string(train_set.samples.size())},
        {"test_samples", std::to_string(test_set.samples.size())},
    };
    save_checkpoint(ckpt, o.out);

    if (!o.history.empty()) {
        auto out = open_out(o.history);
        out << "iteration,train_loss\n";
        for (std::size_t i = 0; i < result.history.size(); ++i) {
            out << i << ',' << fmt17(result.history[i]) << '\n';
        }
    }

    auto opt = [](const std::optional<double> &v) { return v ? fmt(*v) : std::string("nan"); };
    std::cout << "summary system=" << to_string(spec.system) << " params=" << param_count(spec)
              << " iterations=" << result.iterations << " best_loss=" << fmt(result.best_loss)
              << " train_mse_e=" << fmt(meta.train_mse_energy)
              << " train_mse_f=" << opt(meta.train_mse_force)
              << " test_mse_e=" << opt(meta.test_mse_energy)
              << " test_mse_f=" << opt(meta.test_mse_force) << '\n';
    return kExitOk;
}

// ------------------------------------------------------------------- predict

struct PredictOptions {
    std::string ckpt;
    std::string data;
    std::string out;
};

void add_predict(CLI::App &app, PredictOptions &o) {
    auto *cmd = app.add_subcommand("predict", "Energies and forces for a dataset");
    cmd->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
    cmd->add_option("--data", o.data, "Dataset (JSON lines)")->required();
    cmd->add_option("--out", o.out, "Prediction CSV")->required();
}

int run_predict(const PredictOptions &o) {
    require_file(o.ckpt, "checkpoint");
    require_file(o.data, "dataset");
    const Checkpoint ckpt = load_checkpoint(o.ckpt);
    const Dataset ds = load_dataset(o.data);
    if (ds.system != ckpt.architecture.system) {
        throw UsageError("dataset system does not match the checkpoint");
    }
    const int atoms = num_atoms(ds.system);
    auto out = open_out(o.out);
    out << "sample,energy_pred,energy_ref";
    for (int a = 0; a < atoms; ++a) {
        for (const char *c : {"x", "y", "z"}) {
            out << ",f" << c << a;
        }
    }
    out << ",force_sum\n";

    double worst_sum = 0.0;
    const Metrics m = metrics(ckpt.architecture, ckpt.weights, ds, ckpt.scaler);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const Sample &s = ds.samples[i];
        const EnergyForces ef =
            predict_energy_forces(ckpt.architecture, ckpt.weights, s.positions, ckpt.scaler);
        Vector3 total = Vector3::Zero();
        out << i << ',' << fmt17(ef.energy) << ',' << fmt17(s.energy);
        for (const auto &f : ef.forces) {
            out << ',' << fmt17(f[0]) << ',' << fmt17(f[1]) << ',' << fmt17(f[2]);
            total += f;
        }
        worst_sum = std::max(worst_sum, total.norm());
        out << ',' << fmt17(total.norm()) << '\n';
    }
    out << "totals,,";
    for (int a = 0; a < 3 * atoms; ++a) {
        out << ',';
    }
    out << ',' << fmt17(worst_sum) << '\n';

    std::cout << "predict samples=" << ds.samples.size() << " mse_e=" << fmt(m.mse_energy)
              << " mse_f=" << (m.mse_force ? fmt(*m.mse_force) : std::string("nan"))
              << " max_force_sum=" << fmt(worst_sum) << '\n';
    return kExitOk;
}

// --------------------------------------------------------------------- audit

struct AuditOptions {
    std::string ckpt;
    std::string system;
    int depth = 2;
    int blocks = 1;
    std::string sb = "off";
    int trials = 100;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    double identity_tolerance = 1e-12;
    std::string json;
};

void add_audit(CLI::App &app, AuditOptions &o) {
    auto *cmd = app.add_subcommand("audit", "Check model invariances and block identities");
    auto *ck = cmd->add_option("--ckpt", o.ckpt, "Checkpoint to audit");
    auto *sys = cmd->add_option("--system", o.system, "Audit a random-weight model instead");
    ck->excludes(sys);
    cmd->add_option("--depth", o.depth, "Depth of the random model")->check(CLI::PositiveNumber);
    cmd->add_option("--blocks", o.blocks, "Blocks of the random model")->check(CLI::PositiveNumber);
    cmd->add_option("--sb", o.sb, "Symmetry breaking of the random model")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--trials", o.trials, "Trials per check")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--tol", o.tolerance, "Invariance tolerance");
    cmd->add_option("--identity-tol", o.identity_tolerance, "Operator identity tolerance");
    cmd->add_option("--json", o.json, "Write the report as JSON");
}

WeightSet random_weights(const ArchitectureSpec &spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    WeightSet w = WeightSet::zeros(spec);
    for (Eigen::Index i = 0; i < w.layer_weights.size(); ++i) {
        w.layer_weights.data()[i] = angle(rng);
    }
    for (Eigen::Index i = 0; i < w.sb_angles.size(); ++i) {
        w.sb_angles[i] = angle(rng);
    }
    for (Eigen::Index i = 0; i < w.enc_scales.size(); ++i) {
        w.enc_scales[i] = scale(rng);
    }
    return w;
}

int run_audit(const AuditOptions &o) {
    ArchitectureSpec spec;
    WeightSet weights;
    if (!o.ckpt.empty()) {
        require_file(o.ckpt, "checkpoint");
        const Checkpoint ckpt = load_checkpoint(o.ckpt);
        spec = ckpt.architecture;
        weights = ckpt.weights;
    } else if (!o.system.empty()) {
        spec.system = system_flag(o.system);
        spec.depth = o.depth;
        spec.blocks = spec.system == System::dimer ? 1 : o.blocks;
        spec.symmetry_breaking = o.sb == "on";
        weights = random_weights(spec, o.seed);
    } else {
        throw UsageError("audit needs --ckpt or --system");
    }

    AuditReport report = audit_invariance(spec, weights, o.trials, o.seed, o.tolerance);
    const AuditReport identities =
        audit_equivariance(std::min(o.trials, 50), o.seed, o.identity_tolerance);
    std::cout << "model " << to_string(spec.system) << " depth=" << spec.depth
              << " blocks=" << spec.blocks << " sb=" << (spec.symmetry_breaking ? "on" : "off")
              << " tolerance=" << fmt(o.tolerance) << '\n'
              << report.to_text() << "identities tolerance=" << fmt(o.identity_tolerance)
              << '\n'
              << identities.to_text();
    if (!o.json.empty()) {
        auto out = open_out(o.json);
        out << "{\"invariance\":" << report.to_json() << ",\"identities\":"
            << identities.to_json() << "}\n";
    }
    return report.all_pass() && identities.all_pass() ? kExitOk : kExitRuntime;
}

// ------------------------------------------------------------------ spectrum

int run_spectrum(const std::string &system) {
    ArchitectureSpec spec;
    spec.system = system_flag(system);
    const Observable obs = model_observable(spec);
    const auto range = spectral_range(obs);
    std::cout << "observable " << obs.to_string() << '\n'
              << "spectral_range min=" << fmt17(range.min) << " max=" << fmt17(range.max)
              << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Symmetry-invariant quantum models for molecular energies and forces"};
    app.require_subcommand(1);

    SynthOptions synth_opts;
    TrainOptions train_opts;
    PredictOptions predict_opts;
    AuditOptions audit_opts;
    std::string spectrum_system;
    add_synth(app, synth_opts);
    add_train(app, train_opts);
    add_predict(app, predict_opts);
    add_audit(app, audit_opts);
    auto *spectrum = app.add_subcommand("spectrum", "Observable terms and eigenvalue range");
    spectrum->add_option("--system", spectrum_system, "diatomic | triatomic | dimer")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("synth")) {
            return run_synth(synth_opts);
        }
        if (app.got_subcommand("train")) {
            return run_train(train_opts);
        }
        if (app.got_subcommand("predict")) {
            return run_predict(predict_opts);
        }
        if (app.got_subcommand("audit")) {
            return run_audit(audit_opts);
        }
        return run_spectrum(spectrum_system);
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const NumericError &e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
