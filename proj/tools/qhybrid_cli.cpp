// Copyright 2026 The qhybrid Authors. All Rights Reserved.
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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhybrid/ansatz.hpp"
#include "qhybrid/embedding.hpp"
#include "qhybrid/errors.hpp"
#include "qhybrid/experiment.hpp"
#include "qhybrid/measurement.hpp"
#include "qhybrid/random.hpp"
#include "qhybrid/synth.hpp"

namespace {

using namespace qhybrid;

constexpr int kExitOk = 0;
constexpr int kExitGradMismatch = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

constexpr double kGradTolerance = 1e-5;
constexpr double kFiniteDiffStep = 1e-4;

std::vector<double> read_params_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open parameter file " + path);
    }
    std::vector<double> params;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            params.push_back(std::stod(token, &used));
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
        } catch (const std::logic_error &) {
            throw ConfigError("bad number \"" + token + "\" in " + path);
        }
    }
    return params;
}

int run_circuit(std::size_t qubits, std::size_t layers, bool no_rotation, const std::string &params_path) {
    const AnsatzConfig cfg{qubits, layers, !no_rotation};
    const std::size_t count = param_count(qubits, layers);
    std::vector<double> params;
    if (!params_path.empty()) {
        params = read_params_file(params_path);
        if (params.size() != count) {
            throw SizeError("parameter file holds " + std::to_string(params.size()) + " values, circuit needs " +
                            std::to_string(count));
        }
    }
    std::cout << to_text(build_circuit(cfg), params);
    std::cout << "trainable parameters: " << count << '\n';
    return kExitOk;
}

double weighted_expectation(const CircuitProgram &program, std::span<const double> params, const StateVector &input,
                            std::span<const double> upstream) {
    StateVector s = input;
    apply_program(s, program, params);
    const std::vector<double> z = expect_z_all(s);
    double e = 0.0;
    for (std::size_t q = 0; q < z.size(); ++q) {
        e += upstream[q] * z[q];
    }
    return e;
}

int run_gradcheck(std::size_t qubits, std::size_t layers, std::size_t trials, std::uint64_t seed, bool inject_fault) {
    const AnsatzConfig cfg{qubits, layers, true};
    const CircuitProgram program = build_circuit(cfg);
    Rng rng(seed);
    double adjoint_vs_shift = 0.0;
    double adjoint_vs_fd = 0.0;
    double shift_vs_fd = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::vector<double> params = init_params(cfg, rng.next());
        std::vector<double> x(std::size_t{1} << qubits);
        for (double &v : x) {
            v = rng.normal();
        }
        const StateVector input = amplitude_embed(x, {qubits});
        std::vector<double> upstream(qubits);
        for (double &u : upstream) {
            u = rng.uniform(-1.0, 1.0);
        }

        std::vector<double> adjoint = adjoint_grad(program, params, input, upstream).d_theta;
        if (inject_fault) {
            for (double &g : adjoint) {
                g = -g;
            }
        }
        const std::vector<double> shift = parameter_shift_grad(program, params, input, upstream);
        for (std::size_t j = 0; j < params.size(); ++j) {
            const double saved = params[j];
            params[j] = saved + kFiniteDiffStep;
            const double plus = weighted_expectation(program, params, input, upstream);
            params[j] = saved - kFiniteDiffStep;
            const double minus = weighted_expectation(program, params, input, upstream);
            params[j] = saved;
            const double fd = (plus - minus) / (2.0 * kFiniteDiffStep);
            adjoint_vs_shift = std::max(adjoint_vs_shift, std::abs(adjoint[j] - shift[j]));
            adjoint_vs_fd = std::max(adjoint_vs_fd, std::abs(adjoint[j] - fd));
            shift_vs_fd = std::max(shift_vs_fd, std::abs(shift[j] - fd));
        }
    }
    std::printf("qubits %zu, layers %zu, parameters %zu, trials %zu\n", qubits, layers, program.num_slots, trials);
    std::printf("max |adjoint - shift|       %.3e\n", adjoint_vs_shift);
    std::printf("max |adjoint - finite diff| %.3e\n", adjoint_vs_fd);
    std::printf("max |shift - finite diff|   %.3e\n", shift_vs_fd);
    const bool ok = std::max({adjoint_vs_shift, adjoint_vs_fd, shift_vs_fd}) <= kGradTolerance;
    std::printf("%s (tolerance %.0e)\n", ok ? "OK" : "MISMATCH", kGradTolerance);
    return ok ? kExitOk : kExitGradMismatch;
}

int run_train(const std::string &config_path) {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    const TrainResult result = run_experiment(cfg);
    const EpochMetrics &last = result.epochs.back();
    std::printf("%s: %zu epochs, final train loss %.4f, train acc %.2f%%, test acc %.2f%%\n", cfg.name.c_str(),
                result.epochs.size(), last.train_loss, last.train_accuracy, last.test_accuracy);
    std::printf("parameters: quantum %zu, classical %zu\n", result.quantum_params, result.classical_params);
    if (!cfg.metrics_path.empty()) {
        std::printf("metrics: %s\n", cfg.metrics_path.string().c_str());
    }
    if (!cfg.checkpoint_path.empty()) {
        std::printf("checkpoint: %s\n", cfg.checkpoint_path.string().c_str());
    }
    return kExitOk;
}

int run_eval(const std::string &checkpoint, const std::string &manifest, bool all_trials) {
    const EvalResult r = evaluate_checkpoint(checkpoint, manifest, all_trials);
    std::printf("accuracy %.2f%% on %zu %s trials\n", r.accuracy, r.trials, all_trials ? "total" : "test");
    return kExitOk;
}

int run_bench_suite(const std::string &suite_path, const std::string &out_override) {
    BenchSuite suite = load_bench_suite(suite_path);
    if (!out_override.empty()) {
        suite.output = out_override;
    }
    const std::vector<BenchRow> rows = run_bench(suite.experiments);
    std::cout << format_bench_table(rows);
    if (!suite.output.empty()) {
        std::ofstream out(suite.output, std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + suite.output.string());
        }
        out << bench_to_json(rows).dump(2) << '\n';
    }
    const bool failed = std::any_of(rows.begin(), rows.end(), [](const BenchRow &r) { return !r.error.empty(); });
    return failed ? kExitRuntime : kExitOk;
}

int run_gen_synth(const std::string &out, std::uint64_t seed, std::size_t trials, std::size_t epochs) {
    write_synthetic_suite(out, {seed, trials, epochs});
    std::printf("wrote %s/{synth.cfg, waves.cfg, suite.cfg}\n", out.c_str());
    return kExitOk;
}

bool is_validation_error(const std::exception &e) {
    return dynamic_cast<const ConfigError *>(&e) != nullptr || dynamic_cast<const ManifestError *>(&e) != nullptr ||
           dynamic_cast<const FormatError *>(&e) != nullptr || dynamic_cast<const SizeError *>(&e) != nullptr ||
           dynamic_cast<const SplitError *>(&e) != nullptr || dynamic_cast<const LabelError *>(&e) != nullptr ||
           dynamic_cast<const IndexError *>(&e) != nullptr || dynamic_cast<const ZeroVectorError *>(&e) != nullptr;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Variational quantum circuit simulator and hybrid biosignal classifier"};
    app.require_subcommand(1);

    std::size_t qubits = 0;
    std::size_t layers = 0;
    bool no_rotation = false;
    std::string params_path;
    auto *circuit = app.add_subcommand("circuit", "Print the ansatz gate program");
    circuit->add_option("--qubits", qubits)->required();
    circuit->add_option("--layers", layers)->required();
    circuit->add_flag("--no-initial-rotation", no_rotation, "Skip the fixed RY(pi/4) layer");
    circuit->add_option("--params", params_path, "Whitespace-separated angles to bind")->check(CLI::ExistingFile);

    std::size_t gc_qubits = 4;
    std::size_t gc_layers = 2;
    std::size_t gc_trials = 20;
    std::uint64_t gc_seed = 0;
    bool inject_fault = false;
    auto *gradcheck = app.add_subcommand("gradcheck", "Compare adjoint, parameter-shift and finite-difference gradients");
    gradcheck->add_option("--qubits", gc_qubits)->capture_default_str();
    gradcheck->add_option("--layers", gc_layers)->capture_default_str();
    gradcheck->add_option("--trials", gc_trials)->capture_default_str();
    gradcheck->add_option("--seed", gc_seed)->capture_default_str();
    // negative control for the test suite: flips the adjoint gradient sign
    gradcheck->add_flag("--inject-fault", inject_fault)->group("");

    std::string config_path;
    auto *train = app.add_subcommand("train", "Train a model from an experiment config");
    train->add_option("--config", config_path)->required();

    std::string checkpoint_path;
    std::string manifest_path;
    bool all_trials = false;
    auto *eval = app.add_subcommand("eval", "Score a checkpoint on a dataset");
    eval->add_option("--checkpoint", checkpoint_path)->required();
    eval->add_option("--manifest", manifest_path)->required();
    eval->add_flag("--all", all_trials, "Score every trial instead of the stored test split");

    std::string suite_path;
    std::string bench_out;
    auto *bench = app.add_subcommand("bench", "Classical-ablation vs quantum comparison table");
    bench->add_option("--suite", suite_path)->required();
    bench->add_option("--out", bench_out, "Write the table as JSON here");

    std::string synth_out;
    std::uint64_t synth_seed = 7;
    std::size_t synth_trials = 200;
    std::size_t synth_epochs = 50;
    auto *gen_synth = app.add_subcommand("gen-synth", "Write synthetic datasets and experiment configs");
    gen_synth->add_option("--out", synth_out)->required();
    gen_synth->add_option("--seed", synth_seed)->capture_default_str();
    gen_synth->add_option("--trials", synth_trials, "Trials per class")->capture_default_str();
    gen_synth->add_option("--epochs", synth_epochs)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*circuit) {
            return run_circuit(qubits, layers, no_rotation, params_path);
        }
        if (*gradcheck) {
            return run_gradcheck(gc_qubits, gc_layers, gc_trials, gc_seed, inject_fault);
        }
        if (*train) {
            return run_train(config_path);
        }
        if (*eval) {
            return run_eval(checkpoint_path, manifest_path, all_trials);
        }
        if (*bench) {
            return run_bench_suite(suite_path, bench_out);
        }
        return run_gen_synth(synth_out, synth_seed, synth_trials, synth_epochs);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_validation_error(e) ? kExitValidation : kExitRuntime;
    }
}
