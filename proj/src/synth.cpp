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
#include "qhybrid/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include <json.hpp>

#include "qhybrid/config.hpp"
#include "qhybrid/errors.hpp"
#include "qhybrid/random.hpp"

namespace qhybrid {

namespace {

using nlohmann::json;

constexpr std::size_t kSubjects = 4;
constexpr std::size_t kClasses = 4;

Dataset empty_dataset(const std::string &name, std::size_t channels, std::size_t time, std::size_t trials) {
    Dataset ds;
    ds.manifest.name = name;
    ds.manifest.modality = "synthetic";
    ds.manifest.channels = channels;
    ds.manifest.time = time;
    ds.manifest.num_classes = kClasses;
    ds.manifest.subjects = kSubjects;
    ds.signals = Tensor({trials, channels, time});
    ds.labels.resize(trials);
    ds.subjects.resize(trials);
    return ds;
}

void write_json(const std::filesystem::path &path, const json &doc) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

json experiment_json(const std::string &name, const std::string &manifest, const ModelConfig &model,
                     const SynthOptions &options) {
    ModelConfig m = model;
    m.channels = 0;
    m.time = 0;
    m.num_classes = 0;
    SplitOptions split;
    split.seed = options.seed;
    return {{"name", name},
            {"manifest", manifest},
            {"model", model_config_to_json(m)},
            {"epochs", options.epochs},
            {"batch_size", 128},
            {"lr", 0.1},
            {"split", split_to_json(split)},
            {"metrics_path", name + ".metrics.jsonl"},
            {"checkpoint_path", name + ".ckpt"}};
}

} // namespace

Dataset make_blobs(std::size_t trials_per_class, std::uint64_t seed) {
    constexpr std::size_t dims = 8;
    Dataset ds = empty_dataset("blobs", dims, 1, trials_per_class * kClasses);
    Rng rng(seed);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::size_t c = i % kClasses;
        ds.labels[i] = static_cast<int>(c);
        ds.subjects[i] = static_cast<int>(i % kSubjects);
        for (std::size_t d = 0; d < dims; ++d) {
            ds.signals.at(i, d, 0) = (d == c ? 4.0 : 0.0) + rng.normal();
        }
    }
    return ds;
}

Dataset make_waves(std::size_t trials_per_class, std::uint64_t seed) {
    constexpr std::size_t channels = 4;
    constexpr std::size_t time = 16;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Dataset ds = empty_dataset("waves", channels, time, trials_per_class * kClasses);
    Rng rng(seed);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::size_t c = i % kClasses;
        ds.labels[i] = static_cast<int>(c);
        ds.subjects[i] = static_cast<int>(i % kSubjects);
        const double freq = static_cast<double>(c + 1);
        const double jitter = 0.6 * rng.uniform() - 0.3;
        for (std::size_t ch = 0; ch < channels; ++ch) {
            for (std::size_t t = 0; t < time; ++t) {
                const double phase = two_pi * freq * static_cast<double>(t) / time +
                                     static_cast<double>(ch) * std::numbers::pi / 4.0 + jitter;
                ds.signals.at(i, ch, t) = std::sin(phase) + 1.0 * rng.normal();
            }
        }
    }
    return ds;
}

void write_synthetic_suite(const std::filesystem::path &out, const SynthOptions &options) {
    if (options.trials_per_class < 2) {
        throw ConfigError("need at least 2 trials per class");
    }
    std::filesystem::create_directories(out / "blobs");
    std::filesystem::create_directories(out / "waves");
    write_dataset(out / "blobs", "blobs", make_blobs(options.trials_per_class, options.seed));
    write_dataset(out / "waves", "waves", make_waves(options.trials_per_class, options.seed + 1));

    ModelConfig plain;
    plain.mode = ModelMode::Plain;
    plain.n_qubits = 3;
    plain.layers = 2;
    plain.seed = options.seed;
    write_json(out / "synth.cfg", experiment_json("blobs", "blobs/blobs.json", plain, options));

    ModelConfig hybrid;
    hybrid.mode = ModelMode::Hybrid;
    hybrid.n_qubits = 3;
    hybrid.layers = 2;
    hybrid.window = 2;
    hybrid.seed = options.seed;
    write_json(out / "waves.cfg", experiment_json("waves", "waves/waves.json", hybrid, options));

    write_json(out / "suite.cfg", {{"experiments", {"synth.cfg", "waves.cfg"}}, {"output", "bench.json"}});
}

} // namespace qhybrid
