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
#include "qhybrid/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "qhybrid/checkpoint.hpp"
#include "qhybrid/errors.hpp"
#include "qhybrid/random.hpp"

namespace qhybrid {

namespace {

using nlohmann::json;

constexpr std::size_t kEvalChunk = 256;

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

void check_model_fits(const ModelConfig &cfg, const DatasetManifest &m) {
    if (cfg.channels != m.channels || cfg.time != m.time || cfg.num_classes != m.num_classes) {
        throw ConfigError("model expects (C, T, K) = (" + std::to_string(cfg.channels) + ", " +
                          std::to_string(cfg.time) + ", " + std::to_string(cfg.num_classes) +
                          ") but the dataset has (" + std::to_string(m.channels) + ", " + std::to_string(m.time) +
                          ", " + std::to_string(m.num_classes) + ")");
    }
}

std::size_t block_params(const Model &model) {
    const ModelParams &p = model.params();
    return p.theta.size() + p.linear_w.size() + p.linear_b.size();
}

} // namespace

json to_json(const EpochMetrics &m) {
    return {{"epoch", m.epoch},
            {"train_loss", m.train_loss},
            {"train_accuracy", m.train_accuracy},
            {"test_accuracy", m.test_accuracy},
            {"seconds", m.seconds}};
}

double accuracy_percent(std::span<const int> predicted, std::span<const int> labels) {
    if (predicted.size() != labels.size()) {
        throw SizeError("prediction and label counts differ");
    }
    if (labels.empty()) {
        return 0.0;
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        correct += predicted[i] == labels[i] ? 1 : 0;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(labels.size());
}

double evaluate(const Model &model, const Dataset &dataset, std::span<const std::size_t> indices) {
    std::vector<int> predicted;
    predicted.reserve(indices.size());
    for (std::size_t begin = 0; begin < indices.size(); begin += kEvalChunk) {
        const auto chunk = indices.subspan(begin, std::min(kEvalChunk, indices.size() - begin));
        const std::vector<int> p = model.predict(dataset.gather(chunk));
        predicted.insert(predicted.end(), p.begin(), p.end());
    }
    return accuracy_percent(predicted, dataset.gather_labels(indices));
}

TrainResult train_model(Model &model, const Dataset &dataset, const Split &split, const ExperimentConfig &cfg,
                        std::ostream *metrics) {
    check_split(split, dataset.size());
    check_model_fits(model.config(), dataset.manifest);
    if (split.train.empty()) {
        throw SplitError("empty training set");
    }
    Trainer trainer(model, AdamOptions{.lr = cfg.lr});
    Rng shuffle_rng(model.config().seed + 1);
    std::vector<std::size_t> order = split.train;

    TrainResult result;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle_rng.index(i)]);
        }
        double loss_sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
            const std::size_t len = std::min(cfg.batch_size, order.size() - begin);
            // batch statistics of a single trial are degenerate
            if (len < 2 && seen > 0) {
                continue;
            }
            const std::span<const std::size_t> batch(order.data() + begin, len);
            const std::vector<int> labels = dataset.gather_labels(batch);
            loss_sum += trainer.train_step(dataset.gather(batch), labels) * static_cast<double>(len);
            seen += len;
        }
        EpochMetrics m;
        m.epoch = epoch;
        m.train_loss = loss_sum / static_cast<double>(seen);
        m.train_accuracy = evaluate(model, dataset, split.train);
        m.test_accuracy = split.test.empty() ? 0.0 : evaluate(model, dataset, split.test);
        m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (metrics != nullptr) {
            *metrics << to_json(m).dump() << '\n' << std::flush;
        }
        result.epochs.push_back(m);
    }
    result.test_accuracy = result.epochs.back().test_accuracy;
    result.quantum_params = model.quantum_param_count();
    result.classical_params = model.classical_param_count();
    return result;
}

TrainResult run_experiment(const ExperimentConfig &cfg) {
    const Dataset dataset = load_dataset(cfg.manifest);
    Model model(resolve_model_config(cfg.model, dataset.manifest));
    const Split split = split_dataset(dataset, cfg.split);

    std::ofstream metrics;
    if (!cfg.metrics_path.empty()) {
        metrics.open(cfg.metrics_path, std::ios::trunc);
        if (!metrics) {
            throw Error("cannot write metrics log " + cfg.metrics_path.string());
        }
    }
    TrainResult result = train_model(model, dataset, split, cfg, metrics.is_open() ? &metrics : nullptr);

    if (!cfg.checkpoint_path.empty()) {
        const json metadata = {{"experiment", cfg.name},
                               {"manifest", std::filesystem::absolute(cfg.manifest).string()},
                               {"split", split_to_json(cfg.split)},
                               {"trials", dataset.size()},
                               {"test_accuracy", result.test_accuracy}};
        save_checkpoint(cfg.checkpoint_path, model, metadata);
    }
    return result;
}

EvalResult evaluate_checkpoint(const std::filesystem::path &checkpoint, const std::filesystem::path &manifest,
                               bool all_trials) {
    const Checkpoint ck = load_checkpoint(checkpoint);
    const Dataset dataset = load_dataset(manifest);
    check_model_fits(ck.config, dataset.manifest);
    const Model model(ck.config, ck.params);

    std::vector<std::size_t> indices;
    if (all_trials || !ck.metadata.contains("split")) {
        indices = all_indices(dataset.size());
    } else {
        indices = split_dataset(dataset, split_from_json(ck.metadata.at("split"))).test;
    }
    return {evaluate(model, dataset, indices), indices.size()};
}

BenchSuite load_bench_suite(const std::filesystem::path &path) {
    const json doc = read_json_file(path);
    if (!doc.is_object() || !doc.contains("experiments") || !doc.at("experiments").is_array()) {
        throw ConfigError("bench suite needs an \"experiments\" array");
    }
    for (const auto &[key, value] : doc.items()) {
        if (key != "experiments" && key != "output") {
            throw ConfigError("unknown key \"" + key + "\" in bench suite");
        }
    }
    const std::filesystem::path base = path.parent_path();
    BenchSuite suite;
    for (const json &entry : doc.at("experiments")) {
        if (entry.is_string()) {
            const std::filesystem::path p(entry.get<std::string>());
            suite.experiments.push_back(load_experiment_config(p.is_absolute() ? p : base / p));
        } else {
            suite.experiments.push_back(experiment_config_from_json(entry, base));
        }
    }
    if (doc.contains("output")) {
        const std::filesystem::path out(doc.at("output").get<std::string>());
        suite.output = out.is_absolute() ? out : base / out;
    }
    return suite;
}

std::vector<BenchRow> run_bench(std::span<const ExperimentConfig> experiments) {
    std::vector<BenchRow> rows;
    for (const ExperimentConfig &cfg : experiments) {
        BenchRow row;
        row.dataset = cfg.name;
        try {
            const Dataset dataset = load_dataset(cfg.manifest);
            const Split split = split_dataset(dataset, cfg.split);
            ModelConfig quantum_cfg = resolve_model_config(cfg.model, dataset.manifest);
            quantum_cfg.feature_block = FeatureBlock::Quantum;
            ModelConfig baseline_cfg = quantum_cfg;
            baseline_cfg.feature_block = FeatureBlock::Linear;

            Model baseline(baseline_cfg);
            row.baseline_accuracy = train_model(baseline, dataset, split, cfg).test_accuracy;
            row.baseline_block_params = block_params(baseline);
            row.baseline_total_params = baseline.quantum_param_count() + baseline.classical_param_count();

            Model quantum(quantum_cfg);
            row.quantum_accuracy = train_model(quantum, dataset, split, cfg).test_accuracy;
            row.quantum_block_params = block_params(quantum);
            row.quantum_total_params = quantum.quantum_param_count() + quantum.classical_param_count();
        } catch (const std::exception &e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_bench_table(std::span<const BenchRow> rows) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %10s %10s %14s %14s\n", "Dataset", "Baseline", "Quantum",
                  "Base block", "Quantum block");
    out << line;
    out << std::string(68, '-') << '\n';
    for (const BenchRow &r : rows) {
        if (!r.error.empty()) {
            std::snprintf(line, sizeof line, "%-16s %10s %10s  error: ", r.dataset.c_str(), "-", "-");
            out << line << r.error << '\n';
            continue;
        }
        std::snprintf(line, sizeof line, "%-16s %10.2f %10.2f %14zu %14zu\n", r.dataset.c_str(),
                      r.baseline_accuracy, r.quantum_accuracy, r.baseline_block_params, r.quantum_block_params);
        out << line;
    }
    return out.str();
}

json bench_to_json(std::span<const BenchRow> rows) {
    json out = json::array();
    for (const BenchRow &r : rows) {
        json row = {{"dataset", r.dataset},
                    {"baseline_accuracy", r.baseline_accuracy},
                    {"quantum_accuracy", r.quantum_accuracy},
                    {"baseline_block_params", r.baseline_block_params},
                    {"quantum_block_params", r.quantum_block_params},
                    {"baseline_total_params", r.baseline_total_params},
                    {"quantum_total_params", r.quantum_total_params}};
        if (!r.error.empty()) {
            row["error"] = r.error;
        }
        out.push_back(std::move(row));
    }
    return {{"rows", std::move(out)}};
}

} // namespace qhybrid
