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
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhybrid/config.hpp"
#include "qhybrid/dataset.hpp"
#include "qhybrid/model.hpp"

namespace qhybrid {

struct EpochMetrics {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double seconds = 0.0;
};

[[nodiscard]] nlohmann::json to_json(const EpochMetrics &m);

struct TrainResult {
    std::vector<EpochMetrics> epochs;
    double test_accuracy = 0.0;
    std::size_t quantum_params = 0;
    std::size_t classical_params = 0;
};

/// 100 * correct / total.
[[nodiscard]] double accuracy_percent(std::span<const int> predicted, std::span<const int> labels);

/// Eval-mode accuracy of `model` on the given trials, in percent.
[[nodiscard]] double evaluate(const Model &model, const Dataset &dataset, std::span<const std::size_t> indices);

/// Runs cfg.epochs epochs of shuffled minibatch Adam on split.train. When
/// `metrics` is non-null one JSON record per epoch is appended to it.
[[nodiscard]] TrainResult train_model(Model &model, const Dataset &dataset, const Split &split,
                                      const ExperimentConfig &cfg, std::ostream *metrics = nullptr);

/// Loads the manifest, splits, trains, and writes the metrics log and the
/// checkpoint when their paths are set.
[[nodiscard]] TrainResult run_experiment(const ExperimentConfig &cfg);

struct EvalResult {
    double accuracy = 0.0;
    std::size_t trials = 0;
};

/// Accuracy of a checkpoint on a dataset. By default the test partition is
/// rebuilt from the split options stored in the checkpoint; `all_trials`
/// scores every trial instead.
[[nodiscard]] EvalResult evaluate_checkpoint(const std::filesystem::path &checkpoint,
                                             const std::filesystem::path &manifest, bool all_trials = false);

struct BenchRow {
    std::string dataset;
    double baseline_accuracy = 0.0;
    double quantum_accuracy = 0.0;
    /// Parameters of the feature block alone (Dense(C*w -> n) vs 2(n-1)L angles).
    std::size_t baseline_block_params = 0;
    std::size_t quantum_block_params = 0;
    std::size_t baseline_total_params = 0;
    std::size_t quantum_total_params = 0;
    /// Non-empty if the row failed.
    std::string error;
};

struct BenchSuite {
    std::vector<ExperimentConfig> experiments;
    /// Where the machine-readable table goes; empty for none.
    std::filesystem::path output;
};

/// {"experiments": ["a.cfg", {...inline config...}], "output": "bench.json"}
[[nodiscard]] BenchSuite load_bench_suite(const std::filesystem::path &path);

/// Trains the classical ablation (linear feature block) and the quantum
/// model on identical splits and seeds. A failing row records its error.
[[nodiscard]] std::vector<BenchRow> run_bench(std::span<const ExperimentConfig> experiments);

[[nodiscard]] std::string format_bench_table(std::span<const BenchRow> rows);
[[nodiscard]] nlohmann::json bench_to_json(std::span<const BenchRow> rows);

} // namespace qhybrid
