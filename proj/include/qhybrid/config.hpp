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
#include <string>

#include <json.hpp>

#include "qhybrid/dataset.hpp"
#include "qhybrid/model.hpp"

namespace qhybrid {

/// Everything needed to reproduce one training run. Stored as JSON whose
/// keys mirror these fields; unknown keys are rejected.
///
///   {"name": "blobs", "manifest": "blobs/blobs.json",
///    "model": {"mode": "plain", "n_qubits": 3, "layers": 2, ...},
///    "epochs": 50, "batch_size": 128, "lr": 0.1,
///    "split": {"train_fraction": 0.8, "stratified": true, "cross_subject": false, "seed": 0},
///    "metrics_path": "blobs.metrics.jsonl", "checkpoint_path": "blobs.ckpt"}
///
/// model.channels, model.time and model.num_classes may be omitted; they
/// are then taken from the manifest.
struct ExperimentConfig {
    std::string name;
    std::filesystem::path manifest;
    ModelConfig model;
    std::size_t epochs = 50;
    std::size_t batch_size = 128;
    double lr = 0.1;
    SplitOptions split;
    std::filesystem::path metrics_path;
    std::filesystem::path checkpoint_path;
};

[[nodiscard]] nlohmann::json model_config_to_json(const ModelConfig &cfg);
/// Throws ConfigError on unknown keys or wrongly typed values.
[[nodiscard]] ModelConfig model_config_from_json(const nlohmann::json &doc);

[[nodiscard]] nlohmann::json split_to_json(const SplitOptions &split);
[[nodiscard]] SplitOptions split_from_json(const nlohmann::json &doc);

/// Relative paths in the document resolve against `base_dir`.
[[nodiscard]] ExperimentConfig experiment_config_from_json(const nlohmann::json &doc,
                                                           const std::filesystem::path &base_dir);
[[nodiscard]] ExperimentConfig load_experiment_config(const std::filesystem::path &path);

/// Parses a JSON file, mapping I/O and syntax failures to ConfigError.
[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path &path);

/// Fills channels/time/num_classes left at zero from the manifest and
/// rejects values that contradict it.
[[nodiscard]] ModelConfig resolve_model_config(ModelConfig cfg, const DatasetManifest &manifest);

} // namespace qhybrid
