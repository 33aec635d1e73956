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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qhybrid/tensor.hpp"

namespace qhybrid {

struct ManifestEntry {
    /// Paths are relative to the manifest's directory unless absolute.
    std::string tensor;
    std::string labels;
    int subject = 0;
};

/// JSON document describing a dataset:
///
///   {"name": ..., "modality": ..., "channels": C, "time": T,
///    "num_classes": K, "subjects": S,
///    "files": [{"tensor": "s0.qtns", "labels": "s0_labels.qtns", "subject": 0}, ...]}
///
/// Each tensor file holds [trials, C, T]; each labels file a rank-1 tensor
/// of integer class ids.
struct DatasetManifest {
    std::string name;
    std::string modality;
    std::size_t channels = 0;
    std::size_t time = 0;
    std::size_t num_classes = 0;
    std::size_t subjects = 0;
    std::vector<ManifestEntry> files;
};

[[nodiscard]] DatasetManifest read_manifest(const std::filesystem::path &path);
void write_manifest(const std::filesystem::path &path, const DatasetManifest &manifest);

struct Dataset {
    DatasetManifest manifest;
    /// [N, C, T]
    Tensor signals;
    std::vector<int> labels;
    std::vector<int> subjects;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    /// Rows `indices` of signals as a [B, C, T] batch.
    [[nodiscard]] Tensor gather(std::span<const std::size_t> indices) const;
    [[nodiscard]] std::vector<int> gather_labels(std::span<const std::size_t> indices) const;
};

/// Loads every referenced file. Throws FormatError for malformed tensor
/// files and ManifestError for missing files, dimension disagreements or
/// labels outside [0, K).
[[nodiscard]] Dataset load_dataset(const std::filesystem::path &manifest_path);

/// Writes a dataset (one tensor/labels pair per subject) plus its manifest.
void write_dataset(const std::filesystem::path &dir, const std::string &stem, const Dataset &dataset);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

struct SplitOptions {
    double train_fraction = 0.8;
    bool stratified = true;
    /// Hold out whole subjects instead of trials.
    bool cross_subject = false;
    std::uint64_t seed = 0;
};

/// Per class, shuffles the trial indices and holds out
/// round((1 - train_fraction) * count) of them (at least one, leaving at
/// least one for training). Throws SplitError for a class with < 2 trials.
[[nodiscard]] Split stratified_split(std::span<const int> labels, double train_fraction, std::uint64_t seed);

[[nodiscard]] Split split_dataset(const Dataset &dataset, const SplitOptions &options);

/// Throws SplitError unless train and test are disjoint and cover [0, n).
void check_split(const Split &split, std::size_t n);

} // namespace qhybrid
