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
#include "qhybrid/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <type_traits>

#include "qhybrid/errors.hpp"

namespace qhybrid {

namespace {

using nlohmann::json;

void reject_unknown(const json &doc, std::initializer_list<const char *> allowed, const std::string &where) {
    if (!doc.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto &[key, value] : doc.items()) {
        if (!keys.contains(key)) {
            throw ConfigError("unknown key \"" + key + "\" in " + where);
        }
    }
}

template <class T> void read_opt(const json &doc, const char *key, T &out, const std::string &where) {
    if (!doc.contains(key)) {
        return;
    }
    try {
        out = doc.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

json layer_to_json(const LayerSpec &spec) {
    return std::visit(
        [](const auto &s) -> json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, BatchNormSpec>) {
                return {{"type", "BatchNorm"}, {"features", s.features}};
            } else if constexpr (std::is_same_v<S, Conv1DSpec>) {
                return {{"type", "Conv1D"},   {"in_channels", s.in_channels}, {"out_channels", s.out_channels},
                        {"kernel", s.kernel}, {"stride", s.stride},           {"padding", s.padding}};
            } else if constexpr (std::is_same_v<S, DepthwiseConvSpec>) {
                return {{"type", "DepthwiseConv"}, {"channels", s.channels}, {"kernel", s.kernel},
                        {"padding", s.padding}};
            } else if constexpr (std::is_same_v<S, AvgPoolSpec>) {
                return {{"type", "AvgPool"}, {"width", s.width}};
            } else if constexpr (std::is_same_v<S, DenseSpec>) {
                return {{"type", "Dense"}, {"in", s.in}, {"out", s.out}, {"zero_init", s.zero_init}};
            } else if constexpr (std::is_same_v<S, EluSpec>) {
                return {{"type", "ELU"}};
            } else {
                return {{"type", "Flatten"}};
            }
        },
        spec);
}

LayerSpec layer_from_json(const json &doc) {
    if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string()) {
        throw ConfigError("layer entry needs a string \"type\"");
    }
    const std::string type = doc.at("type").get<std::string>();
    const std::string where = "layer " + type;
    if (type == "BatchNorm") {
        reject_unknown(doc, {"type", "features"}, where);
        BatchNormSpec s;
        read_opt(doc, "features", s.features, where);
        return s;
    }
    if (type == "Conv1D") {
        reject_unknown(doc, {"type", "in_channels", "out_channels", "kernel", "stride", "padding"}, where);
        Conv1DSpec s;
        read_opt(doc, "in_channels", s.in_channels, where);
        read_opt(doc, "out_channels", s.out_channels, where);
        read_opt(doc, "kernel", s.kernel, where);
        read_opt(doc, "stride", s.stride, where);
        read_opt(doc, "padding", s.padding, where);
        return s;
    }
    if (type == "DepthwiseConv") {
        reject_unknown(doc, {"type", "channels", "kernel", "padding"}, where);
        DepthwiseConvSpec s;
        read_opt(doc, "channels", s.channels, where);
        read_opt(doc, "kernel", s.kernel, where);
        read_opt(doc, "padding", s.padding, where);
        return s;
    }
    if (type == "AvgPool") {
        reject_unknown(doc, {"type", "width"}, where);
        AvgPoolSpec s;
        read_opt(doc, "width", s.width, where);
        return s;
    }
    if (type == "Dense") {
        reject_unknown(doc, {"type", "in", "out", "zero_init"}, where);
        DenseSpec s;
        read_opt(doc, "in", s.in, where);
        read_opt(doc, "out", s.out, where);
        read_opt(doc, "zero_init", s.zero_init, where);
        return s;
    }
    if (type == "ELU") {
        reject_unknown(doc, {"type"}, where);
        return EluSpec{};
    }
    if (type == "Flatten") {
        reject_unknown(doc, {"type"}, where);
        return FlattenSpec{};
    }
    throw ConfigError("unknown layer type \"" + type + "\"");
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
    const std::filesystem::path path(p);
    return path.empty() || path.is_absolute() ? path : base / path;
}

} // namespace

json model_config_to_json(const ModelConfig &cfg) {
    json head = json::array();
    for (const LayerSpec &spec : cfg.head) {
        head.push_back(layer_to_json(spec));
    }
    return {{"mode", cfg.mode == ModelMode::Plain ? "plain" : "hybrid"},
            {"feature_block", cfg.feature_block == FeatureBlock::Quantum ? "quantum" : "linear"},
            {"channels", cfg.channels},
            {"time", cfg.time},
            {"n_qubits", cfg.n_qubits},
            {"layers", cfg.layers},
            {"window", cfg.window},
            {"initial_rotation", cfg.initial_rotation},
            {"num_classes", cfg.num_classes},
            {"seed", cfg.seed},
            {"head", std::move(head)}};
}

ModelConfig model_config_from_json(const json &doc) {
    const std::string where = "model";
    reject_unknown(doc,
                   {"mode", "feature_block", "channels", "time", "n_qubits", "layers", "window", "initial_rotation",
                    "num_classes", "seed", "head"},
                   where);
    ModelConfig cfg;
    cfg.channels = 0;
    cfg.time = 0;
    cfg.num_classes = 0;
    std::string mode = "plain";
    std::string block = "quantum";
    read_opt(doc, "mode", mode, where);
    read_opt(doc, "feature_block", block, where);
    if (mode != "plain" && mode != "hybrid") {
        throw ConfigError("model.mode must be \"plain\" or \"hybrid\"");
    }
    if (block != "quantum" && block != "linear") {
        throw ConfigError("model.feature_block must be \"quantum\" or \"linear\"");
    }
    cfg.mode = mode == "plain" ? ModelMode::Plain : ModelMode::Hybrid;
    cfg.feature_block = block == "quantum" ? FeatureBlock::Quantum : FeatureBlock::Linear;
    read_opt(doc, "channels", cfg.channels, where);
    read_opt(doc, "time", cfg.time, where);
    read_opt(doc, "n_qubits", cfg.n_qubits, where);
    read_opt(doc, "layers", cfg.layers, where);
    read_opt(doc, "window", cfg.window, where);
    read_opt(doc, "initial_rotation", cfg.initial_rotation, where);
    read_opt(doc, "num_classes", cfg.num_classes, where);
    read_opt(doc, "seed", cfg.seed, where);
    if (doc.contains("head")) {
        if (!doc.at("head").is_array()) {
            throw ConfigError("model.head must be an array");
        }
        for (const json &layer : doc.at("head")) {
            cfg.head.push_back(layer_from_json(layer));
        }
    }
    return cfg;
}

json split_to_json(const SplitOptions &split) {
    return {{"train_fraction", split.train_fraction},
            {"stratified", split.stratified},
            {"cross_subject", split.cross_subject},
            {"seed", split.seed}};
}

SplitOptions split_from_json(const json &doc) {
    reject_unknown(doc, {"train_fraction", "stratified", "cross_subject", "seed"}, "split");
    SplitOptions s;
    read_opt(doc, "train_fraction", s.train_fraction, "split");
    read_opt(doc, "stratified", s.stratified, "split");
    read_opt(doc, "cross_subject", s.cross_subject, "split");
    read_opt(doc, "seed", s.seed, "split");
    if (!(s.train_fraction > 0.0 && s.train_fraction < 1.0)) {
        throw ConfigError("split.train_fraction must be in (0, 1)");
    }
    return s;
}

ExperimentConfig experiment_config_from_json(const json &doc, const std::filesystem::path &base_dir) {
    const std::string where = "experiment config";
    reject_unknown(doc,
                   {"name", "manifest", "model", "epochs", "batch_size", "lr", "split", "metrics_path",
                    "checkpoint_path"},
                   where);
    ExperimentConfig cfg;
    std::string manifest, metrics, checkpoint;
    read_opt(doc, "name", cfg.name, where);
    read_opt(doc, "manifest", manifest, where);
    read_opt(doc, "epochs", cfg.epochs, where);
    read_opt(doc, "batch_size", cfg.batch_size, where);
    read_opt(doc, "lr", cfg.lr, where);
    read_opt(doc, "metrics_path", metrics, where);
    read_opt(doc, "checkpoint_path", checkpoint, where);
    if (manifest.empty()) {
        throw ConfigError("experiment config needs a \"manifest\"");
    }
    if (!doc.contains("model")) {
        throw ConfigError("experiment config needs a \"model\" section");
    }
    cfg.model = model_config_from_json(doc.at("model"));
    if (doc.contains("split")) {
        cfg.split = split_from_json(doc.at("split"));
    }
    if (cfg.epochs < 1 || cfg.batch_size < 1 || !(cfg.lr >= 0.0)) {
        throw ConfigError("epochs and batch_size must be >= 1 and lr >= 0");
    }
    cfg.manifest = resolve(base_dir, manifest);
    cfg.metrics_path = resolve(base_dir, metrics);
    cfg.checkpoint_path = resolve(base_dir, checkpoint);
    if (cfg.name.empty()) {
        cfg.name = cfg.manifest.stem().string();
    }
    return cfg;
}

json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + " is not valid JSON: " + e.what());
    }
}

ExperimentConfig load_experiment_config(const std::filesystem::path &path) {
    return experiment_config_from_json(read_json_file(path), path.parent_path());
}

ModelConfig resolve_model_config(ModelConfig cfg, const DatasetManifest &manifest) {
    const auto fill = [](std::size_t &field, std::size_t value, const char *name) {
        if (field == 0) {
            field = value;
        } else if (field != value) {
            throw ConfigError(std::string("model.") + name + " = " + std::to_string(field) +
                              " contradicts the manifest (" + std::to_string(value) + ")");
        }
    };
    fill(cfg.channels, manifest.channels, "channels");
    fill(cfg.time, manifest.time, "time");
    fill(cfg.num_classes, manifest.num_classes, "num_classes");
    return cfg;
}

} // namespace qhybrid
