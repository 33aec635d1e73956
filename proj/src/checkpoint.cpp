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
#include "qhybrid/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <map>

#include "qhybrid/config.hpp"
#include "qhybrid/errors.hpp"
#include "qhybrid/tensor_file.hpp"

namespace qhybrid {

namespace {

using nlohmann::json;

void put_u32(std::ostream &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

std::uint32_t get_u32(std::istream &in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        char c = 0;
        if (!in.get(c)) {
            throw FormatError("checkpoint truncated");
        }
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

/// Stored tensors in container order. P is ModelParams or const ModelParams,
/// T the matching Tensor constness.
template <class P, class T> std::vector<std::pair<std::string, T *>> named_tensors(P &p, T &theta) {
    std::vector<std::pair<std::string, T *>> out{{"input.gamma", &p.input_gamma},
                                                            {"input.beta", &p.input_beta},
                                                            {"input.running_mean", &p.input_running_mean},
                                                            {"input.running_var", &p.input_running_var}};
    if (!p.theta.empty()) {
        out.emplace_back("quantum.theta", &theta);
    }
    if (!p.linear_w.empty()) {
        out.emplace_back("linear.weight", &p.linear_w);
        out.emplace_back("linear.bias", &p.linear_b);
    }
    for (std::size_t i = 0; i < p.head.size(); ++i) {
        const std::string prefix = "head." + std::to_string(i);
        auto &l = p.head[i];
        if (l.trainable.size() == 2) {
            out.emplace_back(prefix + ".weight", &l.trainable[0]);
            out.emplace_back(prefix + ".bias", &l.trainable[1]);
        }
        if (!l.running_mean.empty()) {
            out.emplace_back(prefix + ".running_mean", &l.running_mean);
            out.emplace_back(prefix + ".running_var", &l.running_var);
        }
    }
    return out;
}

} // namespace

void save_checkpoint(const std::filesystem::path &path, const Model &model, const json &metadata) {
    const ModelParams &p = model.params();
    const Tensor theta({p.theta.size()}, p.theta);
    const auto tensors = named_tensors(p, theta);

    json names = json::array();
    for (const auto &[name, t] : tensors) {
        names.push_back(name);
    }
    const std::string header =
        json{{"model", model_config_to_json(model.config())}, {"tensors", names}, {"metadata", metadata}}.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write checkpoint " + path.string());
    }
    out.write(kCheckpointMagic, sizeof kCheckpointMagic);
    out.put(static_cast<char>(kCheckpointVersion));
    put_u32(out, static_cast<std::uint32_t>(header.size()));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    put_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto &[name, t] : tensors) {
        write_tensor(out, to_raw(*t));
    }
    if (!out) {
        throw Error("failed writing checkpoint " + path.string());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open checkpoint " + path.string());
    }
    char magic[4] = {};
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
        throw FormatError(path.string() + " is not a checkpoint (bad magic)");
    }
    char version = 0;
    if (!in.get(version) || static_cast<std::uint8_t>(version) != kCheckpointVersion) {
        throw FormatError("unsupported checkpoint version");
    }
    std::string header(get_u32(in), '\0');
    if (!in.read(header.data(), static_cast<std::streamsize>(header.size()))) {
        throw FormatError("checkpoint header truncated");
    }
    json doc;
    try {
        doc = json::parse(header);
    } catch (const json::exception &e) {
        throw FormatError(std::string("checkpoint header is not JSON: ") + e.what());
    }
    if (!doc.contains("model") || !doc.contains("tensors")) {
        throw FormatError("checkpoint header lacks model/tensors");
    }

    Checkpoint ck;
    ck.config = model_config_from_json(doc.at("model"));
    ck.metadata = doc.value("metadata", json::object());

    const auto names = doc.at("tensors").get<std::vector<std::string>>();
    const std::uint32_t count = get_u32(in);
    if (count != names.size()) {
        throw FormatError("checkpoint tensor count disagrees with header");
    }
    std::map<std::string, Tensor> stored;
    for (const std::string &name : names) {
        stored[name] = from_raw(read_tensor(in));
    }

    // Start from a freshly initialized model to get the expected layout.
    const Model reference(ck.config);
    ModelParams p = reference.params();
    Tensor theta({p.theta.size()}, p.theta);
    for (const auto &[name, target] : named_tensors(p, theta)) {
        const auto it = stored.find(name);
        if (it == stored.end()) {
            throw ConfigError("checkpoint is missing tensor " + name);
        }
        if (it->second.shape() != target->shape()) {
            throw ConfigError("checkpoint tensor " + name + " has shape " + it->second.shape_string() +
                              ", model expects " + target->shape_string());
        }
        *target = it->second;
    }
    p.theta.assign(theta.data().begin(), theta.data().end());
    ck.params = std::move(p);
    return ck;
}

} // namespace qhybrid
