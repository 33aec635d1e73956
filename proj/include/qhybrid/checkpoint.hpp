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

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "qhybrid/model.hpp"

/// Checkpoint container:
///
///   magic        "QCKP"                      4 bytes
///   version      u8 = 1
///   header_len   u32 little-endian
///   header       JSON text: {"model": <model config>, "tensors": [names...],
///                            "metadata": {...}}
///   tensor_count u32 little-endian
///   tensors      tensor_count QTNS blobs, in header order
namespace qhybrid {

inline constexpr char kCheckpointMagic[4] = {'Q', 'C', 'K', 'P'};
inline constexpr std::uint8_t kCheckpointVersion = 1;

struct Checkpoint {
    ModelConfig config;
    ModelParams params;
    nlohmann::json metadata;
};

void save_checkpoint(const std::filesystem::path &path, const Model &model,
                     const nlohmann::json &metadata = nlohmann::json::object());

/// Throws FormatError for malformed containers and ConfigError when the
/// stored tensors do not fit the stored configuration.
[[nodiscard]] Checkpoint load_checkpoint(const std::filesystem::path &path);

} // namespace qhybrid
