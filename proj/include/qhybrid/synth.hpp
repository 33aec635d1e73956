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

#include "qhybrid/dataset.hpp"

namespace qhybrid {

/// Four Gaussian blobs in 8 dimensions (C=8, T=1): class c is centred at
/// 4 e_c with unit noise, so class centres sit 4*sqrt(2) sigma apart.
/// Trials are spread over four subjects round-robin.
[[nodiscard]] Dataset make_blobs(std::size_t trials_per_class, std::uint64_t seed);

/// Four-class multichannel oscillations (C=4, T=16). Class c oscillates at
/// c+1 cycles per trial with a per-channel phase offset, random phase
/// jitter and additive noise.
[[nodiscard]] Dataset make_waves(std::size_t trials_per_class, std::uint64_t seed);

struct SynthOptions {
    std::uint64_t seed = 7;
    std::size_t trials_per_class = 200;
    std::size_t epochs = 50;
};

/// Writes under `out`:
///   blobs/blobs.json (+ tensor files), waves/waves.json (+ tensor files),
///   synth.cfg  plain-mode experiment on the blobs,
///   waves.cfg  hybrid-mode experiment on the waves,
///   suite.cfg  bench suite over both.
void write_synthetic_suite(const std::filesystem::path &out, const SynthOptions &options = {});

} // namespace qhybrid
