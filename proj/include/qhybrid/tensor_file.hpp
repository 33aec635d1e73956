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
#include <iosfwd>
#include <vector>

#include "qhybrid/tensor.hpp"

/// QTNS binary tensor container:
///
///   magic   "QTNS"                     4 bytes
///   version u8 = 1
///   dtype   u8 = 1 (float32)
///   rank    u32 little-endian
///   dims    rank x u32 little-endian
///   payload product(dims) x float32 little-endian, row-major
namespace qhybrid {

inline constexpr char kTensorMagic[4] = {'Q', 'T', 'N', 'S'};
inline constexpr std::uint8_t kTensorVersion = 1;
inline constexpr std::uint8_t kTensorDtypeFloat32 = 1;

/// Tensor exactly as stored on disk.
struct RawTensor {
    std::vector<std::size_t> shape;
    std::vector<float> data;
};

void write_tensor(std::ostream &out, const RawTensor &tensor);
/// Throws FormatError on bad magic/version/dtype or a truncated payload.
[[nodiscard]] RawTensor read_tensor(std::istream &in);

void write_tensor_file(const std::filesystem::path &path, const RawTensor &tensor);
[[nodiscard]] RawTensor read_tensor_file(const std::filesystem::path &path);

/// Narrowing/widening conversions between on-disk float32 and in-memory double.
[[nodiscard]] RawTensor to_raw(const Tensor &tensor);
[[nodiscard]] Tensor from_raw(const RawTensor &raw);

} // namespace qhybrid
