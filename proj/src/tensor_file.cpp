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
#include "qhybrid/tensor_file.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "qhybrid/errors.hpp"

namespace qhybrid {

namespace {

void put_u32(std::ostream &out, std::uint32_t v) {
    const std::array<char, 4> bytes{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                    static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(bytes.data(), bytes.size());
}

std::uint32_t get_u32(std::istream &in) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char *>(b.data()), b.size())) {
        throw FormatError("tensor header truncated");
    }
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint8_t get_u8(std::istream &in) {
    char c = 0;
    if (!in.get(c)) {
        throw FormatError("tensor header truncated");
    }
    return static_cast<std::uint8_t>(c);
}

} // namespace

void write_tensor(std::ostream &out, const RawTensor &tensor) {
    if (shape_product(tensor.shape) != tensor.data.size()) {
        throw SizeError("tensor shape does not match payload length");
    }
    out.write(kTensorMagic, sizeof kTensorMagic);
    out.put(static_cast<char>(kTensorVersion));
    out.put(static_cast<char>(kTensorDtypeFloat32));
    put_u32(out, static_cast<std::uint32_t>(tensor.shape.size()));
    for (const std::size_t d : tensor.shape) {
        if (d > std::numeric_limits<std::uint32_t>::max()) {
            throw SizeError("tensor dimension exceeds u32");
        }
        put_u32(out, static_cast<std::uint32_t>(d));
    }
    for (const float f : tensor.data) {
        put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
    if (!out) {
        throw Error("failed to write tensor");
    }
}

RawTensor read_tensor(std::istream &in) {
    char magic[4] = {};
    if (!in.read(magic, sizeof magic)) {
        throw FormatError("tensor header truncated");
    }
    if (std::memcmp(magic, kTensorMagic, sizeof magic) != 0) {
        throw FormatError("bad tensor magic (expected QTNS)");
    }
    const std::uint8_t version = get_u8(in);
    if (version != kTensorVersion) {
        throw FormatError("unsupported tensor version " + std::to_string(version));
    }
    const std::uint8_t dtype = get_u8(in);
    if (dtype != kTensorDtypeFloat32) {
        throw FormatError("unsupported tensor dtype " + std::to_string(dtype));
    }
    RawTensor t;
    const std::uint32_t rank = get_u32(in);
    t.shape.resize(rank);
    for (auto &d : t.shape) {
        d = get_u32(in);
    }
    const std::size_t count = shape_product(t.shape);
    t.data.resize(count);
    std::vector<unsigned char> bytes(count * 4);
    if (count > 0 && !in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
        throw FormatError("tensor payload truncated");
    }
    for (std::size_t i = 0; i < count; ++i) {
        const unsigned char *b = bytes.data() + 4 * i;
        const std::uint32_t u = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                                (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
        t.data[i] = std::bit_cast<float>(u);
    }
    return t;
}

void write_tensor_file(const std::filesystem::path &path, const RawTensor &tensor) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_tensor(out, tensor);
}

RawTensor read_tensor_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ManifestError("cannot open tensor file " + path.string());
    }
    RawTensor t = read_tensor(in);
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("trailing bytes after tensor payload in " + path.string());
    }
    return t;
}

RawTensor to_raw(const Tensor &tensor) {
    RawTensor raw{tensor.shape(), std::vector<float>(tensor.size())};
    for (std::size_t i = 0; i < tensor.size(); ++i) {
        raw.data[i] = static_cast<float>(tensor[i]);
    }
    return raw;
}

Tensor from_raw(const RawTensor &raw) {
    return Tensor(raw.shape, std::vector<double>(raw.data.begin(), raw.data.end()));
}

} // namespace qhybrid
