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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qhybrid {

/// Dense row-major array of doubles.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    [[nodiscard]] const std::vector<std::size_t> &shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t rank() const noexcept { return shape_.size(); }
    [[nodiscard]] std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::vector<double> &storage() noexcept { return data_; }
    [[nodiscard]] const std::vector<double> &storage() const noexcept { return data_; }

    [[nodiscard]] double &operator[](std::size_t i) { return data_[i]; }
    [[nodiscard]] double operator[](std::size_t i) const { return data_[i]; }

    [[nodiscard]] double &at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    [[nodiscard]] double &at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    [[nodiscard]] double at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    /// Row `i` of the leading axis as a contiguous view.
    [[nodiscard]] std::span<double> row(std::size_t i);
    [[nodiscard]] std::span<const double> row(std::size_t i) const;

    /// Same data, new shape of equal element count.
    [[nodiscard]] Tensor reshaped(std::vector<std::size_t> shape) const;

    [[nodiscard]] bool all_finite() const;
    [[nodiscard]] std::string shape_string() const;

  private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

[[nodiscard]] std::size_t shape_product(std::span<const std::size_t> shape);

} // namespace qhybrid
