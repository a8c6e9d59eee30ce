#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "advids/errors.hpp"

namespace advids::numerics {

// Dense rank-1..3 real tensor, row-major, 64-bit.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;

    static Tensor zeros(std::vector<std::size_t> shape);
    static Tensor from(std::vector<double> values);  // rank-1

    std::size_t numel() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }

    double& at(std::size_t i) { return data[i]; }
    double at(std::size_t i) const { return data[i]; }

    // rank-2 (rows, cols)
    double& at2(std::size_t r, std::size_t c) { return data[r * shape[1] + c]; }
    double at2(std::size_t r, std::size_t c) const { return data[r * shape[1] + c]; }

    // rank-3 (a, b, c)
    double& at3(std::size_t a, std::size_t b, std::size_t c) {
        return data[(a * shape[1] + b) * shape[2] + c];
    }
    double at3(std::size_t a, std::size_t b, std::size_t c) const {
        return data[(a * shape[1] + b) * shape[2] + c];
    }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }

    bool all_finite() const;

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

std::size_t shape_numel(const std::vector<std::size_t>& shape);
std::string shape_str(const std::vector<std::size_t>& shape);

// Throws DimensionError naming `who` when shapes differ.
void require_shape(const Tensor& t, const std::vector<std::size_t>& expected,
                   const std::string& who);

}  // namespace advids::numerics
