#include "advids/numerics/tensor.hpp"

#include <cmath>
#include <sstream>

namespace advids::numerics {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return shape.empty() ? 0 : n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ", ";
        os << shape[i];
    }
    os << ")";
    return os.str();
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
    if (shape.empty() || shape.size() > 3) {
        throw DimensionError("tensor rank must be 1..3, got " + shape_str(shape));
    }
    for (std::size_t d : shape) {
        if (d == 0) throw DimensionError("zero dimension in shape " + shape_str(shape));
    }
    Tensor t;
    t.shape = std::move(shape);
    t.data.assign(shape_numel(t.shape), 0.0);
    return t;
}

Tensor Tensor::from(std::vector<double> values) {
    Tensor t;
    t.shape = {values.size()};
    t.data = std::move(values);
    return t;
}

bool Tensor::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void require_shape(const Tensor& t, const std::vector<std::size_t>& expected,
                   const std::string& who) {
    if (t.shape != expected) {
        throw DimensionError(who + ": expected shape " + shape_str(expected) +
                             ", got " + shape_str(t.shape));
    }
}

}  // namespace advids::numerics
