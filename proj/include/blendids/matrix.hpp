#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace blendids {

// Dense row-major matrix of doubles. Minimal on purpose: the classifiers only
// need row views and element access.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), values(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) {
        assert(r < rows && c < cols);
        return values[r * cols + c];
    }
    double at(std::size_t r, std::size_t c) const {
        assert(r < rows && c < cols);
        return values[r * cols + c];
    }

    std::span<double> row(std::size_t r) {
        assert(r < rows);
        return {values.data() + r * cols, cols};
    }
    std::span<const double> row(std::size_t r) const {
        assert(r < rows);
        return {values.data() + r * cols, cols};
    }

    bool empty() const { return rows == 0; }
};

} // namespace blendids
