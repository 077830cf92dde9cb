#pragma once

#include <stdexcept>
#include <utility>

namespace dynoct {

/// Rectangular pixel grid; pixels are flattened row-major.
struct PixelGrid {
    int rows = 0;
    int cols = 0;

    PixelGrid() = default;
    PixelGrid(int rows_, int cols_) : rows(rows_), cols(cols_) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("PixelGrid: dimensions must be >= 1");
    }

    int size() const { return rows * cols; }

    int flatten(int r, int c) const {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::invalid_argument("PixelGrid::flatten: index out of range");
        return r * cols + c;
    }

    std::pair<int, int> unflatten(int j) const {
        if (j < 0 || j >= size())
            throw std::invalid_argument("PixelGrid::unflatten: index out of range");
        return {j / cols, j % cols};
    }

    bool operator==(const PixelGrid&) const = default;
};

} // namespace dynoct
