#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "infoneck/errors.hpp"

namespace infoneck {

// Dense row-major float matrix. Storage is 32-bit; reductions that feed
// statistics accumulate in 64-bit (see numerics.cpp).
struct Matrix {
    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<float> values;  // rows * cols, row-major

    Matrix() = default;
    Matrix(int64_t r, int64_t c) : rows(r), cols(c), values(static_cast<size_t>(r * c), 0.0f) {}

    static Matrix zeros(int64_t r, int64_t c) { return Matrix(r, c); }

    float& at(int64_t r, int64_t c) { return values[static_cast<size_t>(r * cols + c)]; }
    float at(int64_t r, int64_t c) const { return values[static_cast<size_t>(r * cols + c)]; }

    std::span<float> row(int64_t r) {
        return {values.data() + r * cols, static_cast<size_t>(cols)};
    }
    std::span<const float> row(int64_t r) const {
        return {values.data() + r * cols, static_cast<size_t>(cols)};
    }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    // Gathers the given rows into a new matrix.
    Matrix take_rows(std::span<const int64_t> idx) const {
        Matrix out(static_cast<int64_t>(idx.size()), cols);
        for (size_t i = 0; i < idx.size(); ++i) {
            const float* src = values.data() + idx[i] * cols;
            float* dst = out.values.data() + static_cast<int64_t>(i) * cols;
            std::copy(src, src + cols, dst);
        }
        return out;
    }

    void check_finite(const char* what) const;
};

bool operator==(const Matrix& a, const Matrix& b);

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);

// Horizontal concatenation (equal row counts).
Matrix hcat(const std::vector<Matrix>& parts);

}  // namespace infoneck
