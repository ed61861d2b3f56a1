#include "infoneck/matrix.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace infoneck {

using EMatF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapF = Eigen::Map<const EMatF>;

void Matrix::check_finite(const char* what) const {
    for (float v : values) {
        if (!std::isfinite(v)) {
            throw ShapeError(std::string(what) + ": non-finite value in matrix");
        }
    }
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.values == b.values;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw ShapeError("matmul: inner dimensions disagree (" + std::to_string(a.cols) +
                         " vs " + std::to_string(b.rows) + ")");
    }
    Matrix out(a.rows, b.cols);
    Eigen::Map<EMatF>(out.values.data(), out.rows, out.cols) =
        MapF(a.values.data(), a.rows, a.cols) * MapF(b.values.data(), b.rows, b.cols);
    return out;
}

Matrix hcat(const std::vector<Matrix>& parts) {
    if (parts.empty()) return {};
    int64_t rows = parts.front().rows;
    int64_t cols = 0;
    for (const Matrix& p : parts) {
        if (p.rows != rows) throw ShapeError("hcat: row counts disagree");
        cols += p.cols;
    }
    Matrix out(rows, cols);
    for (int64_t r = 0; r < rows; ++r) {
        float* dst = out.values.data() + r * cols;
        for (const Matrix& p : parts) {
            const float* src = p.values.data() + r * p.cols;
            dst = std::copy(src, src + p.cols, dst);
        }
    }
    return out;
}

}  // namespace infoneck
