// Small dense row-major matrix. Enough for distance matrices and couplings;
// not a linear-algebra library.
#pragma once

#include <cstddef>
#include <vector>

namespace fairspace {

struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    static Matrix square(size_t n, double fill = 0.0) { return Matrix(n, n, fill); }

    double& at(size_t i, size_t j) { return data[i * cols + j]; }
    double at(size_t i, size_t j) const { return data[i * cols + j]; }

    bool square_shape() const { return rows == cols; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data) {
            double a = v < 0 ? -v : v;
            if (a > m) m = a;
        }
        return m;
    }

    bool operator==(const Matrix&) const = default;
};

}  // namespace fairspace
