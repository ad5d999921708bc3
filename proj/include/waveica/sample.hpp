#ifndef WAVEICA_SAMPLE_HPP
#define WAVEICA_SAMPLE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace waveica {

// n observations in R^d, flat row-major storage.
// Estimators require all coordinates in [0,1]; call validate_unit_cube()
// at entry points that rely on it.
struct Sample {
    int dim = 0;
    std::vector<double> data;  // size n*dim

    Sample() = default;
    Sample(int d, std::vector<double> values) : dim(d), data(std::move(values)) {
        if (d < 1) throw std::invalid_argument("Sample: dim must be >= 1");
        if (data.size() % static_cast<std::size_t>(d) != 0)
            throw std::invalid_argument("Sample: data size not a multiple of dim");
    }

    long n() const { return dim == 0 ? 0 : static_cast<long>(data.size()) / dim; }
    double at(long i, int axis) const { return data[static_cast<std::size_t>(i) * dim + axis]; }
    double& at(long i, int axis) { return data[static_cast<std::size_t>(i) * dim + axis]; }

    void validate_unit_cube() const {
        for (std::size_t i = 0; i < data.size(); ++i) {
            double v = data[i];
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("Sample: coordinate outside [0,1] at flat index " +
                                            std::to_string(i));
        }
    }
};

// Dense square matrix, row-major.
struct Matrix {
    int n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
    Matrix(int size, std::vector<double> values) : n(size), a(std::move(values)) {
        if (a.size() != static_cast<std::size_t>(n) * n)
            throw std::invalid_argument("Matrix: value count does not match size");
    }

    static Matrix identity(int size) {
        Matrix m(size);
        for (int i = 0; i < size; ++i) m(i, i) = 1.0;
        return m;
    }

    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }

    Matrix operator*(const Matrix& rhs) const {
        if (n != rhs.n) throw std::invalid_argument("Matrix: size mismatch in product");
        Matrix out(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double v = (*this)(i, k);
                if (v == 0.0) continue;
                for (int j = 0; j < n; ++j) out(i, j) += v * rhs(k, j);
            }
        return out;
    }
};

// LU with partial pivoting; returns determinant, fills inverse if requested.
double lu_determinant(const Matrix& m);
Matrix invert(const Matrix& m);  // throws std::runtime_error when singular

// Invertible mixing matrix with cached inverse.
struct MixingMatrix {
    Matrix A;
    Matrix B;  // A^{-1}

    static MixingMatrix from(Matrix m) {
        double det = lu_determinant(m);
        if (std::fabs(det) <= 1e-10)
            throw std::invalid_argument("MixingMatrix: matrix is singular (|det| <= 1e-10)");
        MixingMatrix out;
        out.B = invert(m);
        out.A = std::move(m);
        return out;
    }
};

}  // namespace waveica

#endif
