#include "waveica/sample.hpp"

#include <cmath>

namespace waveica {

namespace {

// Returns permutation sign, or 0 when singular. lu is overwritten in place.
int lu_decompose(Matrix& lu, std::vector<int>& perm) {
    int n = lu.n;
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    int sign = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(lu(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(lu(r, col));
            if (v > best) { best = v; pivot = r; }
        }
        if (best == 0.0) return 0;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(lu(pivot, j), lu(col, j));
            std::swap(perm[pivot], perm[col]);
            sign = -sign;
        }
        for (int r = col + 1; r < n; ++r) {
            double f = lu(r, col) / lu(col, col);
            lu(r, col) = f;
            for (int j = col + 1; j < n; ++j) lu(r, j) -= f * lu(col, j);
        }
    }
    return sign;
}

}  // namespace

double lu_determinant(const Matrix& m) {
    Matrix lu = m;
    std::vector<int> perm;
    int sign = lu_decompose(lu, perm);
    if (sign == 0) return 0.0;
    double det = sign;
    for (int i = 0; i < m.n; ++i) det *= lu(i, i);
    return det;
}

Matrix invert(const Matrix& m) {
    Matrix lu = m;
    std::vector<int> perm;
    if (lu_decompose(lu, perm) == 0)
        throw std::runtime_error("invert: matrix is singular");
    int n = m.n;
    Matrix inv(n);
    std::vector<double> col(n), x(n);
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) col[i] = (perm[i] == c) ? 1.0 : 0.0;
        // forward
        for (int i = 0; i < n; ++i) {
            x[i] = col[i];
            for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
        }
        // backward
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
            x[i] /= lu(i, i);
        }
        for (int i = 0; i < n; ++i) inv(i, c) = x[i];
    }
    return inv;
}

}  // namespace waveica
