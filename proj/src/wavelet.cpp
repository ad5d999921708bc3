#include "waveica/wavelet.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>

namespace waveica {

namespace {

using cd = std::complex<double>;

// Solves a dense square system in place; throws when the pivot collapses.
std::vector<double> solve_linear(std::vector<std::vector<double>> m, std::vector<double> rhs) {
    int n = static_cast<int>(rhs.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        if (std::fabs(m[pivot][col]) < 1e-14)
            throw std::runtime_error("solve_linear: singular system");
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (int r = col + 1; r < n; ++r) {
            double f = m[r][col] / m[col][col];
            for (int j = col; j < n; ++j) m[r][j] -= f * m[col][j];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double v = rhs[i];
        for (int j = i + 1; j < n; ++j) v -= m[i][j] * x[j];
        x[i] = v / m[i][i];
    }
    return x;
}

std::vector<cd> durand_kerner(const std::vector<cd>& monic) {
    int deg = static_cast<int>(monic.size()) - 1;
    std::vector<cd> roots(deg);
    cd seed(0.4, 0.9);
    cd acc(1.0, 0.0);
    for (int i = 0; i < deg; ++i) {
        acc *= seed;
        roots[i] = acc;
    }
    auto eval = [&](cd z) {
        cd v = monic[deg];
        for (int i = deg - 1; i >= 0; --i) v = v * z + monic[i];
        return v;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (int i = 0; i < deg; ++i) {
            cd denom(1.0, 0.0);
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            cd delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-15) break;
    }
    return roots;
}

std::vector<cd> poly_mul(const std::vector<cd>& a, const std::vector<cd>& b) {
    std::vector<cd> out(a.size() + b.size() - 1, cd(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

std::vector<double> spectral_factorization(int order_n) {
    int deg = order_n - 1;
    // P(y) = sum_k binom(N-1+k, k) y^k, the Daubechies half-band polynomial.
    std::vector<cd> p(deg + 1);
    for (int k = 0; k <= deg; ++k) p[k] = cd(binom(order_n - 1 + k, k), 0.0);

    std::vector<cd> q{cd(1.0, 0.0)};
    if (deg > 0) {
        std::vector<cd> monic(p);
        for (auto& c : monic) c /= p[deg];
        for (cd y : durand_kerner(monic)) {
            // y = (2 - z - 1/z)/4  =>  z^2 + (4y-2) z + 1 = 0, keep |z| < 1
            cd b = 4.0 * y - 2.0;
            cd disc = std::sqrt(b * b - 4.0);
            cd z1 = (-b + disc) / 2.0;
            cd z2 = (-b - disc) / 2.0;
            cd z = std::abs(z1) < std::abs(z2) ? z1 : z2;
            q = poly_mul(q, std::vector<cd>{-z, cd(1.0, 0.0)});
        }
    }
    std::vector<cd> band{cd(1.0, 0.0)};
    const std::vector<cd> one_plus_z{cd(1.0, 0.0), cd(1.0, 0.0)};
    for (int i = 0; i < order_n; ++i) band = poly_mul(band, one_plus_z);
    std::vector<cd> h = poly_mul(band, q);

    std::vector<double> coeffs(h.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        coeffs[i] = h[i].real();
        sum += coeffs[i];
    }
    double scale = std::sqrt(2.0) / sum;
    for (double& c : coeffs) c *= scale;
    // canonical (minimum-phase) orientation
    if (std::fabs(coeffs.front()) < std::fabs(coeffs.back()))
        std::reverse(coeffs.begin(), coeffs.end());
    return coeffs;
}

// Polishes the filter against the full constraint system:
// sum, even-shift orthonormality, vanishing moments.
void gauss_newton_polish(std::vector<double>& h, int order_n) {
    int len = 2 * order_n;
    int neq = 2 * order_n + 1;
    for (int iter = 0; iter < 8; ++iter) {
        std::vector<double> r(neq, 0.0);
        std::vector<std::vector<double>> jac(neq, std::vector<double>(len, 0.0));
        int row = 0;
        for (int k = 0; k < len; ++k) {
            r[row] += h[k];
            jac[row][k] = 1.0;
        }
        r[row] -= std::sqrt(2.0);
        ++row;
        for (int m = 0; m < order_n; ++m, ++row) {
            for (int k = 0; k + 2 * m < len; ++k) {
                r[row] += h[k] * h[k + 2 * m];
                jac[row][k] += h[k + 2 * m];
                jac[row][k + 2 * m] += h[k];
            }
            if (m == 0) r[row] -= 1.0;
        }
        for (int p = 0; p < order_n; ++p, ++row) {
            for (int k = 0; k < len; ++k) {
                double kp = (p == 0) ? 1.0 : std::pow(static_cast<double>(k), p);
                double sgn = (k % 2 == 0) ? 1.0 : -1.0;
                r[row] += sgn * kp * h[k];
                jac[row][k] = sgn * kp;
            }
        }
        double rnorm = 0.0;
        for (double v : r) rnorm += v * v;
        if (rnorm < 1e-28) break;
        // normal equations
        std::vector<std::vector<double>> jtj(len, std::vector<double>(len, 0.0));
        std::vector<double> jtr(len, 0.0);
        for (int e = 0; e < neq; ++e)
            for (int i = 0; i < len; ++i) {
                if (jac[e][i] == 0.0) continue;
                jtr[i] += jac[e][i] * r[e];
                for (int j2 = 0; j2 < len; ++j2) jtj[i][j2] += jac[e][i] * jac[e][j2];
            }
        std::vector<double> step = solve_linear(std::move(jtj), std::move(jtr));
        for (int i = 0; i < len; ++i) h[i] -= step[i];
    }
}

}  // namespace

DaubechiesFilter make_filter(int order_n) {
    if (order_n < 1 || order_n > kMaxDaubechiesOrder)
        throw std::invalid_argument("make_filter: unsupported order_N (supported 1.." +
                                    std::to_string(kMaxDaubechiesOrder) + ")");
    DaubechiesFilter f;
    f.order_n = order_n;
    if (order_n == 1) {
        double v = 1.0 / std::sqrt(2.0);
        f.coeffs = {v, v};
        return f;
    }
    f.coeffs = spectral_factorization(order_n);
    gauss_newton_polish(f.coeffs, order_n);

    double sum = 0.0, ortho = 0.0;
    for (double c : f.coeffs) sum += c;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) ortho += f.coeffs[k] * f.coeffs[k];
    if (std::fabs(sum - std::sqrt(2.0)) > 1e-12 || std::fabs(ortho - 1.0) > 1e-10)
        throw std::runtime_error("make_filter: constraint system did not converge");
    return f;
}

ScalingTable build_table(const DaubechiesFilter& filter, int depth) {
    if (depth < 0) throw std::invalid_argument("build_table: depth must be >= 0");
    int n = filter.order_n;
    int support = 2 * n - 1;
    ScalingTable table;
    table.filter = filter;
    table.depth = depth;
    std::size_t grid = (static_cast<std::size_t>(support) << depth) + 1;
    table.values.assign(grid, 0.0);

    if (n == 1) {
        // Haar: indicator of [0,1), zero at the right endpoint.
        for (std::size_t m = 0; m + 1 < grid; ++m) table.values[m] = 1.0;
        return table;
    }

    // Integer points: eigenvector of the refinement matrix for eigenvalue 1,
    // normalized so that sum phi(k) = 1.
    int interior = support - 1;  // k = 1 .. 2N-2
    std::vector<std::vector<double>> m(interior, std::vector<double>(interior, 0.0));
    std::vector<double> rhs(interior, 0.0);
    double rt2 = std::sqrt(2.0);
    for (int a = 1; a <= interior; ++a) {
        for (int b = 1; b <= interior; ++b) {
            int idx = 2 * a - b;
            double v = (idx >= 0 && idx < 2 * n) ? rt2 * filter.coeffs[idx] : 0.0;
            if (a == b) v -= 1.0;
            m[a - 1][b - 1] = v;
        }
    }
    // replace the last equation by the normalization
    for (int b = 0; b < interior; ++b) m[interior - 1][b] = 1.0;
    rhs[interior - 1] = 1.0;
    std::vector<double> phi_int;
    try {
        phi_int = solve_linear(std::move(m), std::move(rhs));
    } catch (const std::runtime_error&) {
        throw std::runtime_error("build_table: refinement matrix has no eigenvalue-1 eigenvector");
    }
    // verify the eigen relation actually holds
    for (int a = 1; a <= interior; ++a) {
        double v = 0.0;
        for (int b = 1; b <= interior; ++b) {
            int idx = 2 * a - b;
            if (idx >= 0 && idx < 2 * n) v += rt2 * filter.coeffs[idx] * phi_int[b - 1];
        }
        if (std::fabs(v - phi_int[a - 1]) > 1e-9)
            throw std::runtime_error("build_table: refinement matrix has no eigenvalue-1 eigenvector");
    }

    for (int k = 1; k <= interior; ++k)
        table.values[static_cast<std::size_t>(k) << depth] = phi_int[k - 1];

    // cascade: fill level p from level p-1 via phi(x) = sqrt(2) sum h_k phi(2x - k)
    for (int p = 1; p <= depth; ++p) {
        long long step = 1LL << (depth - p);
        long long count = static_cast<long long>(support) << p;
        for (long long q = 1; q < count; q += 2) {
            double v = 0.0;
            for (int k = 0; k < 2 * n; ++k) {
                long long src = q * (step * 2) - (static_cast<long long>(k) << depth);
                if (src < 0 || src >= static_cast<long long>(grid)) continue;
                v += filter.coeffs[k] * table.values[static_cast<std::size_t>(src)];
            }
            table.values[static_cast<std::size_t>(q * step)] = rt2 * v;
        }
    }
    return table;
}

double eval_tensor_phi(const ScalingTable& table, int j, std::span<const int> k,
                       std::span<const double> x) {
    if (k.size() != x.size())
        throw std::invalid_argument("eval_tensor_phi: dimension mismatch between k and x");
    double v = 1.0;
    for (std::size_t l = 0; l < k.size(); ++l) {
        v *= eval_phi_jk(table, j, k[l], x[l]);
        if (v == 0.0) return 0.0;
    }
    return v;
}

}  // namespace waveica
