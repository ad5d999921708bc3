#include "waveica/demix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace waveica {

namespace {

// Cyclic Jacobi eigensolver for a symmetric matrix; returns eigenvectors in
// columns of v and eigenvalues in w.
void jacobi_eigen(Matrix a, std::vector<double>& w, Matrix& v) {
    int n = a.n;
    v = Matrix::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a(p, q)) < 1e-300) continue;
                double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    w.resize(n);
    for (int i = 0; i < n; ++i) w[i] = a(i, i);
}

double full_contrast(const std::vector<double>& rows, long n, int d, WaveletSpec spec,
                     const ScalingTable& table) {
    return c2_plugin(to_unit_cube(rows, n, d), spec, table).value;
}

}  // namespace

Sample to_unit_cube(const std::vector<double>& rows, long n, int d) {
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (long i = 0; i < n; ++i)
        for (int l = 0; l < d; ++l) {
            double v = rows[i * d + l];
            lo[l] = std::min(lo[l], v);
            hi[l] = std::max(hi[l], v);
        }
    Sample out(d, std::vector<double>(rows.size()));
    for (long i = 0; i < n; ++i)
        for (int l = 0; l < d; ++l) {
            double span = hi[l] - lo[l];
            double v = span > 0.0 ? (rows[i * d + l] - lo[l]) / span : 0.5;
            out.data[i * d + l] = std::clamp(v, 0.0, 1.0);
        }
    return out;
}

WhitenResult whiten(const Sample& sample) {
    int d = sample.dim;
    long n = sample.n();
    if (n <= d) throw std::invalid_argument("whiten: need n > d");

    WhitenResult res;
    res.mean.assign(d, 0.0);
    for (long i = 0; i < n; ++i)
        for (int l = 0; l < d; ++l) res.mean[l] += sample.at(i, l);
    for (double& m : res.mean) m /= static_cast<double>(n);

    Matrix cov(d);
    for (long i = 0; i < n; ++i)
        for (int p = 0; p < d; ++p)
            for (int q = p; q < d; ++q)
                cov(p, q) += (sample.at(i, p) - res.mean[p]) * (sample.at(i, q) - res.mean[q]);
    for (int p = 0; p < d; ++p)
        for (int q = p; q < d; ++q) {
            cov(p, q) /= static_cast<double>(n);
            cov(q, p) = cov(p, q);
        }

    std::vector<double> eigval;
    Matrix eigvec;
    jacobi_eigen(cov, eigval, eigvec);
    double max_ev = 0.0;
    for (double w : eigval) max_ev = std::max(max_ev, w);
    for (double w : eigval)
        if (w <= 1e-12 * std::max(max_ev, 1e-300))
            throw std::runtime_error("whiten: singular empirical covariance");

    // ZCA: C^{-1/2} = E diag(1/sqrt(w)) E^T; continuous in C, no spurious rotation
    res.transform = Matrix(d);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            double v = 0.0;
            for (int r = 0; r < d; ++r)
                v += eigvec(p, r) * eigvec(q, r) / std::sqrt(eigval[r]);
            res.transform(p, q) = v;
        }

    res.whitened.assign(static_cast<std::size_t>(n) * d, 0.0);
    for (long i = 0; i < n; ++i)
        for (int p = 0; p < d; ++p) {
            double v = 0.0;
            for (int q = 0; q < d; ++q)
                v += res.transform(p, q) * (sample.at(i, q) - res.mean[q]);
            res.whitened[i * d + p] = v;
        }
    res.unit_cube = to_unit_cube(res.whitened, n, d);
    return res;
}

Profile2D contrast_profile_2d(const Sample& sample, WaveletSpec spec, const ScalingTable& table,
                              int grid_size) {
    if (sample.dim != 2) throw std::invalid_argument("contrast_profile_2d: d must be 2");
    if (grid_size < 1) throw std::invalid_argument("contrast_profile_2d: grid_size must be >= 1");
    WhitenResult wh = whiten(sample);
    long n = sample.n();

    Profile2D out;
    std::vector<double> rotated(wh.whitened.size());
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < grid_size; ++g) {
        double theta = (std::numbers::pi / 2.0) * g / grid_size;
        double c = std::cos(theta), s = std::sin(theta);
        for (long i = 0; i < n; ++i) {
            double x = wh.whitened[i * 2], y = wh.whitened[i * 2 + 1];
            rotated[i * 2] = c * x - s * y;
            rotated[i * 2 + 1] = s * x + c * y;
        }
        double value = full_contrast(rotated, n, 2, spec, table);
        out.profile.push_back({theta, value});
        if (value < best) {  // first index wins ties
            best = value;
            out.theta_star = theta;
        }
    }
    return out;
}

DemixResult jacobi_sweep(const Sample& sample, WaveletSpec spec, const ScalingTable& table,
                         int sweeps, int grid_size) {
    int d = sample.dim;
    if (d < 2) throw std::invalid_argument("jacobi_sweep: d must be >= 2");
    if (grid_size < 1) throw std::invalid_argument("jacobi_sweep: grid_size must be >= 1");
    WhitenResult wh = whiten(sample);
    long n = sample.n();

    DemixResult res;
    res.rotation = Matrix::identity(d);
    res.whiten_transform = wh.transform;
    res.mean = wh.mean;

    std::vector<double> current = wh.whitened;
    double current_contrast = full_contrast(current, n, d, spec, table);
    res.final_contrast = current_contrast;

    std::vector<double> pair_rows(static_cast<std::size_t>(n) * 2);
    std::vector<double> candidate(current.size());

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        bool improved = false;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                // 2-d grid search restricted to the (p, q) plane
                double best_theta = 0.0;
                double best_pair = std::numeric_limits<double>::infinity();
                for (int g = 0; g < grid_size; ++g) {
                    double theta = (std::numbers::pi / 2.0) * g / grid_size;
                    double c = std::cos(theta), s = std::sin(theta);
                    for (long i = 0; i < n; ++i) {
                        double x = current[i * d + p], y = current[i * d + q];
                        pair_rows[i * 2] = c * x - s * y;
                        pair_rows[i * 2 + 1] = s * x + c * y;
                    }
                    double value = full_contrast(pair_rows, n, 2, spec, table);
                    if (value < best_pair) {
                        best_pair = value;
                        best_theta = theta;
                    }
                }
                if (best_theta == 0.0) continue;
                double c = std::cos(best_theta), s = std::sin(best_theta);
                candidate = current;
                for (long i = 0; i < n; ++i) {
                    double x = current[i * d + p], y = current[i * d + q];
                    candidate[i * d + p] = c * x - s * y;
                    candidate[i * d + q] = s * x + c * y;
                }
                double cand_contrast = full_contrast(candidate, n, d, spec, table);
                if (cand_contrast < current_contrast - 1e-12) {
                    current.swap(candidate);
                    current_contrast = cand_contrast;
                    improved = true;
                    Matrix g = Matrix::identity(d);
                    g(p, p) = c; g(p, q) = -s;
                    g(q, p) = s; g(q, q) = c;
                    res.rotation = g * res.rotation;
                    res.trace.push_back({sweep, p, q, best_theta, cand_contrast});
                }
            }
        }
        if (!improved) break;
    }
    res.final_contrast = current_contrast;
    return res;
}

double amari_error(const Matrix& p) {
    int d = p.n;
    for (const double v : p.a)
        if (!std::isfinite(v)) throw std::invalid_argument("amari_error: non-finite entry");
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        double sum = 0.0, maxv = 0.0;
        for (int j = 0; j < d; ++j) {
            sum += std::fabs(p(i, j));
            maxv = std::max(maxv, std::fabs(p(i, j)));
        }
        if (maxv == 0.0) throw std::invalid_argument("amari_error: zero row");
        total += sum / maxv - 1.0;
    }
    for (int j = 0; j < d; ++j) {
        double sum = 0.0, maxv = 0.0;
        for (int i = 0; i < d; ++i) {
            sum += std::fabs(p(i, j));
            maxv = std::max(maxv, std::fabs(p(i, j)));
        }
        if (maxv == 0.0) throw std::invalid_argument("amari_error: zero column");
        total += sum / maxv - 1.0;
    }
    return total / (2.0 * d);
}

}  // namespace waveica
