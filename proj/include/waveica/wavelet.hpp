#ifndef WAVEICA_WAVELET_HPP
#define WAVEICA_WAVELET_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace waveica {

constexpr int kMaxDaubechiesOrder = 8;
constexpr int kDefaultTableDepth = 12;

// Resolution parameters: Daubechies order N and dyadic level j.
struct WaveletSpec {
    int order_n = 1;
    int level_j = 0;

    WaveletSpec() = default;
    WaveletSpec(int n, int j) : order_n(n), level_j(j) {
        if (n < 1) throw std::invalid_argument("WaveletSpec: order_N must be >= 1");
        if (j < 0) throw std::invalid_argument("WaveletSpec: level_j must be >= 0");
    }

    bool operator==(const WaveletSpec&) const = default;
};

// Low-pass filter of the Daubechies D2N wavelet, 2N taps.
struct DaubechiesFilter {
    int order_n = 0;
    std::vector<double> coeffs;
};

// make_filter derives the coefficients from the constraint system
// (sum = sqrt(2), orthonormality of even shifts, N vanishing moments)
// by spectral factorization followed by a Gauss-Newton polish.
DaubechiesFilter make_filter(int order_n);

// Tabulated scaling function phi on the dyadic grid x = m * 2^-depth
// over the support [0, 2N-1].
struct ScalingTable {
    DaubechiesFilter filter;
    int depth = 0;
    std::vector<double> values;  // index m, x = m * 2^-depth, m = 0..(2N-1)<<depth

    int order_n() const { return filter.order_n; }

    // phi(u), argument snapped to the nearest grid point; 0 outside [0, 2N-1].
    double at(double u) const {
        double scaled = std::ldexp(u, depth);
        long long m = std::llround(scaled);
        if (m < 0 || m >= static_cast<long long>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(m)];
    }
};

ScalingTable build_table(const DaubechiesFilter& filter, int depth);

// phi_jk(x) = 2^{j/2} phi(2^j x - k). Haar is evaluated analytically as the
// indicator of [0,1), bypassing the table.
inline double eval_phi_jk(const ScalingTable& table, int j, int k, double x) {
    double u = std::ldexp(x, j) - k;
    double scale = std::exp2(0.5 * j);
    if (table.order_n() == 1) return (u >= 0.0 && u < 1.0) ? scale : 0.0;
    return scale * table.at(u);
}

// Tensor factor Phi_jk(x) = prod_l phi_{j k^l}(x^l).
double eval_tensor_phi(const ScalingTable& table, int j, std::span<const int> k,
                       std::span<const double> x);

}  // namespace waveica

#endif
