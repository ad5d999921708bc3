#ifndef WAVEICA_EXPERIMENTS_HPP
#define WAVEICA_EXPERIMENTS_HPP

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "waveica/estimators.hpp"
#include "waveica/sample.hpp"
#include "waveica/wavelet.hpp"

namespace waveica {

enum class SourceKind { Uniform, BimodalMix, Triangular };

SourceKind parse_source(const std::string& name);  // uniform|bimodal|triangular

// Independent per-axis source on [0,1]^d.
struct SourceSpec {
    SourceKind kind = SourceKind::Uniform;
    int dim = 1;
};

// Deterministic, platform-independent stream (splitmix64).
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Per-replicate seed stream: a fixed multiplier of the replicate index mixed
// into the master seed, so replicates can run in any order.
std::uint64_t replicate_seed(std::uint64_t master, int replicate);

// Exact rational exponent for the theoretical convergence-rate table.
struct Rational {
    long long num = 0;
    long long den = 1;
    Rational() = default;
    Rational(long long n, long long d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};
Rational operator+(Rational a, Rational b);
Rational operator*(Rational a, Rational b);
Rational operator/(Rational a, Rational b);
Rational operator-(Rational a);

enum class Regime { SmallJ, LargeJ };

struct inoperable_regime_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Rate exponents at the optimal resolution: MSE = O(n^exponent).
// C2 in the large-j regime has no operable bound and throws.
Rational theoretical_rate(EstimatorTag tag, Rational s, int d, Regime regime);

struct GeneratedSample {
    Sample sample;
    std::vector<std::pair<double, double>> box;  // recorded affine remap, per axis
};

// Draws n iid source rows, mixes by A, and remaps affinely into [0,1]^d.
// The remap uses lo = min(0, min x) and hi = max(1, max x) per axis, so it is
// the identity whenever the mixed data already lies in the cube.
GeneratedSample generate_mixed(const SourceSpec& source, const Matrix& a, long n,
                               std::uint64_t seed);

// One estimate per replicate, with per-replicate derived seeds. DELTA2 and G2
// use R = first floor(n/(d+1)) rows and S = the product sample built from the
// remaining rows, truncated to the same size; F2 uses split_d_plus_1.
std::vector<double> replicate_estimates(EstimatorTag tag, const SourceSpec& source,
                                        const Matrix& a, WaveletSpec spec,
                                        const ScalingTable& table, long n, int replicates,
                                        std::uint64_t seed);

struct MseResult {
    double mse;
    double stderr_;
};

MseResult monte_carlo_mse(EstimatorTag tag, const SourceSpec& source, const Matrix& a,
                          WaveletSpec spec, const ScalingTable& table, long n, int replicates,
                          std::uint64_t seed, double target);

struct SlopeFit {
    double slope;
    double stderr_;
};

// OLS slope of log(MSE) against log(n); needs >= 3 points, all MSE > 0.
SlopeFit rate_slope(std::span<const double> ns, std::span<const double> mses);

}  // namespace waveica

#endif
