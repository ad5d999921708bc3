#ifndef WAVEICA_ESTIMATORS_HPP
#define WAVEICA_ESTIMATORS_HPP

#include <string>
#include <utility>
#include <vector>

#include "waveica/coordinates.hpp"
#include "waveica/sample.hpp"
#include "waveica/wavelet.hpp"

namespace waveica {

enum class EstimatorTag { C2, B2, D2_BRUTE, D2_FAST, F2, G2, DELTA2 };

const char* estimator_name(EstimatorTag tag);
EstimatorTag parse_estimator(const std::string& name);  // c2|b2|d2|d2-brute|f2|g2|delta2

struct ContrastEstimate {
    EstimatorTag estimator;
    double value;
    WaveletSpec spec;
    long n_used;
    int d;
};

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plug-in contrast sum_k (alpha_jk - lambda_jk)^2, all maps from the full sample.
ContrastEstimate c2_plugin(const Sample& sample, WaveletSpec spec, const ScalingTable& table);

// U-statistic estimator of sum_k alpha_jk^2, one pass over per-k totals.
ContrastEstimate b2_ustat(const Sample& sample, WaveletSpec spec, const ScalingTable& table);

struct D2Options {
    // refuses when A_n^{2d+2} exceeds this (default admits n = 12 at d = 2)
    double tuple_budget = 1.0e6;
};

// Exact enumeration over ordered distinct (2d+2)-tuples; the oracle for d2_fast.
ContrastEstimate d2_brute(const Sample& sample, WaveletSpec spec, const ScalingTable& table,
                          const D2Options& options = {});

// Same statistic via the set-partition Mobius expansion, O(n (2N-1)^d Bell(2d+2)).
ContrastEstimate d2_fast(const Sample& sample, WaveletSpec spec, const ScalingTable& table);

// d+1 disjoint contiguous blocks: block 0 keeps full rows, block l keeps axis l.
struct SplitScheme {
    std::pair<long, long> joint_block;                    // [begin, end) row range
    std::vector<std::pair<long, long>> marginal_blocks;   // one per axis
};

SplitScheme split_d_plus_1(const Sample& sample);

// F2 = B2(R0) + prod_l B2(R^l) - 2 sum_k alpha(R0) prod_l alpha_l(R^l)
ContrastEstimate f2_mixed(const Sample& sample, const SplitScheme& scheme, WaveletSpec spec,
                          const ScalingTable& table);

// Independent product-density sample: row m = (X_{(m-1)d+1}^1, ..., X_{md}^d).
Sample build_product_sample(const Sample& sample);

// G2 = B2(R) + B2(S) - 2 sum_k alpha(R) alpha(S)
ContrastEstimate g2_mixed(const Sample& sample_r, const Sample& sample_s, WaveletSpec spec,
                          const ScalingTable& table);

// Two-sample U-statistic over paired differences Phi_jk(R_i) - Phi_jk(S_i).
ContrastEstimate delta2_ustat(const Sample& sample_r, const Sample& sample_s, WaveletSpec spec,
                              const ScalingTable& table);

// True when 2^{jd} >= n^2, where the paper's bounds stop converging.
bool outside_operating_regime(WaveletSpec spec, int d, long n);

}  // namespace waveica

#endif
