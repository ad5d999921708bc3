#ifndef WAVEICA_COORDINATES_HPP
#define WAVEICA_COORDINATES_HPP

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "waveica/sample.hpp"
#include "waveica/wavelet.hpp"

namespace waveica {

// One nonzero factor phi_jk(x) of a tensor evaluation.
struct PhiAtom {
    int k;
    double value;
};

// Appends the <= 2N-1 translates whose support contains x, with their values.
// For Haar an observation at exactly 1.0 is assigned to the last cell.
void phi_support(const ScalingTable& table, int j, double x, std::vector<PhiAtom>& out);

// Sparse map k in Z^dim -> coefficient. Keys are packed into 64 bits
// (12 bits per axis), which bounds dim <= 5 and level_j <= 11.
class CoordinateMap {
  public:
    CoordinateMap(WaveletSpec spec, int dim);

    const WaveletSpec& spec() const { return spec_; }
    int dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }

    int axis_min() const { return axis_min_; }    // 2 - 2N
    int axis_count() const { return axis_count_; }  // 2^j + 2N - 2

    void add(std::span<const int> k, double v) { entries_[encode(k)] += v; }
    void set(std::span<const int> k, double v) { entries_[encode(k)] = v; }
    double get(std::span<const int> k) const {
        auto it = entries_.find(encode(k));
        return it == entries_.end() ? 0.0 : it->second;
    }
    void scale(double factor) {
        for (auto& [key, v] : entries_) v *= factor;
    }
    void divide(double divisor) {
        for (auto& [key, v] : entries_) v /= divisor;
    }

    template <typename F>
    void for_each(F&& fn) const {  // fn(std::span<const int> k, double v)
        std::vector<int> k(dim_);
        for (const auto& [key, v] : entries_) {
            decode(key, k);
            fn(std::span<const int>(k), v);
        }
    }

    // Packed access for estimator internals.
    const std::unordered_map<std::uint64_t, double>& raw() const { return entries_; }
    std::uint64_t encode(std::span<const int> k) const;
    void decode(std::uint64_t key, std::vector<int>& k) const;

  private:
    WaveletSpec spec_;
    int dim_;
    int axis_min_;
    int axis_count_;
    std::unordered_map<std::uint64_t, double> entries_;
};

// alpha_jk = (1/n) sum_i Phi_jk(X_i). Haar uses exact integer cell counts.
CoordinateMap estimate_alpha(const Sample& sample, WaveletSpec spec, const ScalingTable& table);

// alpha_{jk^l} for one axis (1-based), a 1-dimensional map.
CoordinateMap estimate_marginal_alpha(const Sample& sample, int axis, WaveletSpec spec,
                                      const ScalingTable& table);

// lambda_jk = prod_l marginal_l(k^l) over the cross product of nonzero entries.
CoordinateMap product_map(const std::vector<CoordinateMap>& marginals);

}  // namespace waveica

#endif
