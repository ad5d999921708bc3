#include "waveica/coordinates.hpp"

#include <cmath>

namespace waveica {

void phi_support(const ScalingTable& table, int j, double x, std::vector<PhiAtom>& out) {
    out.clear();
    int n = table.order_n();
    double t = std::ldexp(x, j);
    if (n == 1) {
        long cells = 1L << j;
        long k = static_cast<long>(std::floor(t));
        if (k >= cells) k = cells - 1;  // x == 1.0 goes to the last cell
        if (k < 0) k = 0;
        out.push_back({static_cast<int>(k), std::exp2(0.5 * j)});
        return;
    }
    int hi = static_cast<int>(std::floor(t));
    int lo = hi - (2 * n - 2);
    double scale = std::exp2(0.5 * j);
    for (int k = lo; k <= hi; ++k) {
        double v = table.at(t - k);
        if (v != 0.0) out.push_back({k, scale * v});
    }
}

CoordinateMap::CoordinateMap(WaveletSpec spec, int dim) : spec_(spec), dim_(dim) {
    if (dim < 1) throw std::invalid_argument("CoordinateMap: dim must be >= 1");
    if (dim > 5) throw std::invalid_argument("CoordinateMap: dim > 5 unsupported by packed keys");
    if (spec.level_j > 11)
        throw std::invalid_argument("CoordinateMap: level_j > 11 unsupported by packed keys");
    axis_min_ = 2 - 2 * spec.order_n;
    axis_count_ = (1 << spec.level_j) + 2 * spec.order_n - 2;
}

std::uint64_t CoordinateMap::encode(std::span<const int> k) const {
    if (static_cast<int>(k.size()) != dim_)
        throw std::invalid_argument("CoordinateMap: key dimension mismatch");
    std::uint64_t key = 0;
    for (int l = 0; l < dim_; ++l) {
        long off = static_cast<long>(k[l]) - axis_min_;
        if (off < 0 || off >= axis_count_)
            throw std::invalid_argument("CoordinateMap: k outside axis range");
        key = (key << 12) | static_cast<std::uint64_t>(off);
    }
    return key;
}

void CoordinateMap::decode(std::uint64_t key, std::vector<int>& k) const {
    k.resize(dim_);
    for (int l = dim_ - 1; l >= 0; --l) {
        k[l] = static_cast<int>(key & 0xFFF) + axis_min_;
        key >>= 12;
    }
}

CoordinateMap estimate_alpha(const Sample& sample, WaveletSpec spec, const ScalingTable& table) {
    long n = sample.n();
    if (n < 1) throw std::invalid_argument("estimate_alpha: empty sample");
    int d = sample.dim;
    CoordinateMap map(spec, d);

    if (spec.order_n == 1) {
        // exact histogram path: integer cell counts
        long cells = 1L << spec.level_j;
        std::unordered_map<std::uint64_t, long> counts;
        std::vector<int> k(d);
        for (long i = 0; i < n; ++i) {
            for (int l = 0; l < d; ++l) {
                long c = static_cast<long>(std::floor(std::ldexp(sample.at(i, l), spec.level_j)));
                if (c >= cells) c = cells - 1;
                if (c < 0) c = 0;
                k[l] = static_cast<int>(c);
            }
            counts[map.encode(k)] += 1;
        }
        double scale = std::exp2(0.5 * spec.level_j * d);
        for (const auto& [key, count] : counts) {
            map.decode(key, k);
            map.set(k, scale * (static_cast<double>(count) / static_cast<double>(n)));
        }
        return map;
    }

    std::vector<std::vector<PhiAtom>> atoms(d);
    std::vector<int> k(d);
    std::vector<int> pos(d);
    for (long i = 0; i < n; ++i) {
        bool any = true;
        for (int l = 0; l < d; ++l) {
            phi_support(table, spec.level_j, sample.at(i, l), atoms[l]);
            if (atoms[l].empty()) { any = false; break; }
        }
        if (!any) continue;
        // tensor product over the per-axis supports
        std::fill(pos.begin(), pos.end(), 0);
        while (true) {
            double v = 1.0;
            for (int l = 0; l < d; ++l) {
                const PhiAtom& a = atoms[l][pos[l]];
                k[l] = a.k;
                v *= a.value;
            }
            map.add(k, v);
            int l = d - 1;
            while (l >= 0 && ++pos[l] == static_cast<int>(atoms[l].size())) pos[l--] = 0;
            if (l < 0) break;
        }
    }
    map.divide(static_cast<double>(n));
    return map;
}

CoordinateMap estimate_marginal_alpha(const Sample& sample, int axis, WaveletSpec spec,
                                      const ScalingTable& table) {
    if (axis < 1 || axis > sample.dim)
        throw std::invalid_argument("estimate_marginal_alpha: axis out of range");
    long n = sample.n();
    if (n < 1) throw std::invalid_argument("estimate_marginal_alpha: empty sample");
    Sample slice(1, {});
    slice.data.reserve(n);
    for (long i = 0; i < n; ++i) slice.data.push_back(sample.at(i, axis - 1));
    return estimate_alpha(slice, spec, table);
}

CoordinateMap product_map(const std::vector<CoordinateMap>& marginals) {
    if (marginals.empty()) throw std::invalid_argument("product_map: no marginals");
    const WaveletSpec& spec = marginals.front().spec();
    for (const CoordinateMap& m : marginals) {
        if (m.dim() != 1) throw std::invalid_argument("product_map: marginals must have dim 1");
        if (!(m.spec() == spec)) throw std::invalid_argument("product_map: spec mismatch");
    }
    int d = static_cast<int>(marginals.size());
    CoordinateMap out(spec, d);

    std::vector<std::vector<std::pair<int, double>>> entries(d);
    for (int l = 0; l < d; ++l) {
        std::vector<int> k1;
        for (const auto& [key, v] : marginals[l].raw()) {
            marginals[l].decode(key, k1);
            entries[l].push_back({k1[0], v});
        }
        if (entries[l].empty()) return out;  // all-zero factor: empty product
    }
    std::vector<int> k(d);
    std::vector<int> pos(d, 0);
    while (true) {
        double v = 1.0;
        for (int l = 0; l < d; ++l) {
            k[l] = entries[l][pos[l]].first;
            v *= entries[l][pos[l]].second;
        }
        if (v != 0.0) out.set(k, v);
        int l = d - 1;
        while (l >= 0 && ++pos[l] == static_cast<int>(entries[l].size())) pos[l--] = 0;
        if (l < 0) break;
    }
    return out;
}

}  // namespace waveica
