#include "waveica/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <unordered_map>

#include "waveica/combinatorics.hpp"

namespace waveica {

const char* estimator_name(EstimatorTag tag) {
    switch (tag) {
        case EstimatorTag::C2: return "c2";
        case EstimatorTag::B2: return "b2";
        case EstimatorTag::D2_BRUTE: return "d2-brute";
        case EstimatorTag::D2_FAST: return "d2";
        case EstimatorTag::F2: return "f2";
        case EstimatorTag::G2: return "g2";
        case EstimatorTag::DELTA2: return "delta2";
    }
    return "?";
}

EstimatorTag parse_estimator(const std::string& name) {
    if (name == "c2") return EstimatorTag::C2;
    if (name == "b2") return EstimatorTag::B2;
    if (name == "d2") return EstimatorTag::D2_FAST;
    if (name == "d2-brute") return EstimatorTag::D2_BRUTE;
    if (name == "f2") return EstimatorTag::F2;
    if (name == "g2") return EstimatorTag::G2;
    if (name == "delta2") return EstimatorTag::DELTA2;
    throw std::invalid_argument("unknown estimator: " + name);
}

bool outside_operating_regime(WaveletSpec spec, int d, long n) {
    return std::exp2(static_cast<double>(spec.level_j) * d) >=
           static_cast<double>(n) * static_cast<double>(n);
}

namespace {

// Per-observation dense evaluations over the k box, used by the U-statistics.
struct DenseEval {
    int d = 0;
    int axis_len = 0;     // 2^j + 2N - 2
    int axis_min = 0;     // 2 - 2N
    long box = 0;         // axis_len^d
    long n = 0;
    std::vector<double> joint;              // n * box, Phi_jk(X_i)
    std::vector<std::vector<double>> axes;  // d arrays of n * axis_len, phi_{jk^l}(X_i^l)
    std::vector<int> axidx;                 // box * d, flat k -> per-axis offsets
};

DenseEval dense_eval(const Sample& sample, WaveletSpec spec, const ScalingTable& table) {
    DenseEval e;
    e.d = sample.dim;
    e.axis_min = 2 - 2 * spec.order_n;
    e.axis_len = (1 << spec.level_j) + 2 * spec.order_n - 2;
    e.n = sample.n();
    e.box = 1;
    for (int l = 0; l < e.d; ++l) e.box *= e.axis_len;
    e.joint.assign(static_cast<std::size_t>(e.n) * e.box, 0.0);
    e.axes.assign(e.d, std::vector<double>(static_cast<std::size_t>(e.n) * e.axis_len, 0.0));
    e.axidx.assign(static_cast<std::size_t>(e.box) * e.d, 0);
    for (long k = 0; k < e.box; ++k) {
        long rem = k;
        for (int l = e.d - 1; l >= 0; --l) {
            e.axidx[static_cast<std::size_t>(k) * e.d + l] = static_cast<int>(rem % e.axis_len);
            rem /= e.axis_len;
        }
    }
    std::vector<PhiAtom> atoms;
    for (long i = 0; i < e.n; ++i) {
        for (int l = 0; l < e.d; ++l) {
            phi_support(table, spec.level_j, sample.at(i, l), atoms);
            for (const PhiAtom& a : atoms) {
                int off = a.k - e.axis_min;
                if (off >= 0 && off < e.axis_len)
                    e.axes[l][static_cast<std::size_t>(i) * e.axis_len + off] = a.value;
            }
        }
        for (long k = 0; k < e.box; ++k) {
            double v = 1.0;
            for (int l = 0; l < e.d; ++l) {
                v *= e.axes[l][static_cast<std::size_t>(i) * e.axis_len +
                               e.axidx[static_cast<std::size_t>(k) * e.d + l]];
                if (v == 0.0) break;
            }
            if (v != 0.0) e.joint[static_cast<std::size_t>(i) * e.box + k] = v;
        }
    }
    return e;
}

double falling_factorial_d(long n, int p) {
    double v = 1.0;
    for (int i = 0; i < p; ++i) v *= static_cast<double>(n - i);
    return v;
}

// Accumulates per-k sums S and sums of squares Q of tensor evaluations.
void accumulate_totals(const Sample& sample, WaveletSpec spec, const ScalingTable& table,
                       CoordinateMap& sums, CoordinateMap& squares) {
    int d = sample.dim;
    long n = sample.n();
    std::vector<std::vector<PhiAtom>> atoms(d);
    std::vector<int> k(d), pos(d);
    for (long i = 0; i < n; ++i) {
        bool any = true;
        for (int l = 0; l < d; ++l) {
            phi_support(table, spec.level_j, sample.at(i, l), atoms[l]);
            if (atoms[l].empty()) { any = false; break; }
        }
        if (!any) continue;
        std::fill(pos.begin(), pos.end(), 0);
        while (true) {
            double v = 1.0;
            for (int l = 0; l < d; ++l) {
                k[l] = atoms[l][pos[l]].k;
                v *= atoms[l][pos[l]].value;
            }
            if (v != 0.0) {
                sums.add(k, v);
                squares.add(k, v * v);
            }
            int l = d - 1;
            while (l >= 0 && ++pos[l] == static_cast<int>(atoms[l].size())) pos[l--] = 0;
            if (l < 0) break;
        }
    }
}

double pair_ustat_value(const CoordinateMap& sums, const CoordinateMap& squares, long n) {
    double total = 0.0;
    for (const auto& [key, s] : sums.raw()) {
        auto it = squares.raw().find(key);
        double q = it == squares.raw().end() ? 0.0 : it->second;
        total += s * s - q;
    }
    return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace

ContrastEstimate c2_plugin(const Sample& sample, WaveletSpec spec, const ScalingTable& table) {
    long n = sample.n();
    if (n < 1) throw std::invalid_argument("c2_plugin: empty sample");
    sample.validate_unit_cube();
    int d = sample.dim;
    CoordinateMap alpha = estimate_alpha(sample, spec, table);
    std::vector<CoordinateMap> marginals;
    marginals.reserve(d);
    for (int l = 1; l <= d; ++l)
        marginals.push_back(estimate_marginal_alpha(sample, l, spec, table));
    CoordinateMap lambda = product_map(marginals);

    double value = 0.0;
    for (const auto& [key, a] : alpha.raw()) {
        auto it = lambda.raw().find(key);
        double lam = it == lambda.raw().end() ? 0.0 : it->second;
        double diff = a - lam;
        value += diff * diff;
    }
    for (const auto& [key, lam] : lambda.raw()) {
        if (alpha.raw().find(key) == alpha.raw().end()) value += lam * lam;
    }
    return {EstimatorTag::C2, value, spec, n, d};
}

ContrastEstimate b2_ustat(const Sample& sample, WaveletSpec spec, const ScalingTable& table) {
    long n = sample.n();
    if (n < 2) throw std::invalid_argument("b2_ustat: need n >= 2");
    sample.validate_unit_cube();
    CoordinateMap sums(spec, sample.dim), squares(spec, sample.dim);
    accumulate_totals(sample, spec, table, sums, squares);
    return {EstimatorTag::B2, pair_ustat_value(sums, squares, n), spec, n, sample.dim};
}

ContrastEstimate d2_brute(const Sample& sample, WaveletSpec spec, const ScalingTable& table,
                          const D2Options& options) {
    int d = sample.dim;
    long n = sample.n();
    int m = 2 * d + 2;
    if (n < m) throw std::invalid_argument("d2_brute: need n >= 2d+2");
    sample.validate_unit_cube();
    double tuples = falling_factorial_d(n, m);
    if (tuples > options.tuple_budget)
        throw budget_error("d2_brute: A_n^{2d+2} exceeds the tuple budget");

    DenseEval e = dense_eval(sample, spec, table);
    std::vector<long> slot(m);
    std::vector<bool> used(n, false);
    double total = 0.0;

    auto kernel = [&]() {
        double sum = 0.0;
        const double* j1 = &e.joint[static_cast<std::size_t>(slot[0]) * e.box];
        const double* j2 = &e.joint[static_cast<std::size_t>(slot[d + 1]) * e.box];
        for (long k = 0; k < e.box; ++k) {
            const int* ax = &e.axidx[static_cast<std::size_t>(k) * e.d];
            double p1 = 1.0, p2 = 1.0;
            for (int l = 0; l < d; ++l) {
                p1 *= e.axes[l][static_cast<std::size_t>(slot[1 + l]) * e.axis_len + ax[l]];
                p2 *= e.axes[l][static_cast<std::size_t>(slot[d + 2 + l]) * e.axis_len + ax[l]];
            }
            sum += (j1[k] - p1) * (j2[k] - p2);
        }
        return sum;
    };

    auto recurse = [&](auto&& self, int depth) -> void {
        if (depth == m) {
            total += kernel();
            return;
        }
        for (long i = 0; i < n; ++i) {
            if (used[i]) continue;
            used[i] = true;
            slot[depth] = i;
            self(self, depth + 1);
            used[i] = false;
        }
    };
    recurse(recurse, 0);
    return {EstimatorTag::D2_BRUTE, total / tuples, spec, n, d};
}

namespace {

// Signature of a forced-equal block: a = joint-slot multiplicity,
// b[l] = marginal-slot multiplicity on axis l. Uninvolved slots drop out.
struct BlockFactor {
    std::vector<int> involved_axes;  // empty means constant factor n
    std::vector<long> strides;       // per involved axis, into values
    std::vector<double> values;
};

int signature_key(int a, const std::vector<int>& b) {
    int key = a;
    for (int v : b) key = key * 4 + v;
    return key;
}

// F[k] = sum_i Phi_i[k]^a prod_l phi_i^l[k^l]^{b_l}, stored over the sub-box
// of axes the block actually touches.
BlockFactor build_factor(const DenseEval& e, int a, const std::vector<int>& b) {
    BlockFactor f;
    for (int l = 0; l < e.d; ++l)
        if (a > 0 || b[l] > 0) f.involved_axes.push_back(l);
    long sub = 1;
    f.strides.assign(f.involved_axes.size(), 0);
    for (int idx = static_cast<int>(f.involved_axes.size()) - 1; idx >= 0; --idx) {
        f.strides[idx] = sub;
        sub *= e.axis_len;
    }
    f.values.assign(sub, 0.0);

    int ninv = static_cast<int>(f.involved_axes.size());
    std::vector<int> pos(ninv);
    std::vector<std::pair<int, int>> ranges(ninv);  // nonzero offset ranges per axis
    for (long i = 0; i < e.n; ++i) {
        // nonzero window per involved axis for this observation
        bool empty = false;
        for (int idx = 0; idx < ninv; ++idx) {
            int l = f.involved_axes[idx];
            const double* row = &e.axes[l][static_cast<std::size_t>(i) * e.axis_len];
            int lo = 0, hi = e.axis_len - 1;
            while (lo <= hi && row[lo] == 0.0) ++lo;
            while (hi >= lo && row[hi] == 0.0) --hi;
            if (lo > hi) { empty = true; break; }
            ranges[idx] = {lo, hi};
            pos[idx] = lo;
        }
        if (empty) continue;
        while (true) {
            long sub_idx = 0;
            for (int idx = 0; idx < ninv; ++idx) sub_idx += pos[idx] * f.strides[idx];
            double v = 1.0;
            if (a > 0) {
                long flat = 0;
                // involved axes cover all axes when a > 0
                for (int idx = 0; idx < ninv; ++idx)
                    flat = flat * e.axis_len + pos[idx];
                double jv = e.joint[static_cast<std::size_t>(i) * e.box + flat];
                if (jv == 0.0) v = 0.0;
                for (int r = 0; r < a && v != 0.0; ++r) v *= jv;
            }
            if (v != 0.0) {
                for (int idx = 0; idx < ninv && v != 0.0; ++idx) {
                    int l = f.involved_axes[idx];
                    double mv = e.axes[l][static_cast<std::size_t>(i) * e.axis_len + pos[idx]];
                    for (int r = 0; r < b[l]; ++r) v *= mv;
                }
                if (v != 0.0) f.values[sub_idx] += v;
            }
            int idx = ninv - 1;
            while (idx >= 0) {
                if (++pos[idx] <= ranges[idx].second) break;
                pos[idx] = ranges[idx].first;
                --idx;
            }
            if (idx < 0) break;
        }
    }
    return f;
}

}  // namespace

ContrastEstimate d2_fast(const Sample& sample, WaveletSpec spec, const ScalingTable& table) {
    int d = sample.dim;
    long n = sample.n();
    int m = 2 * d + 2;
    if (n < m) throw std::invalid_argument("d2_fast: need n >= 2d+2");
    if (d > 3) throw std::invalid_argument("d2_fast: d > 3 unsupported (Bell(2d+2) expansion)");
    sample.validate_unit_cube();

    DenseEval e = dense_eval(sample, spec, table);
    std::vector<SetPartition> partitions = set_partitions(m);

    // slot roles per expansion term: -1 none, -2 joint, l >= 0 marginal axis l
    constexpr int kNone = -1, kJoint = -2;
    std::vector<std::vector<int>> roles(4, std::vector<int>(m, kNone));
    roles[0][0] = kJoint; roles[0][d + 1] = kJoint;                       // +Phi Phi
    roles[1][0] = kJoint;                                                  // -Phi prod
    for (int l = 0; l < d; ++l) roles[1][d + 2 + l] = l;
    roles[2][d + 1] = kJoint;                                              // -prod Phi
    for (int l = 0; l < d; ++l) roles[2][1 + l] = l;
    for (int l = 0; l < d; ++l) { roles[3][1 + l] = l; roles[3][d + 2 + l] = l; }  // +prod prod
    const double signs[4] = {1.0, -1.0, -1.0, 1.0};

    std::unordered_map<int, BlockFactor> cache;
    std::vector<int> b(d);

    double total = 0.0;
    for (int t = 0; t < 4; ++t) {
        double term = 0.0;
        for (const SetPartition& p : partitions) {
            double constant = static_cast<double>(p.mobius_weight);
            std::vector<const BlockFactor*> factors;
            for (const auto& block : p.blocks) {
                int a = 0;
                std::fill(b.begin(), b.end(), 0);
                for (int slot : block) {
                    int role = roles[t][slot];
                    if (role == kJoint) ++a;
                    else if (role >= 0) ++b[role];
                }
                bool involved = a > 0;
                for (int v : b) involved = involved || v > 0;
                if (!involved) {
                    constant *= static_cast<double>(n);
                    continue;
                }
                int key = signature_key(a, b);
                auto it = cache.find(key);
                if (it == cache.end()) it = cache.emplace(key, build_factor(e, a, b)).first;
                factors.push_back(&it->second);
            }
            double ksum = 0.0;
            for (long k = 0; k < e.box; ++k) {
                const int* ax = &e.axidx[static_cast<std::size_t>(k) * e.d];
                double v = 1.0;
                for (const BlockFactor* f : factors) {
                    long idx = 0;
                    for (std::size_t r = 0; r < f->involved_axes.size(); ++r)
                        idx += ax[f->involved_axes[r]] * f->strides[r];
                    v *= f->values[idx];
                    if (v == 0.0) break;
                }
                ksum += v;
            }
            term += constant * ksum;
        }
        total += signs[t] * term;
    }
    double norm = falling_factorial_d(n, m);
    return {EstimatorTag::D2_FAST, total / norm, spec, n, d};
}

SplitScheme split_d_plus_1(const Sample& sample) {
    int d = sample.dim;
    long n = sample.n();
    if (n < 2 * (d + 1))
        throw std::invalid_argument("split_d_plus_1: need n >= 2(d+1)");
    long block = n / (d + 1);
    SplitScheme scheme;
    scheme.joint_block = {0, block};
    for (int l = 0; l < d; ++l)
        scheme.marginal_blocks.push_back({block * (l + 1), block * (l + 2)});
    return scheme;
}

namespace {

Sample rows_slice(const Sample& sample, long begin, long end) {
    Sample out(sample.dim, {});
    out.data.assign(sample.data.begin() + begin * sample.dim,
                    sample.data.begin() + end * sample.dim);
    return out;
}

Sample axis_slice(const Sample& sample, int axis, long begin, long end) {
    Sample out(1, {});
    out.data.reserve(end - begin);
    for (long i = begin; i < end; ++i) out.data.push_back(sample.at(i, axis));
    return out;
}

}  // namespace

ContrastEstimate f2_mixed(const Sample& sample, const SplitScheme& scheme, WaveletSpec spec,
                          const ScalingTable& table) {
    int d = sample.dim;
    long n = sample.n();
    auto check_block = [&](std::pair<long, long> b) {
        if (b.first < 0 || b.second > n || b.second - b.first < 2)
            throw std::invalid_argument("f2_mixed: block with fewer than 2 rows");
    };
    check_block(scheme.joint_block);
    if (static_cast<int>(scheme.marginal_blocks.size()) != d)
        throw std::invalid_argument("f2_mixed: scheme has wrong number of marginal blocks");
    for (auto b : scheme.marginal_blocks) check_block(b);

    Sample joint = rows_slice(sample, scheme.joint_block.first, scheme.joint_block.second);
    double value = b2_ustat(joint, spec, table).value;

    double prod = 1.0;
    std::vector<CoordinateMap> marg_alpha;
    for (int l = 0; l < d; ++l) {
        Sample block = axis_slice(sample, l, scheme.marginal_blocks[l].first,
                                  scheme.marginal_blocks[l].second);
        prod *= b2_ustat(block, spec, table).value;
        marg_alpha.push_back(estimate_alpha(block, spec, table));
    }
    value += prod;

    CoordinateMap alpha0 = estimate_alpha(joint, spec, table);
    double cross = 0.0;
    std::vector<int> k;
    for (const auto& [key, a] : alpha0.raw()) {
        alpha0.decode(key, k);
        double v = a;
        for (int l = 0; l < d && v != 0.0; ++l)
            v *= marg_alpha[l].get(std::span<const int>(&k[l], 1));
        cross += v;
    }
    value -= 2.0 * cross;
    return {EstimatorTag::F2, value, spec, n, d};
}

Sample build_product_sample(const Sample& sample) {
    int d = sample.dim;
    long n = sample.n();
    if (n < d) throw std::invalid_argument("build_product_sample: need n >= d");
    long rows = n / d;
    Sample out(d, {});
    out.data.reserve(rows * d);
    for (long r = 0; r < rows; ++r)
        for (int l = 0; l < d; ++l) out.data.push_back(sample.at(r * d + l, l));
    return out;
}

ContrastEstimate g2_mixed(const Sample& sample_r, const Sample& sample_s, WaveletSpec spec,
                          const ScalingTable& table) {
    if (sample_r.dim != sample_s.dim)
        throw std::invalid_argument("g2_mixed: dimension mismatch");
    if (sample_r.n() < 2 || sample_s.n() < 2)
        throw std::invalid_argument("g2_mixed: need n >= 2 on both samples");
    double value = b2_ustat(sample_r, spec, table).value + b2_ustat(sample_s, spec, table).value;
    CoordinateMap ar = estimate_alpha(sample_r, spec, table);
    CoordinateMap as = estimate_alpha(sample_s, spec, table);
    double cross = 0.0;
    for (const auto& [key, v] : ar.raw()) {
        auto it = as.raw().find(key);
        if (it != as.raw().end()) cross += v * it->second;
    }
    value -= 2.0 * cross;
    return {EstimatorTag::G2, value, spec, sample_r.n() + sample_s.n(), sample_r.dim};
}

ContrastEstimate delta2_ustat(const Sample& sample_r, const Sample& sample_s, WaveletSpec spec,
                              const ScalingTable& table) {
    if (sample_r.dim != sample_s.dim)
        throw std::invalid_argument("delta2_ustat: dimension mismatch");
    long n = sample_r.n();
    if (n != sample_s.n()) throw std::invalid_argument("delta2_ustat: samples must have equal size");
    if (n < 2) throw std::invalid_argument("delta2_ustat: need n >= 2");
    sample_r.validate_unit_cube();
    sample_s.validate_unit_cube();
    int d = sample_r.dim;

    CoordinateMap sums(spec, d), squares(spec, d);
    std::vector<std::vector<PhiAtom>> atoms(d);
    std::vector<int> k(d), pos(d);
    std::unordered_map<std::uint64_t, double> local;

    auto gather = [&](const Sample& s, long i, double sign) {
        bool any = true;
        for (int l = 0; l < d; ++l) {
            phi_support(table, spec.level_j, s.at(i, l), atoms[l]);
            if (atoms[l].empty()) { any = false; break; }
        }
        if (!any) return;
        std::fill(pos.begin(), pos.end(), 0);
        while (true) {
            double v = 1.0;
            for (int l = 0; l < d; ++l) {
                k[l] = atoms[l][pos[l]].k;
                v *= atoms[l][pos[l]].value;
            }
            if (v != 0.0) local[sums.encode(k)] += sign * v;
            int l = d - 1;
            while (l >= 0 && ++pos[l] == static_cast<int>(atoms[l].size())) pos[l--] = 0;
            if (l < 0) break;
        }
    };

    for (long i = 0; i < n; ++i) {
        local.clear();
        gather(sample_r, i, 1.0);
        gather(sample_s, i, -1.0);
        for (const auto& [key, y] : local) {
            if (y == 0.0) continue;
            std::vector<int> kk;
            sums.decode(key, kk);
            sums.add(kk, y);
            squares.add(kk, y * y);
        }
    }
    return {EstimatorTag::DELTA2, pair_ustat_value(sums, squares, n), spec, n, d};
}

}  // namespace waveica
