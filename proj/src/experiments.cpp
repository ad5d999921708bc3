#include "waveica/experiments.hpp"

#include <cmath>

namespace waveica {

SourceKind parse_source(const std::string& name) {
    if (name == "uniform") return SourceKind::Uniform;
    if (name == "bimodal") return SourceKind::BimodalMix;
    if (name == "triangular") return SourceKind::Triangular;
    throw std::invalid_argument("unknown source: " + name);
}

std::uint64_t replicate_seed(std::uint64_t master, int replicate) {
    Rng rng(master ^ (0xD1342543DE82EF95ULL * static_cast<std::uint64_t>(replicate + 1)));
    return rng.next();
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
    return {a.num * b.den, a.den * b.num};
}
Rational operator-(Rational a) { return {-a.num, a.den}; }

Rational theoretical_rate(EstimatorTag tag, Rational s, int d, Regime regime) {
    if (s.num <= 0) throw std::invalid_argument("theoretical_rate: s must be > 0");
    if (d < 1) throw std::invalid_argument("theoretical_rate: d must be >= 1");
    Rational four_s = Rational(4, 1) * s;
    Rational dd(d, 1);
    if (regime == Regime::SmallJ) {
        switch (tag) {
            case EstimatorTag::C2:
                return -(four_s / (four_s + dd));
            case EstimatorTag::D2_FAST:
            case EstimatorTag::D2_BRUTE:
                return Rational(-1, 1) + Rational(1, 1) / (Rational(1, 1) + four_s);
            case EstimatorTag::DELTA2:
            case EstimatorTag::G2:
            case EstimatorTag::F2:
                return Rational(-1, 1);  // parametric
            default:
                throw std::invalid_argument("theoretical_rate: no table entry for estimator");
        }
    }
    if (tag == EstimatorTag::C2)
        throw inoperable_regime_error("theoretical_rate: C2 bound is inoperable for 2^{jd} >= n");
    switch (tag) {
        case EstimatorTag::D2_FAST:
        case EstimatorTag::D2_BRUTE:
        case EstimatorTag::DELTA2:
        case EstimatorTag::G2:
        case EstimatorTag::F2:
            return -(Rational(8, 1) * s / (four_s + dd));
        default:
            throw std::invalid_argument("theoretical_rate: no table entry for estimator");
    }
}

namespace {

double draw_source(SourceKind kind, Rng& rng) {
    double u = rng.uniform();
    switch (kind) {
        case SourceKind::Uniform:
            return u;
        case SourceKind::BimodalMix: {
            // equal-weight mixture of uniforms on [0, 0.4] and [0.6, 1]
            double v = rng.uniform();
            return (u < 0.5) ? 0.4 * v : 0.6 + 0.4 * v;
        }
        case SourceKind::Triangular:
            // symmetric triangular with peak at 0.5
            return (u < 0.5) ? std::sqrt(u / 2.0) : 1.0 - std::sqrt((1.0 - u) / 2.0);
    }
    return u;
}

}  // namespace

GeneratedSample generate_mixed(const SourceSpec& source, const Matrix& a, long n,
                               std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_mixed: n must be >= 1");
    int d = source.dim;
    if (a.n != d) throw std::invalid_argument("generate_mixed: matrix dimension mismatch");
    if (std::fabs(lu_determinant(a)) <= 1e-10)
        throw std::invalid_argument("generate_mixed: singular mixing matrix");

    Rng rng(seed);
    std::vector<double> mixed(static_cast<std::size_t>(n) * d);
    std::vector<double> row(d);
    for (long i = 0; i < n; ++i) {
        for (int l = 0; l < d; ++l) row[l] = draw_source(source.kind, rng);
        for (int p = 0; p < d; ++p) {
            double v = 0.0;
            for (int q = 0; q < d; ++q) v += a(p, q) * row[q];
            mixed[i * d + p] = v;
        }
    }

    GeneratedSample out;
    out.box.assign(d, {0.0, 1.0});
    for (long i = 0; i < n; ++i)
        for (int l = 0; l < d; ++l) {
            out.box[l].first = std::min(out.box[l].first, mixed[i * d + l]);
            out.box[l].second = std::max(out.box[l].second, mixed[i * d + l]);
        }
    out.sample = Sample(d, std::move(mixed));
    for (long i = 0; i < n; ++i)
        for (int l = 0; l < d; ++l) {
            auto [lo, hi] = out.box[l];
            if (lo != 0.0 || hi != 1.0)
                out.sample.at(i, l) = (out.sample.at(i, l) - lo) / (hi - lo);
        }
    return out;
}

namespace {

double single_estimate(EstimatorTag tag, const Sample& sample, WaveletSpec spec,
                       const ScalingTable& table) {
    switch (tag) {
        case EstimatorTag::C2:
            return c2_plugin(sample, spec, table).value;
        case EstimatorTag::B2:
            return b2_ustat(sample, spec, table).value;
        case EstimatorTag::D2_BRUTE:
            return d2_brute(sample, spec, table).value;
        case EstimatorTag::D2_FAST:
            return d2_fast(sample, spec, table).value;
        case EstimatorTag::F2:
            return f2_mixed(sample, split_d_plus_1(sample), spec, table).value;
        case EstimatorTag::G2:
        case EstimatorTag::DELTA2: {
            int d = sample.dim;
            long n = sample.n();
            long m = n / (d + 1);
            if (m < 2) throw std::invalid_argument("two-sample split: sample too small");
            Sample r(d, std::vector<double>(sample.data.begin(), sample.data.begin() + m * d));
            Sample rest(d, std::vector<double>(sample.data.begin() + m * d, sample.data.end()));
            Sample s = build_product_sample(rest);
            if (s.n() > m) s.data.resize(static_cast<std::size_t>(m) * d);
            if (s.n() < m) r.data.resize(static_cast<std::size_t>(s.n()) * d);
            return tag == EstimatorTag::G2 ? g2_mixed(r, s, spec, table).value
                                           : delta2_ustat(r, s, spec, table).value;
        }
    }
    throw std::invalid_argument("single_estimate: unknown estimator");
}

}  // namespace

std::vector<double> replicate_estimates(EstimatorTag tag, const SourceSpec& source,
                                        const Matrix& a, WaveletSpec spec,
                                        const ScalingTable& table, long n, int replicates,
                                        std::uint64_t seed) {
    std::vector<double> out;
    out.reserve(replicates);
    for (int r = 0; r < replicates; ++r) {
        GeneratedSample gen = generate_mixed(source, a, n, replicate_seed(seed, r));
        out.push_back(single_estimate(tag, gen.sample, spec, table));
    }
    return out;
}

MseResult monte_carlo_mse(EstimatorTag tag, const SourceSpec& source, const Matrix& a,
                          WaveletSpec spec, const ScalingTable& table, long n, int replicates,
                          std::uint64_t seed, double target) {
    if (replicates < 2) throw std::invalid_argument("monte_carlo_mse: replicates must be >= 2");
    std::vector<double> values = replicate_estimates(tag, source, a, spec, table, n, replicates, seed);
    double mean_sq = 0.0;
    for (double v : values) {
        double e = v - target;
        mean_sq += e * e;
    }
    mean_sq /= replicates;
    double var = 0.0;
    for (double v : values) {
        double e = (v - target) * (v - target) - mean_sq;
        var += e * e;
    }
    var /= (replicates - 1);
    return {mean_sq, std::sqrt(var / replicates)};
}

SlopeFit rate_slope(std::span<const double> ns, std::span<const double> mses) {
    std::size_t count = ns.size();
    if (count != mses.size() || count < 3)
        throw std::invalid_argument("rate_slope: need >= 3 matched points");
    std::vector<double> x(count), y(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!(mses[i] > 0.0)) throw std::invalid_argument("rate_slope: MSE must be > 0");
        if (i > 0 && !(ns[i] > ns[i - 1]))
            throw std::invalid_argument("rate_slope: n grid must be strictly increasing");
        x[i] = std::log(ns[i]);
        y[i] = std::log(mses[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < count; ++i) { mx += x[i]; my += y[i]; }
    mx /= count; my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    double slope = sxy / sxx;
    double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double r = y[i] - intercept - slope * x[i];
        rss += r * r;
    }
    double se = (count > 2) ? std::sqrt(rss / (count - 2) / sxx) : 0.0;
    return {slope, se};
}

}  // namespace waveica
