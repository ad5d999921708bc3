#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "waveica/demix.hpp"
#include "waveica/estimators.hpp"
#include "waveica/experiments.hpp"
#include "waveica/wavelet.hpp"

namespace py = pybind11;
using namespace waveica;

namespace {

Sample to_sample(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("sample must have at least one row");
    int d = static_cast<int>(rows.front().size());
    Sample s(d, {});
    s.data.reserve(rows.size() * d);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != d)
            throw std::invalid_argument("ragged sample rows");
        s.data.insert(s.data.end(), row.begin(), row.end());
    }
    return s;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    int d = static_cast<int>(rows.size());
    Matrix m(d);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[i].size()) != d)
            throw std::invalid_argument("matrix must be square");
        for (int j = 0; j < d; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> from_matrix(const Matrix& m) {
    std::vector<std::vector<double>> out(m.n, std::vector<double>(m.n));
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) out[i][j] = m(i, j);
    return out;
}

double py_contrast(const std::vector<std::vector<double>>& rows, const std::string& estimator,
                   int wavelet, int level) {
    EstimatorTag tag = parse_estimator(estimator);
    Sample sample = to_sample(rows);
    WaveletSpec spec(wavelet, level);
    ScalingTable table = build_table(make_filter(wavelet), kDefaultTableDepth);
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
            long m = sample.n() / (d + 1);
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
    throw std::invalid_argument("unknown estimator");
}

std::pair<long long, long long> py_rate(const std::string& estimator, double s, int d,
                                        const std::string& regime) {
    Regime r;
    if (regime == "small_j") r = Regime::SmallJ;
    else if (regime == "large_j") r = Regime::LargeJ;
    else throw std::invalid_argument("regime must be small_j or large_j");
    Rational srat(std::llround(s * 64.0), 64);
    Rational e = theoretical_rate(parse_estimator(estimator), srat, d, r);
    return {e.num, e.den};
}

std::vector<std::vector<double>> py_generate(long n, int d, const std::string& source,
                                             const std::vector<std::vector<double>>& mix,
                                             std::uint64_t seed) {
    Matrix a = mix.empty() ? Matrix::identity(d) : to_matrix(mix);
    GeneratedSample gen = generate_mixed(SourceSpec{parse_source(source), d}, a, n, seed);
    std::vector<std::vector<double>> out(n, std::vector<double>(d));
    for (long i = 0; i < n; ++i)
        for (int l = 0; l < d; ++l) out[i][l] = gen.sample.at(i, l);
    return out;
}

py::dict py_demix(const std::vector<std::vector<double>>& rows, int wavelet, int level,
                  int sweeps, int grid_size) {
    Sample sample = to_sample(rows);
    ScalingTable table = build_table(make_filter(wavelet), kDefaultTableDepth);
    DemixResult res = jacobi_sweep(sample, WaveletSpec(wavelet, level), table, sweeps, grid_size);
    py::dict out;
    out["rotation"] = from_matrix(res.rotation);
    out["whiten_transform"] = from_matrix(res.whiten_transform);
    out["mean"] = res.mean;
    out["final_contrast"] = res.final_contrast;
    return out;
}

}  // namespace

PYBIND11_MODULE(_waveica, m) {
    m.doc() = "wavelet ICA contrast estimators";
    m.def("contrast", &py_contrast, py::arg("rows"), py::arg("estimator") = "c2",
          py::arg("wavelet") = 1, py::arg("level") = 0,
          "Estimate the factorization contrast of a sample in [0,1]^d.");
    m.def("filter_coefficients",
          [](int order) { return make_filter(order).coeffs; }, py::arg("order"),
          "Daubechies low-pass filter taps for D2N.");
    m.def("theoretical_rate", &py_rate, py::arg("estimator"), py::arg("s"), py::arg("d"),
          py::arg("regime") = "small_j",
          "Exact rational MSE exponent (numerator, denominator).");
    m.def("generate_mixed", &py_generate, py::arg("n"), py::arg("d"),
          py::arg("source") = "uniform", py::arg("mix") = std::vector<std::vector<double>>{},
          py::arg("seed") = 1, "Seeded mixed sample remapped into the unit cube.");
    m.def("demix", &py_demix, py::arg("rows"), py::arg("wavelet") = 1, py::arg("level") = 2,
          py::arg("sweeps") = 10, py::arg("grid_size") = 90,
          "Whiten and search plane rotations minimizing the contrast.");
    m.def("amari_error",
          [](const std::vector<std::vector<double>>& p) { return amari_error(to_matrix(p)); },
          py::arg("p"), "Permutation/scale-invariant demixing error.");
}
