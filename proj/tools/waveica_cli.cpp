// waveica: batch front end for the wavelet ICA contrast estimators.
//
// Subcommands: contrast, rates, demix, gen, selftest.
// Exit codes: 0 success, 2 usage/input error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "waveica/combinatorics.hpp"
#include "waveica/csv.hpp"
#include "waveica/demix.hpp"
#include "waveica/estimators.hpp"
#include "waveica/experiments.hpp"
#include "waveica/wavelet.hpp"

namespace {

using namespace waveica;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw csv_error("cannot open " + path + " for writing");
    return out;
}

// Writes either to --output or to stdout.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        auto out = open_output(path);
        out << text;
    }
}

double dispatch_estimate(EstimatorTag tag, const Sample& sample, WaveletSpec spec,
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

int cmd_contrast(const std::string& input, const std::string& output, int wavelet, int level,
                 const std::string& estimator) {
    EstimatorTag tag = parse_estimator(estimator);
    WaveletSpec spec(wavelet, level);
    Sample sample = read_csv_sample(input);
    sample.validate_unit_cube();
    if (outside_operating_regime(spec, sample.dim, sample.n()))
        std::cerr << "warning: 2^(j*d) >= n^2; mean squared error does not converge in this "
                     "regime, computing anyway\n";
    ScalingTable table = build_table(make_filter(wavelet), kDefaultTableDepth);
    double value = dispatch_estimate(tag, sample, spec, table);
    std::ostringstream report;
    report << "estimator,wavelet_n,level_j,d,n,value\n"
           << estimator_name(tag) << ',' << wavelet << ',' << level << ',' << sample.dim << ','
           << sample.n() << ',' << format_double(value) << '\n';
    emit(output, report.str());
    return 0;
}

int cmd_rates(const std::string& output, int wavelet, int level, const std::string& estimator,
              const std::string& source_name, int dim, double s, std::vector<long> n_grid,
              int replicates, std::uint64_t seed) {
    if (!(s > 0.0)) throw std::invalid_argument("--s must be > 0");
    EstimatorTag tag = parse_estimator(estimator);
    WaveletSpec spec(wavelet, level);
    SourceSpec source{parse_source(source_name), dim};
    Matrix a = Matrix::identity(dim);
    ScalingTable table = build_table(make_filter(wavelet), kDefaultTableDepth);

    // s is only ever a dyadic rational on this CLI; snap to den 64.
    Rational s_rat(std::llround(s * 64.0), 64);
    Rational theory = theoretical_rate(tag, s_rat, dim, Regime::SmallJ);

    std::vector<double> ns, mses;
    std::ostringstream report;
    report << "record,n,mse,stderr,slope,slope_stderr,theory_exponent\n";
    for (long n : n_grid) {
        MseResult r = monte_carlo_mse(tag, source, a, spec, table, n, replicates, seed, 0.0);
        ns.push_back(static_cast<double>(n));
        mses.push_back(r.mse);
        report << "mse," << n << ',' << format_double(r.mse) << ',' << format_double(r.stderr_)
               << ",,,\n";
    }
    SlopeFit fit = rate_slope(ns, mses);
    report << "summary,,,," << format_double(fit.slope) << ',' << format_double(fit.stderr_) << ','
           << format_double(theory.value()) << '\n';
    emit(output, report.str());
    return 0;
}

int cmd_demix(const std::string& input, const std::string& output, int wavelet, int level,
              int sweeps, int grid_size, const std::string& truth) {
    WaveletSpec spec(wavelet, level);
    Sample sample = read_csv_sample(input);
    ScalingTable table = build_table(make_filter(wavelet), kDefaultTableDepth);
    DemixResult res = jacobi_sweep(sample, spec, table, sweeps, grid_size);
    int d = sample.dim;

    std::ostringstream report;
    for (int i = 0; i < d; ++i) {
        report << "w";
        for (int j = 0; j < d; ++j) report << ',' << format_double(res.rotation(i, j));
        report << '\n';
    }
    for (int i = 0; i < d; ++i) {
        report << "whiten";
        for (int j = 0; j < d; ++j) report << ',' << format_double(res.whiten_transform(i, j));
        report << '\n';
    }
    report << "final_contrast," << format_double(res.final_contrast) << '\n';
    for (const TraceEntry& t : res.trace)
        report << "trace," << t.sweep << ',' << t.axis_p << ',' << t.axis_q << ','
               << format_double(t.theta) << ',' << format_double(t.contrast) << '\n';
    if (!truth.empty()) {
        Matrix a = read_csv_matrix(truth);
        Matrix unmix = res.rotation * res.whiten_transform;
        report << "amari_error," << format_double(amari_error(unmix * a)) << '\n';
    }
    emit(output, report.str());
    return 0;
}

int cmd_gen(const std::string& output, long n, int dim, const std::string& source_name,
            const std::string& mix_path, std::uint64_t seed) {
    SourceSpec source{parse_source(source_name), dim};
    Matrix a = mix_path.empty() ? Matrix::identity(dim) : read_csv_matrix(mix_path);
    GeneratedSample gen = generate_mixed(source, a, n, seed);
    write_csv_sample(output, gen.sample);
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };

    for (int order = 1; order <= kMaxDaubechiesOrder; ++order) {
        DaubechiesFilter f = make_filter(order);
        double sum = 0.0, sq = 0.0;
        for (double h : f.coeffs) { sum += h; sq += h * h; }
        bool ok = std::fabs(sum - std::sqrt(2.0)) < 1e-12 && std::fabs(sq - 1.0) < 1e-10;
        std::string label = "filter constraints N=" + std::to_string(order);
        check(label.c_str(), ok);
    }

    ScalingTable haar = build_table(make_filter(1), 6);
    Sample two(2, {0.1, 0.1, 0.9, 0.9});
    check("haar 2-point plug-in contrast = 1",
          std::fabs(c2_plugin(two, WaveletSpec(1, 1), haar).value - 1.0) < 1e-12);

    Sample line(1, {0.13, 0.41, 0.68, 0.77, 0.92, 0.05});
    check("d=1 plug-in contrast = 0",
          std::fabs(c2_plugin(line, WaveletSpec(1, 2), haar).value) < 1e-15);
    check("d=1 U-statistic contrast = 0",
          std::fabs(d2_fast(line, WaveletSpec(1, 1), haar).value) < 1e-10);

    check("matching-index count (3,2,1) = 24", count_matching(3, 2, 1) == 24);
    check("Bell(6) = 203 partitions", set_partitions(6).size() == 203);

    return failures == 0 ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet ICA contrast estimators"};
    app.require_subcommand(1);

    std::string input, output, truth, mix_path;
    std::string estimator = "c2";
    std::string source_name = "uniform";
    int wavelet = 1, level = 0, sweeps = 10, grid_size = 90, replicates = 100, dim = 2;
    long n = 0;
    double s = 1.0;
    std::uint64_t seed = 1;
    std::vector<long> n_grid = {250, 500, 1000, 2000};

    auto* contrast = app.add_subcommand(
        "contrast", "one estimate from a CSV sample (columns = axes, rows = observations); "
                    "report columns: estimator,wavelet_n,level_j,d,n,value");
    contrast->add_option("--input", input, "sample CSV, values in [0,1]")->required();
    contrast->add_option("--output", output, "report path (default stdout)");
    contrast->add_option("--wavelet", wavelet, "Daubechies order N (1 = Haar)");
    contrast->add_option("--level", level, "resolution level j");
    contrast->add_option("--estimator", estimator, "c2|b2|d2|d2-brute|f2|g2|delta2");

    auto* rates = app.add_subcommand(
        "rates", "Monte Carlo MSE over an n-grid at A = identity; report columns: "
                 "record,n,mse,stderr,slope,slope_stderr,theory_exponent");
    rates->add_option("--output", output, "report path (default stdout)");
    rates->add_option("--wavelet", wavelet, "Daubechies order N");
    rates->add_option("--level", level, "resolution level j");
    rates->add_option("--estimator", estimator, "c2|b2|d2|d2-brute|f2|g2|delta2");
    rates->add_option("--source", source_name, "uniform|bimodal|triangular");
    rates->add_option("--d", dim, "source dimension");
    rates->add_option("--s", s, "Besov smoothness for the theoretical exponent");
    rates->add_option("--n-grid", n_grid, "comma-separated sample sizes")->delimiter(',');
    rates->add_option("--replicates", replicates, "Monte Carlo replicates per n");
    rates->add_option("--seed", seed, "master seed");

    auto* demix = app.add_subcommand(
        "demix", "rotation search after whitening; rows: w (rotation), whiten (transform), "
                 "final_contrast, trace, optional amari_error");
    demix->add_option("--input", input, "mixed sample CSV")->required();
    demix->add_option("--output", output, "report path (default stdout)");
    demix->add_option("--wavelet", wavelet, "Daubechies order N");
    demix->add_option("--level", level, "resolution level j");
    demix->add_option("--sweeps", sweeps, "max Jacobi sweeps (0 = report identity)");
    demix->add_option("--grid-size", grid_size, "angles per quarter turn");
    demix->add_option("--truth", truth, "true mixing matrix CSV; adds amari_error row");

    auto* gen = app.add_subcommand("gen", "generate a mixed sample CSV");
    gen->add_option("--output", output, "sample path")->required();
    gen->add_option("--n", n, "observations")->required();
    gen->add_option("--d", dim, "dimension");
    gen->add_option("--source", source_name, "uniform|bimodal|triangular");
    gen->add_option("--mix", mix_path, "mixing matrix CSV (default identity)");
    gen->add_option("--seed", seed, "seed");

    app.add_subcommand("selftest", "run built-in consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (contrast->parsed()) return cmd_contrast(input, output, wavelet, level, estimator);
        if (rates->parsed())
            return cmd_rates(output, wavelet, level, estimator, source_name, dim, s, n_grid,
                             replicates, seed);
        if (demix->parsed())
            return cmd_demix(input, output, wavelet, level, sweeps, grid_size, truth);
        if (gen->parsed()) return cmd_gen(output, n, dim, source_name, mix_path, seed);
        return cmd_selftest();
    } catch (const csv_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
