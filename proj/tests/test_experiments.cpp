#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "waveica/experiments.hpp"

using namespace waveica;

TEST_CASE("Rational arithmetic is exact and normalized") {
    Rational a(2, 4);
    CHECK(a.num == 1);
    CHECK(a.den == 2);
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(-4, 6)) == Rational(2, -3));
    CHECK((Rational(3, 4) * Rational(2, 3)) == Rational(1, 2));
    CHECK((Rational(1, 2) / Rational(3, 2)) == Rational(1, 3));
    CHECK_THROWS(Rational(1, 0));
    CHECK_THROWS(Rational(1, 2) / Rational(0, 5));
}

TEST_CASE("theoretical_rate matches the published exponent table") {
    CHECK(theoretical_rate(EstimatorTag::C2, Rational(1, 1), 2, Regime::SmallJ) ==
          Rational(-2, 3));
    CHECK(theoretical_rate(EstimatorTag::DELTA2, Rational(1, 1), 2, Regime::SmallJ) ==
          Rational(-1, 1));
    CHECK(theoretical_rate(EstimatorTag::D2_FAST, Rational(1, 4), 1, Regime::SmallJ) ==
          Rational(-1, 2));
    CHECK(theoretical_rate(EstimatorTag::G2, Rational(2, 1), 3, Regime::SmallJ) ==
          Rational(-1, 1));
    CHECK(theoretical_rate(EstimatorTag::F2, Rational(1, 2), 1, Regime::LargeJ) ==
          Rational(-4, 3));
    CHECK(theoretical_rate(EstimatorTag::D2_FAST, Rational(1, 1), 2, Regime::LargeJ) ==
          Rational(-4, 3));
    CHECK_THROWS_AS(theoretical_rate(EstimatorTag::C2, Rational(1, 1), 2, Regime::LargeJ),
                    inoperable_regime_error);
    CHECK_THROWS(theoretical_rate(EstimatorTag::C2, Rational(0, 1), 2, Regime::SmallJ));
    CHECK_THROWS(theoretical_rate(EstimatorTag::C2, Rational(1, 1), 0, Regime::SmallJ));
}

TEST_CASE("generate_mixed: determinism, support, and guards") {
    SourceSpec src{SourceKind::Uniform, 2};
    Matrix id = Matrix::identity(2);
    GeneratedSample a = generate_mixed(src, id, 100, 4242);
    GeneratedSample b = generate_mixed(src, id, 100, 4242);
    CHECK(a.sample.data == b.sample.data);  // bit-identical
    a.sample.validate_unit_cube();
    // identity mixing of unit-cube sources: remap is the identity
    CHECK(a.box[0] == std::pair<double, double>{0.0, 1.0});
    CHECK(a.box[1] == std::pair<double, double>{0.0, 1.0});

    GeneratedSample c = generate_mixed(src, id, 100, 4243);
    CHECK(a.sample.data != c.sample.data);

    CHECK_THROWS(generate_mixed(src, id, 0, 1));
    Matrix singular(2, {1.0, 2.0, 2.0, 4.0});
    CHECK_THROWS(generate_mixed(src, singular, 10, 1));
    Matrix wrong = Matrix::identity(3);
    CHECK_THROWS(generate_mixed(src, wrong, 10, 1));
}

TEST_CASE("source generators stay inside their stated supports") {
    Matrix id = Matrix::identity(1);
    GeneratedSample bi = generate_mixed(SourceSpec{SourceKind::BimodalMix, 1}, id, 2000, 7);
    for (double v : bi.sample.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK((v <= 0.4 + 1e-12 || v >= 0.6 - 1e-12));
    }
    GeneratedSample tri = generate_mixed(SourceSpec{SourceKind::Triangular, 1}, id, 2000, 7);
    double mean = 0.0;
    for (double v : tri.sample.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        mean += v;
    }
    CHECK(std::fabs(mean / 2000 - 0.5) < 0.05);  // symmetric around the peak
}

TEST_CASE("parse_source accepts the documented names only") {
    CHECK(parse_source("uniform") == SourceKind::Uniform);
    CHECK(parse_source("bimodal") == SourceKind::BimodalMix);
    CHECK(parse_source("triangular") == SourceKind::Triangular);
    CHECK_THROWS(parse_source("gauss"));
}

TEST_CASE("monte_carlo_mse: determinism and guards") {
    ScalingTable t = build_table(make_filter(1), 6);
    SourceSpec src{SourceKind::Uniform, 2};
    Matrix id = Matrix::identity(2);
    WaveletSpec spec(1, 2);

    MseResult a = monte_carlo_mse(EstimatorTag::C2, src, id, spec, t, 60, 8, 11, 0.0);
    MseResult b = monte_carlo_mse(EstimatorTag::C2, src, id, spec, t, 60, 8, 11, 0.0);
    CHECK(a.mse == b.mse);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.mse > 0.0);
    CHECK(a.stderr_ >= 0.0);

    CHECK_THROWS(monte_carlo_mse(EstimatorTag::C2, src, id, spec, t, 60, 1, 11, 0.0));
}

TEST_CASE("replicate estimates are order-independent in the seed stream") {
    ScalingTable t = build_table(make_filter(1), 6);
    SourceSpec src{SourceKind::Uniform, 2};
    Matrix id = Matrix::identity(2);
    std::vector<double> v8 = replicate_estimates(EstimatorTag::B2, src, id, WaveletSpec(1, 1), t,
                                                 40, 8, 5);
    std::vector<double> v4 = replicate_estimates(EstimatorTag::B2, src, id, WaveletSpec(1, 1), t,
                                                 40, 4, 5);
    REQUIRE(v8.size() == 8);
    for (int i = 0; i < 4; ++i) CHECK(v8[i] == v4[i]);  // prefix stability
}

TEST_CASE("rate_slope fits exact power laws exactly") {
    std::vector<double> ns = {100, 200, 400};
    std::vector<double> quad = {1e-4, 2.5e-5, 6.25e-6};  // n^-2
    SlopeFit f2 = rate_slope(ns, quad);
    CHECK(std::fabs(f2.slope + 2.0) < 1e-12);
    CHECK(std::fabs(f2.stderr_) < 1e-12);

    std::vector<double> lin = {3e-2, 1.5e-2, 7.5e-3};  // c * n^-1
    SlopeFit f1 = rate_slope(ns, lin);
    CHECK(std::fabs(f1.slope + 1.0) < 1e-12);

    std::vector<double> two_n = {100, 200};
    std::vector<double> two_m = {1.0, 0.5};
    CHECK_THROWS(rate_slope(two_n, two_m));
    std::vector<double> bad = {1e-4, 0.0, 6.25e-6};
    CHECK_THROWS(rate_slope(ns, bad));
    std::vector<double> unordered = {100, 400, 200};
    CHECK_THROWS(rate_slope(unordered, quad));
}
