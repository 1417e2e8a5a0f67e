#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "osaas/formats.hpp"
#include "osaas/spectral.hpp"

using namespace osaas;
using namespace osaas::spectral;

TEST_CASE("occupied width is (1+r)*SR for every catalog entry")
{
    for (const auto& e : formats::builtin_catalog()) {
        for (double r : {0.0, 0.1, 0.19, 0.5, 1.0}) {
            CHECK(occupied_width(e.symbol_rate, r) == (1.0 + r) * e.symbol_rate);
        }
    }
    CHECK_THROWS_AS(occupied_width(-1.0, 0.19), std::domain_error);
    CHECK_THROWS_AS(occupied_width(34.0, 1.5), std::domain_error);
}

TEST_CASE("raised-cosine psd has unit power and matches the oracle")
{
    for (double sr : {34.0, 46.0, 69.0}) {
        for (double r : {0.05, 0.19, 0.6}) {
            const SignalSpectrum sp{sr, r, 0.0};
            const double p = integrate_over_support(sp, [&](double f) { return signal_psd(f, sp); }, 0.01);
            CHECK(p == doctest::Approx(1.0).epsilon(1e-6));
            for (double f : {0.0, 0.3 * sr, 0.45 * sr, 0.55 * sr, 0.7 * sr}) {
                CHECK(signal_psd(f, sp) == doctest::Approx(oracle::rc_psd(f, sr, r)).epsilon(1e-12));
            }
            CHECK(signal_psd(sp.occupied_width() / 2.0 + 1e-6, sp) == 0.0);
        }
    }
    const SignalSpectrum rect{10.0, 0.0, 0.0};
    CHECK(signal_psd(5.0, rect) == doctest::Approx(0.05));
    CHECK(signal_psd(4.99, rect) == doctest::Approx(0.1));
    CHECK(signal_psd(5.01, rect) == 0.0);
}

TEST_CASE("super-Gaussian response is half power at B/2 and ripple stays below 1")
{
    for (int n = 1; n <= 6; ++n) {
        const FilterElement f{"f", 0.0, 40.0, n, std::nullopt};
        CHECK(filter_power_response(20.0, f) == doctest::Approx(0.5));
        CHECK(filter_power_response(-20.0, f) == doctest::Approx(0.5));
        CHECK(filter_power_response(0.0, f) == 1.0);
        CHECK(filter_power_response(13.0, f) == doctest::Approx(oracle::super_gauss(13.0, 40.0, n)));
    }
    FilterElement rip{"r", 0.0, 100.0, 4, FilterRipple{0.5, 12.5, 0.3}};
    for (double f = -40.0; f <= 40.0; f += 0.7) {
        CHECK(filter_power_response(f, rip) <= 1.0);
        CHECK(filter_power_response(f, rip) >= std::pow(10.0, -0.1) * oracle::super_gauss(f, 100.0, 4) - 1e-12);
    }
}

TEST_CASE("cascade responses multiply and the 3 dB width matches the bisection oracle")
{
    const std::vector<FilterElement> two{{"a", 10.0, 50.0, 1, std::nullopt},
                                         {"b", 10.0, 50.0, 1, std::nullopt}};
    CHECK(cascade_power_response(two, 35.0) ==
          doctest::Approx(std::pow(oracle::super_gauss(25.0, 50.0, 1), 2)));
    CHECK(cascade_3db_width(two, 10.0) == doctest::Approx(50.0 / std::sqrt(2.0)).epsilon(1e-7));

    for (int n : {1, 2, 3, 5}) {
        for (int count : {1, 2, 4}) {
            std::vector<FilterElement> c(count, FilterElement{"x", 0.0, 62.0, n, std::nullopt});
            CHECK(cascade_3db_width(c, 0.0) ==
                  doctest::Approx(oracle::cascade_width(62.0, n, count)).epsilon(1e-7));
        }
    }
    CHECK(std::isinf(cascade_3db_width({}, 0.0)));
}

TEST_CASE("trapezoid integration is exact on linear functions")
{
    CHECK(integrate([](double x) { return 2.0 * x + 1.0; }, 0.0, 3.0, 0.07) == doctest::Approx(12.0));
    CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0, 0.1) == 0.0);
}

TEST_CASE("overlap coefficient: self-normalized, disjoint zero, oracle agreement")
{
    const SignalSpectrum v69{69.0, 0.19, 0.0};
    const SignalSpectrum v34{34.0, 0.19, 0.0};
    CHECK(overlap_coefficient(v69, v69, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(overlap_coefficient(v69, v69, v69.occupied_width()) == 0.0);
    CHECK(overlap_coefficient(v34, v69, (v34.occupied_width() + v69.occupied_width()) / 2.0) == 0.0);

    // frozen values, computed once with an independent fine-grid integrator
    struct Case {
        double sv, si, d, expect;
    };
    const std::array<Case, 5> frozen{{{69, 69, 75.0, 0.001652},
                                      {69, 69, 68.75, 0.02688},
                                      {69, 69, 62.5, 0.1001},
                                      {69, 69, 56.25, 0.1940},
                                      {34, 69, 50.0, 0.03321}}};
    for (const auto& c : frozen) {
        const SignalSpectrum v{c.sv, 0.19, 0.0};
        const SignalSpectrum i{c.si, 0.19, 0.0};
        const double got = overlap_coefficient(v, i, c.d);
        CHECK(got == doctest::Approx(oracle::overlap(c.sv, c.si, 0.19, c.d)).epsilon(2e-3));
        CHECK(got == doctest::Approx(c.expect).epsilon(5e-3));
    }

    double prev = 2.0;
    for (double d = 0.0; d <= 90.0; d += 2.5) {
        const double x = overlap_coefficient(v69, v69, d);
        CHECK(x <= prev + 1e-12);
        CHECK(x >= 0.0);
        prev = x;
    }
}

TEST_CASE("overlap rejects coarse resolution and invalid spectra")
{
    const SignalSpectrum v{34.0, 0.19, 0.0};
    CHECK_THROWS_AS(overlap_coefficient(v, v, 10.0, 2.0), ConfigError);
    CHECK_THROWS_AS(overlap_coefficient(v, v, -1.0), std::domain_error);
    CHECK_THROWS_AS(overlap_coefficient(SignalSpectrum{0.0, 0.19, 0.0}, v, 1.0), std::domain_error);
}

TEST_CASE("frequency grid")
{
    const FrequencyGrid g{0.0, 1.0, 0.25};
    CHECK(g.point_count() == 5);
    CHECK(g.at(4) == doctest::Approx(1.0));
    CHECK_THROWS_AS((FrequencyGrid{1.0, 0.0, 0.1}).validate(), std::domain_error);
    CHECK_THROWS_AS((FrequencyGrid{0.0, 1.0, 0.0}).validate(), std::domain_error);
}
