#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "osaas/formats.hpp"

using namespace osaas::formats;

namespace {

int kind(BerCurve c)
{
    return c == BerCurve::qpsk ? 0 : c == BerCurve::hybrid8 ? 1 : 2;
}

const BerCurve kCurves[] = {BerCurve::qpsk, BerCurve::hybrid8, BerCurve::qam16};

}  // namespace

TEST_CASE("ber curves match the erfc oracle")
{
    for (auto c : kCurves) {
        for (double s = -5.0; s <= 25.0; s += 0.5) {
            CHECK(ber_from_snr(c, s) == doctest::Approx(oracle::ber(kind(c), s)).epsilon(1e-12));
        }
    }
    CHECK(ber_from_snr(BerCurve::qpsk, 40.0) < 1e-12);
    CHECK(ber_from_snr(BerCurve::qpsk, -200.0) <= 0.5);
    CHECK(ber_from_snr(BerCurve::qam16, 200.0) > 0.0);
}

TEST_CASE("ber curves are strictly decreasing and ordered")
{
    for (auto c : kCurves) {
        double prev = 1.0;
        for (double s = -5.0; s <= 30.0 + 1e-9; s += 0.1) {
            const double b = ber_from_snr(c, s);
            CHECK(b < prev);
            prev = b;
        }
    }
    for (double s = -5.0; s <= 30.0; s += 0.1) {
        const double q = ber_from_snr(BerCurve::qpsk, s);
        const double h = ber_from_snr(BerCurve::hybrid8, s);
        const double m = ber_from_snr(BerCurve::qam16, s);
        CHECK(q <= h);
        CHECK(h <= m);
    }
}

TEST_CASE("snr_from_ber inverts within 0.01 dB and agrees with the bisection oracle")
{
    for (auto c : kCurves) {
        for (double x = 0.0; x <= 25.0; x += 0.25) {
            const double b = ber_from_snr(c, x);
            const auto e = snr_from_ber(c, b);
            CHECK_FALSE(e.saturated);
            CHECK(std::abs(e.snr_db - x) <= 0.01);
        }
        CHECK(snr_from_ber(c, 2e-2).snr_db == doctest::Approx(oracle::snr_for_ber(kind(c), 2e-2)).epsilon(1e-5));
    }
    const double gap = snr_from_ber(BerCurve::qam16, 2e-2).snr_db - snr_from_ber(BerCurve::qpsk, 2e-2).snr_db;
    const double oracle_gap = oracle::snr_for_ber(2, 2e-2) - oracle::snr_for_ber(0, 2e-2);
    CHECK(std::abs(gap - oracle_gap) <= 0.5);
}

TEST_CASE("snr_from_ber saturates near 0.5 and rejects out-of-range BER")
{
    const auto e = snr_from_ber(BerCurve::qpsk, 0.5 - 1e-12);
    CHECK(e.saturated);
    CHECK(e.snr_db == kSnrFloorDb);
    CHECK_THROWS_AS(snr_from_ber(BerCurve::qpsk, 0.0), std::domain_error);
    CHECK_THROWS_AS(snr_from_ber(BerCurve::qpsk, 0.5), std::domain_error);
    CHECK_THROWS_AS(snr_from_ber(BerCurve::qpsk, -0.1), std::domain_error);
}

TEST_CASE("Q-factor conversion matches the error-function oracle")
{
    CHECK(q_db_from_ber(2.3e-2) == doctest::Approx(oracle::q_db(2.3e-2)).epsilon(1e-9));
    CHECK(q_db_from_ber(2.3e-2) == doctest::Approx(6.0).epsilon(0.02));
    CHECK(q_db_from_ber(1e-3) == doctest::Approx(oracle::q_db(1e-3)).epsilon(1e-9));
    CHECK(q_db_from_ber(1e-3) == doctest::Approx(9.8).epsilon(0.01));
    CHECK_THROWS_AS(q_db_from_ber(0.5), std::domain_error);
    CHECK_THROWS_AS(q_db_from_ber(0.0), std::domain_error);
    for (double b : {2.3e-2, 1e-3, 1e-6, 0.3, 0.049}) {
        const double back = ber_from_q_db(q_db_from_ber(b));
        CHECK(std::abs(back - b) / b <= 1e-6);
    }
    CHECK_THROWS_AS(ber_from_q_db(NAN), std::domain_error);
}

TEST_CASE("gsnr normalization")
{
    CHECK(normalize_gsnr(10.0, 12.5) == 10.0);
    CHECK(normalize_gsnr(10.0, 25.0) == doctest::Approx(13.0103).epsilon(1e-5));
    CHECK(normalize_gsnr(10.0, 69.0) == doctest::Approx(17.42).epsilon(1e-3));
    for (double sr : {12.5, 34.0, 46.0, 52.0, 69.0}) {
        for (double g : {-3.0, 0.0, 14.2, 30.0}) {
            CHECK(std::abs(denormalize_gsnr(normalize_gsnr(g, sr), sr) - g) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(normalize_gsnr(1.0, 0.0), std::domain_error);
}

TEST_CASE("required gsnr composes threshold, normalization and margin")
{
    CatalogEntry e{"ref", dp_qpsk(), 12.5, 100.0, 0.0};
    CHECK(required_gsnr(e) == snr_from_ber(BerCurve::qpsk, 2e-2).snr_db);
    e.margin_db = 1.0;
    CHECK(required_gsnr(e) == doctest::Approx(snr_from_ber(BerCurve::qpsk, 2e-2).snr_db + 1.0));
    const auto q34 = find_entry(builtin_catalog(), "200G-DP-16QAM-34GBd").value();
    CHECK(required_gsnr(q34) ==
          doctest::Approx(oracle::snr_for_ber(2, 2e-2) + 10.0 * std::log10(34.0 / 12.5) + 1.0).epsilon(1e-5));
    ChainConfig strict{1e-3, 5e-2};
    CHECK(required_gsnr(q34, strict) > required_gsnr(q34));
}

TEST_CASE("catalog and format lookup")
{
    const auto cat = builtin_catalog();
    CHECK(cat.size() == 6);
    for (const auto& e : cat) {
        CHECK_NOTHROW(e.validate());
        const int bps = static_cast<int>(e.format.bits_per_symbol);
        CHECK((bps == 4 || bps == 6 || bps == 8));
    }
    CHECK(format_by_name("DP-P-16QAM")->ber_curve == BerCurve::hybrid8);
    CHECK_FALSE(format_by_name("DP-64QAM").has_value());
    CHECK(ber_curve_from_string(to_string(BerCurve::qam16)) == BerCurve::qam16);
    CatalogEntry bad{"x", dp_qpsk(), 34.0, 0.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("gsnr sample is value or outage, never both")
{
    const auto v = GsnrSample::value(12.0);
    const auto o = GsnrSample::outage();
    CHECK_FALSE(v.is_outage());
    CHECK(o.is_outage());
    CHECK_FALSE(o.maybe_db().has_value());
    CHECK_THROWS(o.gsnr_db());
}
