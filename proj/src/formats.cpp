#include "osaas/formats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace osaas::formats {

namespace {

double gaussian_q(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double ber_qpsk(double snr)
{
    return 0.5 * std::erfc(std::sqrt(snr / 2.0));
}

// Gray-mapped square 16QAM, exact per-rail 4-PAM expression.
double ber_qam16(double snr)
{
    const double d = std::sqrt(snr / 5.0);
    return (3.0 * gaussian_q(d) + 2.0 * gaussian_q(3.0 * d) - gaussian_q(5.0 * d)) / 4.0;
}

}  // namespace

std::string_view to_string(BerCurve curve)
{
    switch (curve) {
    case BerCurve::qpsk:
        return "qpsk";
    case BerCurve::hybrid8:
        return "hybrid8";
    case BerCurve::qam16:
        return "qam16";
    }
    return "qpsk";
}

std::optional<BerCurve> ber_curve_from_string(std::string_view name)
{
    if (name == "qpsk") {
        return BerCurve::qpsk;
    }
    if (name == "hybrid8") {
        return BerCurve::hybrid8;
    }
    if (name == "qam16") {
        return BerCurve::qam16;
    }
    return std::nullopt;
}

ModulationFormat dp_qpsk()
{
    return {"DP-QPSK", 4.0, BerCurve::qpsk};
}

ModulationFormat dp_p16qam()
{
    return {"DP-P-16QAM", 6.0, BerCurve::hybrid8};
}

ModulationFormat dp_16qam()
{
    return {"DP-16QAM", 8.0, BerCurve::qam16};
}

std::optional<ModulationFormat> format_by_name(std::string_view name)
{
    for (auto f : {dp_qpsk(), dp_p16qam(), dp_16qam()}) {
        if (f.name == name) {
            return f;
        }
    }
    return std::nullopt;
}

void CatalogEntry::validate() const
{
    if (name.empty()) {
        throw std::domain_error("catalog entry needs a name");
    }
    if (!(symbol_rate > 0.0)) {
        throw std::domain_error("catalog entry " + name + ": symbol rate must be positive");
    }
    if (!(net_data_rate > 0.0)) {
        throw std::domain_error("catalog entry " + name + ": net data rate must be positive");
    }
    if (!std::isfinite(margin_db)) {
        throw std::domain_error("catalog entry " + name + ": margin must be finite");
    }
}

std::vector<CatalogEntry> builtin_catalog()
{
    return {
        {"200G-DP-QPSK-69GBd", dp_qpsk(), 69.0, 200.0, 1.0},
        {"200G-DP-P-16QAM-46GBd", dp_p16qam(), 46.0, 200.0, 1.0},
        {"200G-DP-16QAM-34GBd", dp_16qam(), 34.0, 200.0, 1.0},
        {"300G-DP-P-16QAM-69GBd", dp_p16qam(), 69.0, 300.0, 1.0},
        {"300G-DP-16QAM-52GBd", dp_16qam(), 52.0, 300.0, 1.0},
        {"100G-DP-QPSK-34GBd", dp_qpsk(), 34.0, 100.0, 1.0},
    };
}

std::optional<CatalogEntry> find_entry(std::span<const CatalogEntry> catalog,
                                       std::string_view name)
{
    auto it = std::find_if(catalog.begin(), catalog.end(),
                           [&](const CatalogEntry& e) { return e.name == name; });
    if (it == catalog.end()) {
        return std::nullopt;
    }
    return *it;
}

double ber_from_snr(BerCurve curve, double snr_db)
{
    const double snr = std::pow(10.0, snr_db / 10.0);
    double ber = 0.0;
    switch (curve) {
    case BerCurve::qpsk:
        ber = ber_qpsk(snr);
        break;
    case BerCurve::qam16:
        ber = ber_qam16(snr);
        break;
    case BerCurve::hybrid8:
        ber = std::sqrt(ber_qpsk(snr) * ber_qam16(snr));
        break;
    }
    return std::clamp(ber, std::numeric_limits<double>::min(), 0.5);
}

SnrEstimate snr_from_ber(BerCurve curve, double ber)
{
    if (!(ber > 0.0 && ber < 0.5)) {
        throw std::domain_error("BER must lie in (0, 0.5)");
    }
    double lo = kSnrFloorDb;
    double hi = kSnrCeilingDb;
    if (ber >= ber_from_snr(curve, lo)) {
        return {lo, true};
    }
    if (ber <= ber_from_snr(curve, hi)) {
        return {hi, true};
    }
    // ber_from_snr is decreasing: keep ber(lo) > ber > ber(hi).
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        if (ber_from_snr(curve, mid) > ber) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), false};
}

double q_db_from_ber(double ber)
{
    if (!(ber > 0.0 && ber < 0.5)) {
        throw std::domain_error("BER must lie in (0, 0.5) to define a Q-factor");
    }
    const double q = std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * ber);
    return 20.0 * std::log10(q);
}

double ber_from_q_db(double q_db)
{
    if (!std::isfinite(q_db)) {
        throw std::domain_error("Q-factor must be finite");
    }
    const double q = std::pow(10.0, q_db / 20.0);
    return 0.5 * std::erfc(q / std::numbers::sqrt2);
}

double normalize_gsnr(double snr_db, double symbol_rate)
{
    if (!(symbol_rate > 0.0)) {
        throw std::domain_error("symbol rate must be positive");
    }
    return snr_db + 10.0 * std::log10(symbol_rate / kReferenceBandwidthGHz);
}

double denormalize_gsnr(double gsnr_db, double symbol_rate)
{
    if (!(symbol_rate > 0.0)) {
        throw std::domain_error("symbol rate must be positive");
    }
    return gsnr_db - 10.0 * std::log10(symbol_rate / kReferenceBandwidthGHz);
}

double required_gsnr(const CatalogEntry& entry, const ChainConfig& chain)
{
    const auto snr = snr_from_ber(entry.format, chain.fec_threshold_ber);
    return normalize_gsnr(snr.snr_db, entry.symbol_rate) + entry.margin_db;
}

}  // namespace osaas::formats
