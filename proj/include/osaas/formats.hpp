#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Modulation catalog and the BER <-> SNR <-> Q <-> normalized-GSNR chain.

namespace osaas::formats {

/// GSNR is reported in a 12.5 GHz reference bandwidth.
inline constexpr double kReferenceBandwidthGHz = 12.5;

enum class BerCurve { qpsk, hybrid8, qam16 };

std::string_view to_string(BerCurve curve);
std::optional<BerCurve> ber_curve_from_string(std::string_view name);

struct ModulationFormat {
    std::string name;
    double bits_per_symbol = 4.0;
    BerCurve ber_curve = BerCurve::qpsk;

    bool operator==(const ModulationFormat&) const = default;
};

ModulationFormat dp_qpsk();
ModulationFormat dp_p16qam();  // 6 bit/symbol hybrid of QPSK and 16QAM
ModulationFormat dp_16qam();
std::optional<ModulationFormat> format_by_name(std::string_view name);

struct CatalogEntry {
    std::string name;
    ModulationFormat format;
    double symbol_rate = 0.0;    // GBd
    double net_data_rate = 0.0;  // Gbit/s
    double margin_db = 1.0;

    void validate() const;

    bool operator==(const CatalogEntry&) const = default;
};

/// Transceiver configurations named in the field trials, with nominal net
/// rates stored as data (FEC overhead is implicit).
std::vector<CatalogEntry> builtin_catalog();
std::optional<CatalogEntry> find_entry(std::span<const CatalogEntry> catalog,
                                       std::string_view name);

struct ChainConfig {
    double fec_threshold_ber = 2e-2;
    double outage_ber = 5e-2;

    bool operator==(const ChainConfig&) const = default;
};

/// A normalized GSNR reading or an outage marker, never both.
class GsnrSample {
public:
    static GsnrSample value(double gsnr_db) { return GsnrSample(gsnr_db); }
    static GsnrSample outage() { return GsnrSample(); }

    bool is_outage() const { return !gsnr_db_.has_value(); }
    double gsnr_db() const { return gsnr_db_.value(); }
    std::optional<double> maybe_db() const { return gsnr_db_; }

    bool operator==(const GsnrSample&) const = default;

private:
    GsnrSample() = default;
    explicit GsnrSample(double v) : gsnr_db_(v) {}
    std::optional<double> gsnr_db_;
};

/// Gray-coded AWGN bit-error rate at the per-symbol SNR (dB). The hybrid
/// curve is the geometric mean of the QPSK and 16QAM curves. Results are
/// floored at the smallest normal double.
double ber_from_snr(BerCurve curve, double snr_db);
inline double ber_from_snr(const ModulationFormat& f, double snr_db)
{
    return ber_from_snr(f.ber_curve, snr_db);
}

struct SnrEstimate {
    double snr_db = 0.0;
    bool saturated = false;
};

inline constexpr double kSnrFloorDb = -30.0;
inline constexpr double kSnrCeilingDb = 60.0;

/// Bisection inverse of ber_from_snr to 1e-4 dB. BERs beyond the curve's
/// value at -30 dB (or below its value at 60 dB) clamp with `saturated` set.
SnrEstimate snr_from_ber(BerCurve curve, double ber);
inline SnrEstimate snr_from_ber(const ModulationFormat& f, double ber)
{
    return snr_from_ber(f.ber_curve, ber);
}

double q_db_from_ber(double ber);
double ber_from_q_db(double q_db);

double normalize_gsnr(double snr_db, double symbol_rate);
double denormalize_gsnr(double gsnr_db, double symbol_rate);

/// Normalized GSNR needed at the FEC threshold plus the entry margin.
double required_gsnr(const CatalogEntry& entry, const ChainConfig& chain = {});

}  // namespace osaas::formats
