#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osaas/formats.hpp"
#include "osaas/spectral.hpp"

// The narrow measurement boundary between a line system and the assessment
// side. Nothing here exposes filters, GSNR profiles or neighbor channels.

namespace osaas {

/// A frequency slot carrying a transparent lightpath.
struct MediaChannel {
    double center = 0.0;  // GHz, absolute
    double width = 0.0;   // GHz
    double guard_band_each_side = 0.0;

    double lower() const { return center - width / 2.0; }
    double upper() const { return center + width / 2.0; }
    void validate() const;

    bool operator==(const MediaChannel&) const = default;
};

/// Constant power-to-symbol-rate launch rule.
struct PowerRule {
    double p_ref_dbm = 0.0;
    double sr_ref_gbd = formats::kReferenceBandwidthGHz;

    double power_dbm(double symbol_rate) const
    {
        return p_ref_dbm + 10.0 * std::log10(symbol_rate / sr_ref_gbd);
    }

    bool operator==(const PowerRule&) const = default;
};

struct ProbeConfig {
    formats::CatalogEntry entry;
    double roll_off = 0.19;
    PowerRule power_rule;

    const std::string& id() const { return entry.name; }
    double symbol_rate() const { return entry.symbol_rate; }
    double occupied_width() const { return spectral::occupied_width(entry.symbol_rate, roll_off); }
    spectral::SignalSpectrum spectrum_at(double carrier) const
    {
        return {entry.symbol_rate, roll_off, carrier};
    }
    void validate() const;

    bool operator==(const ProbeConfig&) const = default;
};

/// One black-box reading: a Q-factor or an outage, never both.
struct MeasurementResult {
    double carrier = 0.0;
    std::string probe_id;
    int trial_index = 0;
    std::optional<double> q_db;

    bool outage() const { return !q_db.has_value(); }

    bool operator==(const MeasurementResult&) const = default;
};

/// What a customer's transceiver sees of a spectrum service. Used
/// sequentially: set_carrier, set_probe, read_q.
class BlackBoxProbe {
public:
    virtual ~BlackBoxProbe() = default;

    virtual void set_carrier(double carrier_ghz) = 0;
    virtual void set_probe(const ProbeConfig& probe) = 0;
    virtual MeasurementResult read_q(int trial_index = 0) = 0;
    virtual std::vector<MediaChannel> slots() const = 0;
};

struct ChannelAssignment {
    double carrier = 0.0;
    ProbeConfig probe;
};

/// A set of adjacent slots, each hosting one customer carrier. Opening a
/// channel yields a session for that slot while the other assignments are
/// lit as its neighbors.
class ChannelBank {
public:
    virtual ~ChannelBank() = default;

    virtual std::vector<MediaChannel> slots() const = 0;
    virtual std::unique_ptr<BlackBoxProbe> open_channel(
        std::size_t victim, std::span<const ChannelAssignment> assignments) const = 0;
};

}  // namespace osaas
