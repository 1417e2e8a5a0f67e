#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "osaas/black_box.hpp"
#include "osaas/formats.hpp"
#include "osaas/spectral.hpp"

// Ground-truth model of a line system. Only open_session() and
// SimulatedChannelBank leave this module, and both hide the scenario behind
// the BlackBoxProbe interface.

namespace osaas::linesim {

struct RippleComponent {
    double amplitude_db = 0.0;
    double period_ghz = 1.0;
    double phase_rad = 0.0;

    bool operator==(const RippleComponent&) const = default;
};

/// GSNR over the lit spectrum (dB, normalized). Tilt is end-to-end across
/// the span of all media channels; ripple phases are referenced to the span
/// center.
struct GsnrProfile {
    double base_gsnr_db = 20.0;
    double tilt_db = 0.0;
    std::vector<RippleComponent> ripple;

    bool operator==(const GsnrProfile&) const = default;
};

struct NeighborChannel {
    spectral::SignalSpectrum spectrum;
    double power_offset_db = 0.0;

    bool operator==(const NeighborChannel&) const = default;
};

struct Scenario {
    std::vector<MediaChannel> media_channels;
    std::vector<spectral::FilterElement> filters;
    GsnrProfile gsnr_profile;
    std::vector<NeighborChannel> neighbors;
    double crosstalk_coupling = 1.0;    // kappa
    double filtering_exponent = 2.0;    // beta
    double measurement_noise_sigma_db = 0.1;
    std::uint64_t seed = 0;
    spectral::FrequencyGrid grid;
    PowerRule line_power_rule;          // launch rule of the neighbor carriers
    formats::ChainConfig chain;

    void validate() const;
    double span_lower() const;
    double span_upper() const;
    double span_center() const { return 0.5 * (span_lower() + span_upper()); }
    double span_width() const { return span_upper() - span_lower(); }

    bool operator==(const Scenario&) const = default;
};

double local_gsnr_db(const Scenario& scenario, double f);

/// rho = integral(S*T) / integral(S) for the probed filter cascade.
double filter_transmission(const Scenario& scenario, const spectral::SignalSpectrum& spectrum);

/// -beta * 10*log10(rho); +infinity when no signal power gets through.
double filtering_penalty_db(const Scenario& scenario, const spectral::SignalSpectrum& spectrum);

/// kappa * sum_n (P_n/P_v) * chi(victim, n, |dcenter|)
double crosstalk_lin(const Scenario& scenario, const spectral::SignalSpectrum& victim,
                     double victim_power_dbm);

/// Noise-free effective GSNR (dB, normalized) of a carrier; empty when the
/// filter cascade blocks it entirely.
std::optional<double> effective_gsnr_db(const Scenario& scenario, double carrier,
                                        const ProbeConfig& probe);

MeasurementResult measure(const Scenario& scenario, double carrier, const ProbeConfig& probe,
                          int trial_index);

std::unique_ptr<BlackBoxProbe> open_session(std::shared_ptr<const Scenario> scenario);

class SimulatedChannelBank final : public ChannelBank {
public:
    explicit SimulatedChannelBank(std::shared_ptr<const Scenario> scenario);

    std::vector<MediaChannel> slots() const override;
    std::unique_ptr<BlackBoxProbe> open_channel(
        std::size_t victim, std::span<const ChannelAssignment> assignments) const override;

private:
    std::shared_ptr<const Scenario> scenario_;
};

}  // namespace osaas::linesim
