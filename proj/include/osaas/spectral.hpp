#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

// Frequency-domain primitives shared by the line simulator and the
// diagnosis engine. All frequencies are in GHz, spectral densities in 1/GHz.

namespace osaas {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace spectral {

inline constexpr double kDefaultResolutionGHz = 0.05;

/// Uniform sampling grid used for trapezoidal integration.
struct FrequencyGrid {
    double start = 0.0;
    double stop = 0.0;
    double resolution = kDefaultResolutionGHz;

    /// floor((stop - start) / resolution) + 1
    std::size_t point_count() const;
    double at(std::size_t i) const { return start + static_cast<double>(i) * resolution; }
    void validate() const;

    bool operator==(const FrequencyGrid&) const = default;
};

/// Raised-cosine power spectrum of an RRC-shaped carrier.
struct SignalSpectrum {
    double symbol_rate = 0.0;  // GBd
    double roll_off = 0.0;
    double center = 0.0;       // GHz

    double occupied_width() const;
    double lower_edge() const { return center - occupied_width() / 2.0; }
    double upper_edge() const { return center + occupied_width() / 2.0; }
    void validate() const;

    bool operator==(const SignalSpectrum&) const = default;
};

struct FilterRipple {
    double amplitude_db = 0.0;
    double period_ghz = 1.0;
    double phase_rad = 0.0;

    bool operator==(const FilterRipple&) const = default;
};

/// Super-Gaussian passband; order 1 is Gaussian (AWG-like), order 3-6
/// approaches the flat top of a WSS.
struct FilterElement {
    std::string name;
    double center = 0.0;          // GHz
    double bandwidth_3db = 0.0;   // GHz
    int order = 1;
    std::optional<FilterRipple> ripple;

    void validate() const;

    bool operator==(const FilterElement&) const = default;
};

double occupied_width(double symbol_rate, double roll_off);

/// Unit-power raised-cosine PSD evaluated at `offset` from the carrier center.
double signal_psd(double offset, const SignalSpectrum& spectrum);

/// |H(f)|^2 of one filter at `offset` from its own center. The ripple term
/// 10^(a*(sin(2*pi*offset/period + phase) - 1)/10) keeps the response in (0, 1].
double filter_power_response(double offset, const FilterElement& filter);

/// Product of the individual responses, each evaluated at f - filter.center.
double cascade_power_response(std::span<const FilterElement> filters, double f);

/// Width between the outermost -3.01 dB points of the cascade around `center`,
/// found by bisection on each side. Assumes a single-lobed passband.
double cascade_3db_width(std::span<const FilterElement> filters, double center);

/// Trapezoidal rule over [lo, hi] with step no larger than `resolution`.
double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 double resolution);

/// Trapezoidal rule over a symmetric grid around `center` that covers the
/// signal support; points land on center +- k*resolution.
double integrate_over_support(const SignalSpectrum& spectrum,
                              const std::function<double(double)>& fn,
                              double resolution);

/// Self-normalized spectral overlap between a victim and an interferer
/// displaced by `spacing`. Identical co-located spectra give 1.
double overlap_coefficient(const SignalSpectrum& victim, const SignalSpectrum& interferer,
                           double spacing, double resolution = kDefaultResolutionGHz);

}  // namespace spectral
}  // namespace osaas
