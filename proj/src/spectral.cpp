#include "osaas/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace osaas::spectral {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& what)
{
    if (!cond) {
        throw std::domain_error(what);
    }
}

}  // namespace

std::size_t FrequencyGrid::point_count() const
{
    return static_cast<std::size_t>(std::floor((stop - start) / resolution + 1e-9)) + 1;
}

void FrequencyGrid::validate() const
{
    require(std::isfinite(start) && std::isfinite(stop), "grid bounds must be finite");
    require(start < stop, "grid start must be below stop");
    require(resolution > 0.0, "grid resolution must be positive");
    require(point_count() >= 2, "grid must contain at least two points");
}

double SignalSpectrum::occupied_width() const
{
    return spectral::occupied_width(symbol_rate, roll_off);
}

void SignalSpectrum::validate() const
{
    require(symbol_rate > 0.0 && std::isfinite(symbol_rate), "symbol rate must be positive");
    require(roll_off >= 0.0 && roll_off <= 1.0, "roll-off must lie in [0, 1]");
    require(std::isfinite(center), "spectrum center must be finite");
}

void FilterElement::validate() const
{
    require(bandwidth_3db > 0.0 && std::isfinite(bandwidth_3db),
            "filter bandwidth_3db must be positive");
    require(order >= 1, "filter order must be >= 1");
    require(std::isfinite(center), "filter center must be finite");
    if (ripple) {
        require(ripple->amplitude_db >= 0.0, "ripple amplitude must be >= 0");
        require(ripple->period_ghz > 0.0, "ripple period must be positive");
    }
}

double occupied_width(double symbol_rate, double roll_off)
{
    require(symbol_rate > 0.0, "symbol rate must be positive");
    require(roll_off >= 0.0 && roll_off <= 1.0, "roll-off must lie in [0, 1]");
    return (1.0 + roll_off) * symbol_rate;
}

double signal_psd(double offset, const SignalSpectrum& spectrum)
{
    const double sr = spectrum.symbol_rate;
    const double r = spectrum.roll_off;
    const double a = std::abs(offset);
    const double plateau = 1.0 / sr;

    if (r == 0.0) {
        // Rectangular limit; the band edge takes the midpoint value.
        if (a < sr / 2.0) {
            return plateau;
        }
        return a == sr / 2.0 ? plateau / 2.0 : 0.0;
    }

    const double inner = (1.0 - r) * sr / 2.0;
    const double outer = (1.0 + r) * sr / 2.0;
    if (a <= inner) {
        return plateau;
    }
    if (a >= outer) {
        return 0.0;
    }
    return plateau / 2.0 * (1.0 + std::cos(kPi / (r * sr) * (a - inner)));
}

double filter_power_response(double offset, const FilterElement& filter)
{
    const double x = 2.0 * offset / filter.bandwidth_3db;
    double t = std::exp(-kLn2 * std::pow(x * x, filter.order));
    if (filter.ripple && filter.ripple->amplitude_db > 0.0) {
        const auto& rp = *filter.ripple;
        const double s = std::sin(2.0 * kPi * offset / rp.period_ghz + rp.phase_rad);
        t *= std::pow(10.0, rp.amplitude_db * (s - 1.0) / 10.0);
    }
    return t;
}

double cascade_power_response(std::span<const FilterElement> filters, double f)
{
    double t = 1.0;
    for (const auto& fe : filters) {
        t *= filter_power_response(f - fe.center, fe);
    }
    return t;
}

double cascade_3db_width(std::span<const FilterElement> filters, double center)
{
    const double half = cascade_power_response(filters, center) / 2.0;
    if (filters.empty() || half <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }

    auto edge = [&](double dir) {
        double inside = 0.0;
        double outside = 1.0;
        while (cascade_power_response(filters, center + dir * outside) >= half) {
            inside = outside;
            outside *= 2.0;
            if (outside > 1e7) {
                return std::numeric_limits<double>::infinity();
            }
        }
        for (int i = 0; i < 200 && outside - inside > 1e-9; ++i) {
            const double mid = 0.5 * (inside + outside);
            if (cascade_power_response(filters, center + dir * mid) >= half) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        return 0.5 * (inside + outside);
    };
    return edge(-1.0) + edge(1.0);
}

double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 double resolution)
{
    if (!(hi > lo)) {
        return 0.0;
    }
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / resolution - 1e-9));
    const std::size_t n = std::max<std::size_t>(steps, 1);
    const double h = (hi - lo) / static_cast<double>(n);
    double sum = 0.5 * (fn(lo) + fn(hi));
    for (std::size_t i = 1; i < n; ++i) {
        sum += fn(lo + static_cast<double>(i) * h);
    }
    return sum * h;
}

double integrate_over_support(const SignalSpectrum& spectrum,
                              const std::function<double(double)>& fn, double resolution)
{
    const double half = spectrum.occupied_width() / 2.0;
    const auto k = static_cast<long>(std::ceil(half / resolution - 1e-9));
    double sum = 0.0;
    for (long i = -k; i <= k; ++i) {
        const double w = (i == -k || i == k) ? 0.5 : 1.0;
        sum += w * fn(spectrum.center + static_cast<double>(i) * resolution);
    }
    return sum * resolution;
}

double overlap_coefficient(const SignalSpectrum& victim, const SignalSpectrum& interferer,
                           double spacing, double resolution)
{
    victim.validate();
    interferer.validate();
    require(spacing >= 0.0, "spacing must be non-negative");
    if (resolution > std::min(victim.symbol_rate, interferer.symbol_rate) / 20.0) {
        throw ConfigError("integration resolution " + std::to_string(resolution) +
                          " GHz is too coarse for the overlap integral");
    }

    const double hv = victim.occupied_width() / 2.0;
    const double hi = interferer.occupied_width() / 2.0;
    const double lo = std::max(-hv, spacing - hi);
    const double up = std::min(hv, spacing + hi);
    if (!(up > lo)) {
        return 0.0;
    }

    auto sv = [&](double f) { return signal_psd(f, victim); };
    auto cross = [&](double f) { return sv(f) * signal_psd(f - spacing, interferer); };
    auto self = [&](double f) { const double s = sv(f); return s * s; };

    const double num = integrate(cross, lo, up, resolution);
    const double den = integrate(self, -hv, hv, resolution);
    return num / den;
}

}  // namespace osaas::spectral
