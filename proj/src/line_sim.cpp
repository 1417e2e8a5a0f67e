#include "osaas/line_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "osaas/hashing.hpp"

namespace osaas::linesim {

namespace {

constexpr double kSpanTolerance = 1e-9;

void require(bool cond, const std::string& what)
{
    if (!cond) {
        throw std::domain_error(what);
    }
}

double db_to_lin(double db)
{
    return std::pow(10.0, db / 10.0);
}

double noise_draw(const Scenario& s, double carrier, const ProbeConfig& probe, int trial)
{
    std::uint64_t key = mix64(s.seed);
    key = mix64(key ^ bits_of(carrier));
    key = mix64(key ^ fnv1a64(probe.id()));
    key = mix64(key ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(trial)));
    std::mt19937_64 gen(key);
    std::normal_distribution<double> normal(0.0, 1.0);
    return normal(gen);
}

struct BandIntegrals {
    double signal = 0.0;       // integral S
    double passed = 0.0;       // integral S*T
    double weighted = 0.0;     // integral S*T*g_local
};

BandIntegrals band_integrals(const Scenario& s, const spectral::SignalSpectrum& sp)
{
    BandIntegrals out;
    const double res = s.grid.resolution;
    out.signal = spectral::integrate_over_support(
        sp, [&](double f) { return spectral::signal_psd(f - sp.center, sp); }, res);
    out.passed = spectral::integrate_over_support(
        sp,
        [&](double f) {
            return spectral::signal_psd(f - sp.center, sp) *
                   spectral::cascade_power_response(s.filters, f);
        },
        res);
    out.weighted = spectral::integrate_over_support(
        sp,
        [&](double f) {
            return spectral::signal_psd(f - sp.center, sp) *
                   spectral::cascade_power_response(s.filters, f) *
                   db_to_lin(local_gsnr_db(s, f));
        },
        res);
    return out;
}

class SimulatedProbe final : public BlackBoxProbe {
public:
    explicit SimulatedProbe(std::shared_ptr<const Scenario> scenario)
        : scenario_(std::move(scenario))
    {
        scenario_->validate();
    }

    void set_carrier(double carrier_ghz) override { carrier_ = carrier_ghz; }

    void set_probe(const ProbeConfig& probe) override
    {
        probe.validate();
        probe_ = probe;
    }

    MeasurementResult read_q(int trial_index) override
    {
        if (!carrier_ || !probe_) {
            throw std::logic_error("set_carrier and set_probe must precede read_q");
        }
        return measure(*scenario_, *carrier_, *probe_, trial_index);
    }

    std::vector<MediaChannel> slots() const override { return scenario_->media_channels; }

private:
    std::shared_ptr<const Scenario> scenario_;
    std::optional<double> carrier_;
    std::optional<ProbeConfig> probe_;
};

}  // namespace

void Scenario::validate() const
{
    require(!media_channels.empty(), "scenario needs at least one media channel");
    for (const auto& mc : media_channels) {
        mc.validate();
    }
    for (const auto& fe : filters) {
        fe.validate();
    }
    require(std::isfinite(gsnr_profile.base_gsnr_db) && std::isfinite(gsnr_profile.tilt_db),
            "GSNR profile must be finite");
    for (const auto& rc : gsnr_profile.ripple) {
        require(rc.amplitude_db >= 0.0 && std::isfinite(rc.amplitude_db),
                "GSNR ripple amplitude must be >= 0");
        require(rc.period_ghz > 0.0, "GSNR ripple period must be positive");
        require(std::isfinite(rc.phase_rad), "GSNR ripple phase must be finite");
    }
    for (const auto& n : neighbors) {
        n.spectrum.validate();
        require(std::isfinite(n.power_offset_db), "neighbor power offset must be finite");
    }
    require(crosstalk_coupling >= 0.0, "crosstalk coupling must be >= 0");
    require(filtering_exponent >= 1.0, "filtering exponent must be >= 1");
    require(measurement_noise_sigma_db >= 0.0, "measurement noise sigma must be >= 0");
    grid.validate();
    require(grid.start <= span_lower() && grid.stop >= span_upper(),
            "frequency grid must cover every media channel");
    require(line_power_rule.sr_ref_gbd > 0.0, "line power rule reference rate must be positive");
    require(chain.fec_threshold_ber > 0.0 && chain.fec_threshold_ber < 0.5,
            "FEC threshold BER must lie in (0, 0.5)");
    require(chain.outage_ber > 0.0 && chain.outage_ber < 0.5, "outage BER must lie in (0, 0.5)");
}

double Scenario::span_lower() const
{
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& mc : media_channels) {
        lo = std::min(lo, mc.lower());
    }
    return lo;
}

double Scenario::span_upper() const
{
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& mc : media_channels) {
        hi = std::max(hi, mc.upper());
    }
    return hi;
}

double local_gsnr_db(const Scenario& scenario, double f)
{
    const auto& p = scenario.gsnr_profile;
    const double rel = f - scenario.span_center();
    double g = p.base_gsnr_db + p.tilt_db * rel / scenario.span_width();
    for (const auto& rc : p.ripple) {
        g += rc.amplitude_db * std::sin(2.0 * std::numbers::pi * rel / rc.period_ghz + rc.phase_rad);
    }
    return g;
}

double filter_transmission(const Scenario& scenario, const spectral::SignalSpectrum& spectrum)
{
    spectrum.validate();
    if (scenario.filters.empty()) {
        return 1.0;
    }
    const auto bi = band_integrals(scenario, spectrum);
    return std::clamp(bi.passed / bi.signal, 0.0, 1.0);
}

double filtering_penalty_db(const Scenario& scenario, const spectral::SignalSpectrum& spectrum)
{
    const double rho = filter_transmission(scenario, spectrum);
    if (rho <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return -scenario.filtering_exponent * 10.0 * std::log10(rho);
}

double crosstalk_lin(const Scenario& scenario, const spectral::SignalSpectrum& victim,
                     double victim_power_dbm)
{
    double sum = 0.0;
    for (const auto& n : scenario.neighbors) {
        const double pn = scenario.line_power_rule.power_dbm(n.spectrum.symbol_rate) +
                          n.power_offset_db;
        const double chi = spectral::overlap_coefficient(
            victim, n.spectrum, std::abs(n.spectrum.center - victim.center),
            scenario.grid.resolution);
        sum += db_to_lin(pn - victim_power_dbm) * chi;
    }
    return scenario.crosstalk_coupling * sum;
}

std::optional<double> effective_gsnr_db(const Scenario& scenario, double carrier,
                                        const ProbeConfig& probe)
{
    const auto sp = probe.spectrum_at(carrier);
    const auto bi = band_integrals(scenario, sp);
    if (!(bi.passed > 0.0)) {
        return std::nullopt;
    }
    const double rho = std::clamp(bi.passed / bi.signal, 0.0, 1.0);
    const double g_profile = bi.weighted / bi.passed;
    const double g_filtered = g_profile * std::pow(rho, scenario.filtering_exponent);
    const double xt = crosstalk_lin(scenario, sp, probe.power_rule.power_dbm(sp.symbol_rate));
    const double g = 1.0 / (1.0 / g_filtered + xt);
    return 10.0 * std::log10(g);
}

MeasurementResult measure(const Scenario& scenario, double carrier, const ProbeConfig& probe,
                          int trial_index)
{
    if (!std::isfinite(carrier) || carrier < scenario.span_lower() - kSpanTolerance ||
        carrier > scenario.span_upper() + kSpanTolerance) {
        throw std::domain_error("carrier " + std::to_string(carrier) +
                                " GHz lies outside the media channel span");
    }

    MeasurementResult out;
    out.carrier = carrier;
    out.probe_id = probe.id();
    out.trial_index = trial_index;

    const auto gsnr = effective_gsnr_db(scenario, carrier, probe);
    if (!gsnr) {
        return out;
    }
    const double snr_in_band = formats::denormalize_gsnr(*gsnr, probe.symbol_rate());
    const double ber = formats::ber_from_snr(probe.entry.format, snr_in_band);
    if (ber > scenario.chain.outage_ber) {
        return out;
    }

    double q = formats::q_db_from_ber(ber);
    if (scenario.measurement_noise_sigma_db > 0.0) {
        q += scenario.measurement_noise_sigma_db * noise_draw(scenario, carrier, probe, trial_index);
    }
    out.q_db = q;
    return out;
}

std::unique_ptr<BlackBoxProbe> open_session(std::shared_ptr<const Scenario> scenario)
{
    return std::make_unique<SimulatedProbe>(std::move(scenario));
}

SimulatedChannelBank::SimulatedChannelBank(std::shared_ptr<const Scenario> scenario)
    : scenario_(std::move(scenario))
{
    scenario_->validate();
}

std::vector<MediaChannel> SimulatedChannelBank::slots() const
{
    return scenario_->media_channels;
}

std::unique_ptr<BlackBoxProbe> SimulatedChannelBank::open_channel(
    std::size_t victim, std::span<const ChannelAssignment> assignments) const
{
    if (victim >= assignments.size()) {
        throw std::out_of_range("victim index outside the channel assignments");
    }
    auto lit = std::make_shared<Scenario>(*scenario_);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (i == victim) {
            continue;
        }
        const auto& a = assignments[i];
        const double sr = a.probe.symbol_rate();
        NeighborChannel n;
        n.spectrum = a.probe.spectrum_at(a.carrier);
        n.power_offset_db = a.probe.power_rule.power_dbm(sr) - lit->line_power_rule.power_dbm(sr);
        lit->neighbors.push_back(n);
    }
    return open_session(std::move(lit));
}

}  // namespace osaas::linesim
