#include "osaas/probe_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace osaas::probe {

namespace {

constexpr double kEdgeTolerance = 1e-9;

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) {
        return v[n / 2];
    }
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<double> SweepPlan::carriers() const
{
    const double start = slot.lower();
    const auto steps = static_cast<std::size_t>(std::floor(slot.width / step + kEdgeTolerance));
    std::vector<double> out;
    out.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        out.push_back(start + static_cast<double>(k) * step);
    }
    return out;
}

void SweepPlan::validate() const
{
    slot.validate();
    if (probes.empty()) {
        throw ConfigError("sweep plan needs at least one probe configuration");
    }
    if (!(step > 0.0)) {
        throw ConfigError("sweep step must be positive");
    }
    if (trials_per_point < 1) {
        throw ConfigError("trials per point must be >= 1");
    }
    for (const auto& p : probes) {
        p.validate();
    }
}

std::size_t ProbeCurve::finite_count() const
{
    return static_cast<std::size_t>(std::count_if(
        points.begin(), points.end(), [](const SweepPoint& p) { return !p.sample.is_outage(); }));
}

const ProbeCurve* SweepResult::find(const std::string& probe_id) const
{
    for (const auto& c : curves) {
        if (c.probe.id() == probe_id) {
            return &c;
        }
    }
    return nullptr;
}

double gsnr_from_q(double q_db, const ProbeConfig& probe)
{
    const double ber = std::max(formats::ber_from_q_db(q_db), std::numeric_limits<double>::min());
    const auto snr = formats::snr_from_ber(probe.entry.format, std::min(ber, 0.5 - 1e-15));
    return formats::normalize_gsnr(snr.snr_db, probe.symbol_rate());
}

PointReading probe_point_reading(BlackBoxProbe& session, double carrier, const ProbeConfig& probe,
                                 int trials)
{
    if (trials < 1) {
        throw ConfigError("trials per point must be >= 1");
    }
    session.set_carrier(carrier);
    session.set_probe(probe);

    std::vector<double> qs;
    int outages = 0;
    for (int t = 0; t < trials; ++t) {
        const auto r = session.read_q(t);
        if (r.outage()) {
            ++outages;
        } else {
            qs.push_back(*r.q_db);
        }
    }

    PointReading out;
    if (2 * outages > trials || qs.empty()) {
        return out;
    }
    const double q = median(std::move(qs));
    out.q_db = q;
    out.sample = formats::GsnrSample::value(gsnr_from_q(q, probe));
    return out;
}

formats::GsnrSample probe_point(BlackBoxProbe& session, double carrier, const ProbeConfig& probe,
                                int trials)
{
    return probe_point_reading(session, carrier, probe, trials).sample;
}

SweepResult run_sweep(BlackBoxProbe& session, const SweepPlan& plan)
{
    plan.validate();
    SweepResult result;
    result.slot = plan.slot;
    result.step = plan.step;
    result.trials_per_point = plan.trials_per_point;

    const auto carriers = plan.carriers();
    for (const auto& probe : plan.probes) {
        ProbeCurve curve;
        curve.probe = probe;
        curve.points.reserve(carriers.size());
        for (double c : carriers) {
            const auto r = probe_point_reading(session, c, probe, plan.trials_per_point);
            curve.points.push_back({c, r.sample, r.q_db});
        }
        result.curves.push_back(std::move(curve));
    }
    return result;
}

std::vector<double> edge_to_edge_offsets(const MediaChannel& slot, double step)
{
    const auto half_steps = static_cast<long>(std::floor(slot.width / 2.0 / step + kEdgeTolerance));
    std::vector<double> out;
    for (long k = -half_steps; k <= half_steps; ++k) {
        out.push_back(static_cast<double>(k) * step);
    }
    return out;
}

CrosstalkScan crosstalk_scan(const ChannelBank& bank, const ProbeConfig& center_probe,
                             const ProbeConfig& side_probe, std::span<const double> offsets,
                             int trials)
{
    center_probe.validate();
    side_probe.validate();
    CrosstalkScan scan;
    scan.slots = bank.slots();
    if (scan.slots.size() < 3 || scan.slots.size() % 2 == 0) {
        throw ConfigError("crosstalk scan needs an odd number (>= 3) of adjacent slots");
    }
    for (const auto& s : scan.slots) {
        s.validate();
    }
    scan.center_index = scan.slots.size() / 2;
    scan.center_probe = center_probe.id();
    scan.side_probe = side_probe.id();

    const auto& middle = scan.slots[scan.center_index];
    for (double off : offsets) {
        if (!std::isfinite(off) || std::abs(off) > middle.width / 2.0 + kEdgeTolerance) {
            throw std::domain_error("offset " + std::to_string(off) +
                                    " GHz leaves the middle slot");
        }
    }

    auto read_all = [&](double offset) {
        std::vector<ChannelAssignment> lit;
        for (std::size_t i = 0; i < scan.slots.size(); ++i) {
            const bool mid = i == scan.center_index;
            lit.push_back({scan.slots[i].center + (mid ? offset : 0.0),
                           mid ? center_probe : side_probe});
        }
        std::vector<formats::GsnrSample> g;
        for (std::size_t i = 0; i < lit.size(); ++i) {
            auto session = bank.open_channel(i, lit);
            g.push_back(probe_point(*session, lit[i].carrier, lit[i].probe, trials));
        }
        return g;
    };

    scan.reference = read_all(0.0);
    for (double off : offsets) {
        CrosstalkRow row;
        row.offset = off;
        row.gsnr = off == 0.0 ? scan.reference : read_all(off);
        for (std::size_t i = 0; i < row.gsnr.size(); ++i) {
            if (row.gsnr[i].is_outage() || scan.reference[i].is_outage()) {
                row.penalty_db.emplace_back();
            } else {
                row.penalty_db.emplace_back(scan.reference[i].gsnr_db() - row.gsnr[i].gsnr_db());
            }
        }
        scan.rows.push_back(std::move(row));
    }
    return scan;
}

}  // namespace osaas::probe
