#pragma once

#include <memory>
#include <string>

#include "osaas/formats.hpp"
#include "osaas/line_sim.hpp"
#include "osaas/probe_engine.hpp"

namespace testing_support {

inline osaas::ProbeConfig probe(const std::string& name, double roll_off = 0.19)
{
    const auto cat = osaas::formats::builtin_catalog();
    return {osaas::formats::find_entry(cat, name).value(), roll_off, {}};
}

inline osaas::ProbeConfig qpsk69() { return probe("200G-DP-QPSK-69GBd"); }
inline osaas::ProbeConfig hyb46() { return probe("200G-DP-P-16QAM-46GBd"); }
inline osaas::ProbeConfig qam34() { return probe("200G-DP-16QAM-34GBd"); }
inline osaas::ProbeConfig qpsk34() { return probe("100G-DP-QPSK-34GBd"); }

/// One media channel, flat profile, no filters, no neighbors, sigma 0.
inline osaas::linesim::Scenario flat(double center = 193500.0, double width = 100.0,
                                     double g0 = 20.0)
{
    osaas::linesim::Scenario s;
    s.media_channels = {{center, width, 0.0}};
    s.gsnr_profile.base_gsnr_db = g0;
    s.measurement_noise_sigma_db = 0.0;
    s.grid = {center - width / 2.0, center + width / 2.0, 0.05};
    return s;
}

inline osaas::probe::SweepResult sweep(const osaas::linesim::Scenario& s,
                                       std::vector<osaas::ProbeConfig> probes, int trials = 1,
                                       double step = 6.25)
{
    auto session = osaas::linesim::open_session(std::make_shared<const osaas::linesim::Scenario>(s));
    osaas::probe::SweepPlan plan;
    plan.slot = s.media_channels.front();
    plan.probes = std::move(probes);
    plan.step = step;
    plan.trials_per_point = trials;
    return osaas::probe::run_sweep(*session, plan);
}

}  // namespace testing_support
