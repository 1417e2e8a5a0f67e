#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osaas/black_box.hpp"
#include "osaas/formats.hpp"

// Sweep-and-probe measurement against a BlackBoxProbe. This module links
// against formats and the black-box interface only.

namespace osaas::probe {

inline constexpr double kDefaultStepGHz = 6.25;

struct SweepPlan {
    MediaChannel slot;
    std::vector<ProbeConfig> probes;
    double step = kDefaultStepGHz;
    int trials_per_point = 1;

    /// Slot start to slot end inclusive, wherever the step lands.
    std::vector<double> carriers() const;
    void validate() const;
};

struct SweepPoint {
    double carrier = 0.0;
    formats::GsnrSample sample = formats::GsnrSample::outage();
    std::optional<double> q_db;  // median raw reading

    bool operator==(const SweepPoint&) const = default;
};

struct ProbeCurve {
    ProbeConfig probe;
    std::vector<SweepPoint> points;

    std::size_t finite_count() const;
    bool operator==(const ProbeCurve&) const = default;
};

struct SweepResult {
    MediaChannel slot;
    double step = kDefaultStepGHz;
    int trials_per_point = 1;
    std::vector<ProbeCurve> curves;

    const ProbeCurve* find(const std::string& probe_id) const;
    bool operator==(const SweepResult&) const = default;
};

struct PointReading {
    formats::GsnrSample sample = formats::GsnrSample::outage();
    std::optional<double> q_db;
};

/// Median Q over `trials` readings mapped back through the probe's format
/// curve to normalized GSNR. Outage in a majority of trials gives an outage.
PointReading probe_point_reading(BlackBoxProbe& session, double carrier, const ProbeConfig& probe,
                                 int trials);

formats::GsnrSample probe_point(BlackBoxProbe& session, double carrier, const ProbeConfig& probe,
                                int trials);

/// Normalized GSNR implied by a Q reading for a given probe.
double gsnr_from_q(double q_db, const ProbeConfig& probe);

SweepResult run_sweep(BlackBoxProbe& session, const SweepPlan& plan);

struct CrosstalkRow {
    double offset = 0.0;
    std::vector<formats::GsnrSample> gsnr;           // one per slot
    std::vector<std::optional<double>> penalty_db;   // vs the aligned reading

    bool operator==(const CrosstalkRow&) const = default;
};

struct CrosstalkScan {
    std::vector<MediaChannel> slots;
    std::size_t center_index = 0;
    std::string center_probe;
    std::string side_probe;
    std::vector<formats::GsnrSample> reference;      // offset 0, aligned grid
    std::vector<CrosstalkRow> rows;

    bool operator==(const CrosstalkScan&) const = default;
};

/// Moves the middle carrier of an odd-sized slot bank by each offset while
/// the side carriers stay on their slot centers, and reads every channel
/// through its own session.
CrosstalkScan crosstalk_scan(const ChannelBank& bank, const ProbeConfig& center_probe,
                             const ProbeConfig& side_probe, std::span<const double> offsets,
                             int trials = 1);

/// -37.5 ... +37.5 GHz in 6.25 GHz steps for a 75 GHz slot.
std::vector<double> edge_to_edge_offsets(const MediaChannel& slot, double step = kDefaultStepGHz);

}  // namespace osaas::probe
