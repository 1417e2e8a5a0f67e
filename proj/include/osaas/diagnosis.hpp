#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "osaas/formats.hpp"
#include "osaas/probe_engine.hpp"

// Turns sweep curves into findings about the media channel.

namespace osaas::diagnosis {

class UndiagnosableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProbePeak {
    std::string probe_id;
    double peak = 0.0;     // GHz, absolute
    double weight = 0.0;   // squared second difference of the top three points
};

struct CenterOffset {
    double offset = 0.0;   // GHz, signed, relative to the nominal slot center
    bool low_confidence = false;
    std::vector<ProbePeak> peaks;
};

/// Parabola through the top three points of each probe curve; the offsets of
/// the vertices are averaged with curvature-squared weights.
CenterOffset estimate_center_offset(const probe::SweepResult& sweep,
                                    double penalty_threshold_db = 0.5);

struct EffectiveBandwidth {
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double threshold_db = 0.5;
    std::string probe_id;          // narrowest probe used for the upper bound
    bool filter_limited = true;    // false when the flat range spans the whole sweep
    bool degenerate = false;       // only one finite point
};

EffectiveBandwidth estimate_effective_bandwidth(const probe::SweepResult& sweep,
                                                double penalty_threshold_db = 0.5);

struct TiltRipple {
    double tilt_db = 0.0;
    double ripple_pp_db = 0.0;
    std::string probe_id;
};

/// Curve used for tilt, ripple and pre-emphasis: the widest probe with at
/// least 80% finite samples, else the narrowest one.
const probe::ProbeCurve& reference_curve(const probe::SweepResult& sweep);

TiltRipple estimate_tilt_ripple(const probe::SweepResult& sweep);

struct PlannedCarrier {
    double center = 0.0;
    formats::CatalogEntry entry;
    double predicted_min_gsnr_db = 0.0;
    double required_gsnr_db = 0.0;
    double margin_db = 0.0;  // predicted minus required, >= 0
};

struct Shortfall {
    std::string entry;
    std::optional<double> best_margin_db;  // empty when never evaluable
};

struct CarrierPlan {
    double guard_ghz = 0.0;
    std::vector<PlannedCarrier> carriers;
    std::vector<Shortfall> shortfalls;  // filled when the plan is empty
};

/// Lowest normalized GSNR a carrier of `entry` would see when centered at
/// `center`, read off the sweep curve of the probe with the nearest symbol
/// rate. Empty when the band leaves the sweep or touches an outage.
std::optional<double> predicted_min_gsnr(const probe::SweepResult& sweep,
                                         const formats::CatalogEntry& entry, double roll_off,
                                         double center);

CarrierPlan recommend_carriers(const probe::SweepResult& sweep,
                               std::span<const formats::CatalogEntry> catalog, double guard_ghz,
                               const formats::ChainConfig& chain = {}, double roll_off = 0.19);

/// Worst-case penalty (dB) of two equal-power carriers at `spacing` on a link
/// of the given normalized GSNR, either one taken as victim.
double pairwise_crosstalk_penalty_db(const ProbeConfig& a, const ProbeConfig& b, double spacing,
                                     double link_gsnr_db,
                                     double resolution = spectral::kDefaultResolutionGHz);

struct GuardBand {
    std::string probe_a;
    std::string probe_b;
    double min_spacing_ghz = 0.0;  // smallest center spacing meeting the penalty cap
    double guard_ghz = 0.0;        // spacing beyond the two nominal half-widths (SR/2), >= 0
};

GuardBand guard_band(const ProbeConfig& a, const ProbeConfig& b, double max_penalty_db,
                     double link_gsnr_db, double resolution = spectral::kDefaultResolutionGHz);

struct PreEmphasisPoint {
    double frequency = 0.0;
    double offset_db = 0.0;
};

std::vector<PreEmphasisPoint> pre_emphasis(const probe::SweepResult& sweep, double clip_db = 3.0);

struct PenaltyCurve {
    std::string probe_id;
    std::vector<double> carriers;
    std::vector<std::optional<double>> penalty_db;  // peak minus reading
};

std::vector<PenaltyCurve> penalty_curves(const probe::SweepResult& sweep);

struct DiagnosisConfig {
    double penalty_threshold_db = 0.5;
    double guard_max_penalty_db = 0.1;
    double pre_emphasis_clip_db = 3.0;
    double recommend_guard_ghz = 0.0;
    std::optional<double> guard_link_gsnr_db;  // empty: best finite reading of the sweep
    formats::ChainConfig chain;

    bool operator==(const DiagnosisConfig&) const = default;
};

struct DiagnosisReport {
    DiagnosisConfig config;
    std::optional<EffectiveBandwidth> effective_bandwidth;
    std::optional<CenterOffset> center_offset;
    std::optional<TiltRipple> tilt_ripple;
    std::vector<PenaltyCurve> penalty_curves;
    CarrierPlan carrier_plan;
    std::vector<GuardBand> guard_bands;
    std::vector<PreEmphasisPoint> pre_emphasis;
    std::vector<std::string> notes;  // estimators that could not run, and why
};

/// Runs every estimator; individual undiagnosable sections are recorded in
/// `notes`. Throws UndiagnosableError when no curve has a finite sample.
DiagnosisReport diagnose(const probe::SweepResult& sweep,
                         std::span<const formats::CatalogEntry> catalog,
                         const DiagnosisConfig& config = {});

}  // namespace osaas::diagnosis
