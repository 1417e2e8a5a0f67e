#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "osaas/diagnosis.hpp"
#include "osaas/line_sim.hpp"
#include "osaas/probe_engine.hpp"

// Scenario and report files. Scenario files are strict JSON: unknown fields
// are rejected and every error names the offending field path.

namespace osaas::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Schema or invariant violation; `what()` starts with the field path.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepSettings {
    std::size_t slot_index = 0;
    double step = probe::kDefaultStepGHz;
    int trials_per_point = 1;

    bool operator==(const SweepSettings&) const = default;
};

struct CrosstalkSettings {
    std::string center_probe;
    std::string side_probe;
    double step = probe::kDefaultStepGHz;
    int trials = 1;

    bool operator==(const CrosstalkSettings&) const = default;
};

struct ScenarioFile {
    int schema_version = kSchemaVersion;
    std::string description;
    linesim::Scenario scenario;
    std::vector<formats::CatalogEntry> catalog;  // added to / replacing builtin entries by name
    std::vector<ProbeConfig> probe_set;
    SweepSettings sweep;
    std::optional<CrosstalkSettings> crosstalk;
    diagnosis::DiagnosisConfig diagnosis;

    std::vector<formats::CatalogEntry> effective_catalog() const;
    probe::SweepPlan sweep_plan() const;

    bool operator==(const ScenarioFile&) const = default;
};

/// Builtin entries first (in builtin order, overridden in place), then new ones.
std::vector<formats::CatalogEntry> merge_catalog(const std::vector<formats::CatalogEntry>& base,
                                                 const std::vector<formats::CatalogEntry>& extra);

ScenarioFile parse_scenario(const json& doc);
ScenarioFile parse_scenario_text(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);
json to_json(const ScenarioFile& file);

/// {"schema_version": 1, "catalog": [...]}
std::vector<formats::CatalogEntry> parse_catalog(const json& doc);
std::vector<formats::CatalogEntry> load_catalog(const std::filesystem::path& path);

/// FNV-1a over the compact canonical serialization, as 16 hex digits.
std::string scenario_hash(const ScenarioFile& file);

json to_json(const formats::CatalogEntry& entry);
json to_json(const probe::SweepResult& sweep);
probe::SweepResult sweep_from_json(const json& doc,
                                   const std::vector<formats::CatalogEntry>& catalog);
json to_json(const diagnosis::DiagnosisReport& report);
json to_json(const diagnosis::CarrierPlan& plan);
json to_json(const probe::CrosstalkScan& scan);

std::string sweep_csv(const probe::ProbeCurve& curve);       // carrier,gsnr_db,outage
std::string crosstalk_csv(const probe::CrosstalkScan& scan);  // one row per (offset, channel)
std::string penalty_csv(const diagnosis::PenaltyCurve& curve);
std::string pre_emphasis_csv(const std::vector<diagnosis::PreEmphasisPoint>& points);
std::string plan_csv(const diagnosis::CarrierPlan& plan);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace osaas::io
