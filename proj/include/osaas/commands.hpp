#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "osaas/scenario_io.hpp"

// The pipelines behind each CLI subcommand. Every command returns a report
// document plus named CSV attachments; nothing here touches the filesystem
// except write_output().

namespace osaas::cmd {

std::string tool_version();

struct Overrides {
    std::optional<double> step;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
};

io::ScenarioFile apply_overrides(io::ScenarioFile file, const Overrides& o);

struct Output {
    io::json report;
    std::map<std::string, std::string> attachments;  // file name -> CSV text
};

probe::SweepResult run_scenario_sweep(const io::ScenarioFile& file);

Output sweep(const io::ScenarioFile& file);
Output diagnose(const io::ScenarioFile& file);
/// Re-diagnoses a sweep report without re-measuring; the embedded config
/// must hash to the recorded scenario_hash.
Output diagnose_report(const io::json& report);
Output crosstalk(const io::ScenarioFile& file);
Output recommend(const io::ScenarioFile& file,
                 const std::optional<std::vector<formats::CatalogEntry>>& catalog);

enum class Format { json, csv };

/// JSON: the report (attachments embedded) at `out`. CSV: `out` is a
/// directory that receives one file per attachment.
void write_output(const Output& output, const std::filesystem::path& out, Format format);

std::string render(const Output& output);

}  // namespace osaas::cmd
