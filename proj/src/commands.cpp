#include "osaas/commands.hpp"

#include <memory>
#include <system_error>

#include "osaas/line_sim.hpp"

namespace osaas::cmd {

namespace {

io::json envelope(const std::string& command, const io::ScenarioFile& file)
{
    return {{"tool", {{"name", "osaas"}, {"version", tool_version()}}},
            {"command", command},
            {"scenario_hash", io::scenario_hash(file)},
            {"config", io::to_json(file)}};
}

void attach(Output& out)
{
    io::json a = io::json::object();
    for (const auto& [name, text] : out.attachments) {
        a[name] = text;
    }
    out.report["attachments"] = a;
}

void add_sweep_csv(Output& out, const probe::SweepResult& sweep)
{
    for (const auto& c : sweep.curves) {
        out.attachments["sweep_" + c.probe.id() + ".csv"] = io::sweep_csv(c);
    }
}

void add_diagnosis_csv(Output& out, const diagnosis::DiagnosisReport& rep)
{
    for (const auto& pc : rep.penalty_curves) {
        out.attachments["penalty_" + pc.probe_id + ".csv"] = io::penalty_csv(pc);
    }
    out.attachments["pre_emphasis.csv"] = io::pre_emphasis_csv(rep.pre_emphasis);
    out.attachments["carrier_plan.csv"] = io::plan_csv(rep.carrier_plan);
}

Output diagnose_sweep(const io::ScenarioFile& file, const probe::SweepResult& sweep)
{
    Output out;
    out.report = envelope("diagnose", file);
    const auto catalog = file.effective_catalog();
    const auto rep = diagnosis::diagnose(sweep, catalog, file.diagnosis);
    out.report["sweep"] = io::to_json(sweep);
    out.report["diagnosis"] = io::to_json(rep);
    add_sweep_csv(out, sweep);
    add_diagnosis_csv(out, rep);
    attach(out);
    return out;
}

}  // namespace

std::string tool_version()
{
#ifdef OSAAS_VERSION
    return OSAAS_VERSION;
#else
    return "0.0.0";
#endif
}

io::ScenarioFile apply_overrides(io::ScenarioFile file, const Overrides& o)
{
    if (o.step) {
        if (!(*o.step > 0.0)) {
            throw io::ValidationError("--step: must be positive");
        }
        file.sweep.step = *o.step;
        if (file.crosstalk) {
            file.crosstalk->step = *o.step;
        }
    }
    if (o.trials) {
        if (*o.trials < 1) {
            throw io::ValidationError("--trials: must be >= 1");
        }
        file.sweep.trials_per_point = *o.trials;
        if (file.crosstalk) {
            file.crosstalk->trials = *o.trials;
        }
    }
    if (o.seed) {
        file.scenario.seed = *o.seed;
    }
    return file;
}

probe::SweepResult run_scenario_sweep(const io::ScenarioFile& file)
{
    auto session = linesim::open_session(std::make_shared<const linesim::Scenario>(file.scenario));
    return probe::run_sweep(*session, file.sweep_plan());
}

Output sweep(const io::ScenarioFile& file)
{
    Output out;
    out.report = envelope("sweep", file);
    const auto s = run_scenario_sweep(file);
    out.report["sweep"] = io::to_json(s);
    add_sweep_csv(out, s);
    attach(out);
    return out;
}

Output diagnose(const io::ScenarioFile& file)
{
    return diagnose_sweep(file, run_scenario_sweep(file));
}

Output diagnose_report(const io::json& report)
{
    if (!report.is_object() || !report.contains("config") || !report.contains("sweep")) {
        throw io::ValidationError("$: not a sweep report (needs config and sweep)");
    }
    const auto file = io::parse_scenario(report.at("config"));
    if (report.contains("scenario_hash") &&
        report.at("scenario_hash") != io::json(io::scenario_hash(file))) {
        throw io::ValidationError("$.scenario_hash: does not match the embedded config");
    }
    const auto s = io::sweep_from_json(report.at("sweep"), file.effective_catalog());
    return diagnose_sweep(file, s);
}

Output crosstalk(const io::ScenarioFile& file)
{
    if (!file.crosstalk) {
        throw io::ValidationError("$.crosstalk: scenario has no crosstalk section");
    }
    const auto& xs = *file.crosstalk;
    auto find = [&](const std::string& id) {
        for (const auto& p : file.probe_set) {
            if (p.id() == id) {
                return p;
            }
        }
        throw io::ValidationError("$.crosstalk: probe '" + id + "' missing");
    };
    linesim::SimulatedChannelBank bank(std::make_shared<const linesim::Scenario>(file.scenario));
    const auto& slots = file.scenario.media_channels;
    const auto offsets = probe::edge_to_edge_offsets(slots[slots.size() / 2], xs.step);
    const auto scan =
        probe::crosstalk_scan(bank, find(xs.center_probe), find(xs.side_probe), offsets, xs.trials);

    Output out;
    out.report = envelope("crosstalk", file);
    out.report["crosstalk"] = io::to_json(scan);
    out.attachments["crosstalk.csv"] = io::crosstalk_csv(scan);
    attach(out);
    return out;
}

Output recommend(const io::ScenarioFile& file,
                 const std::optional<std::vector<formats::CatalogEntry>>& catalog)
{
    const auto s = run_scenario_sweep(file);
    const auto entries = catalog ? *catalog : file.effective_catalog();
    const auto plan = diagnosis::recommend_carriers(s, entries, file.diagnosis.recommend_guard_ghz,
                                                    file.diagnosis.chain);
    Output out;
    out.report = envelope("recommend", file);
    io::json cat = io::json::array();
    for (const auto& e : entries) {
        cat.push_back(io::to_json(e));
    }
    out.report["catalog"] = cat;
    out.report["carrier_plan"] = io::to_json(plan);
    out.attachments["carrier_plan.csv"] = io::plan_csv(plan);
    attach(out);
    return out;
}

std::string render(const Output& output)
{
    return output.report.dump(2) + "\n";
}

void write_output(const Output& output, const std::filesystem::path& out, Format format)
{
    if (format == Format::json) {
        io::write_file_atomic(out, render(output));
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
        throw io::IoError("cannot create directory " + out.string());
    }
    for (const auto& [name, text] : output.attachments) {
        io::write_file_atomic(out / name, text);
    }
}

}  // namespace osaas::cmd
