// osaas: sweep-and-probe assessment of a spectrum service from the command line.
//
// Exit codes: 0 ok, 2 validation error, 3 undiagnosable, 4 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "osaas/commands.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kUndiagnosable = 3, kIo = 4 };

struct Args {
    std::string scenario;
    std::string report;
    std::string out;
    std::string catalog;
    std::string format = "json";
    std::optional<double> step;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Args& a, bool needs_out)
{
    sub->add_option("--scenario", a.scenario, "scenario JSON file");
    auto* out = sub->add_option("--out", a.out, "report file (json) or directory (csv)");
    if (needs_out) {
        out->required();
    }
    sub->add_option("--step", a.step, "sweep step in GHz");
    sub->add_option("--trials", a.trials, "readings per sweep point");
    sub->add_option("--seed-override", a.seed, "replace the scenario seed");
    sub->add_option("--format", a.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

osaas::io::ScenarioFile scenario(const Args& a)
{
    if (a.scenario.empty()) {
        throw osaas::io::ValidationError("--scenario is required");
    }
    return osaas::cmd::apply_overrides(osaas::io::load_scenario(a.scenario),
                                       {a.step, a.trials, a.seed});
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Optical spectrum service assessment by sweep-and-probe"};
    app.set_version_flag("--version", osaas::cmd::tool_version());
    app.require_subcommand(1);

    Args a;
    auto* sweep = app.add_subcommand("sweep", "sweep every probe across the slot");
    add_common(sweep, a, true);
    auto* diag = app.add_subcommand("diagnose", "sweep (or reuse a sweep report) and diagnose");
    add_common(diag, a, true);
    diag->add_option("--report", a.report, "existing sweep report instead of --scenario");
    auto* xt = app.add_subcommand("crosstalk", "move the middle carrier of a slot bank");
    add_common(xt, a, true);
    auto* rec = app.add_subcommand("recommend", "greedy carrier plan for the swept slot");
    add_common(rec, a, true);
    rec->add_option("--catalog", a.catalog, "catalog JSON replacing the scenario catalog");
    auto* val = app.add_subcommand("validate", "check a scenario file and exit");
    add_common(val, a, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    const auto fmt = a.format == "csv" ? osaas::cmd::Format::csv : osaas::cmd::Format::json;
    try {
        osaas::cmd::Output out;
        if (*sweep) {
            out = osaas::cmd::sweep(scenario(a));
        } else if (*diag) {
            if (!a.report.empty()) {
                const auto doc = nlohmann::json::parse(osaas::io::read_file(a.report));
                out = osaas::cmd::diagnose_report(doc);
            } else {
                out = osaas::cmd::diagnose(scenario(a));
            }
        } else if (*xt) {
            out = osaas::cmd::crosstalk(scenario(a));
        } else if (*rec) {
            std::optional<std::vector<osaas::formats::CatalogEntry>> cat;
            if (!a.catalog.empty()) {
                cat = osaas::io::load_catalog(a.catalog);
            }
            out = osaas::cmd::recommend(scenario(a), cat);
        } else {
            const auto f = scenario(a);
            std::cout << "ok " << osaas::io::scenario_hash(f) << "\n";
            return kOk;
        }
        osaas::cmd::write_output(out, a.out, fmt);
    } catch (const osaas::io::IoError& e) {
        std::cerr << "osaas: " << e.what() << "\n";
        return kIo;
    } catch (const osaas::diagnosis::UndiagnosableError& e) {
        std::cerr << "osaas: undiagnosable: " << e.what() << "\n";
        return kUndiagnosable;
    } catch (const osaas::io::ValidationError& e) {
        std::cerr << "osaas: invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "osaas: invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "osaas: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
