#include "osaas/scenario_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "osaas/hashing.hpp"

namespace osaas::io {

namespace {

// Tracks which keys of an object were read so leftovers can be rejected.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) {
            throw ValidationError(path_ + ": expected an object");
        }
    }

    const std::string& path() const { return path_; }
    std::string at(const std::string& key) const { return path_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json* child(const std::string& key)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& required(const std::string& key)
    {
        const json* c = child(key);
        if (!c) {
            throw ValidationError(at(key) + ": missing required field");
        }
        return *c;
    }

    double number(const std::string& key) { return as_number(required(key), at(key)); }
    double number(const std::string& key, double fallback)
    {
        const json* c = child(key);
        return c ? as_number(*c, at(key)) : fallback;
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback)
    {
        const json* c = child(key);
        if (!c) {
            return fallback;
        }
        if (!c->is_number_integer()) {
            throw ValidationError(at(key) + ": expected an integer");
        }
        return c->get<std::int64_t>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback)
    {
        const json* c = child(key);
        if (!c) {
            return fallback;
        }
        if (!c->is_number_unsigned() && !(c->is_number_integer() && c->get<std::int64_t>() >= 0)) {
            throw ValidationError(at(key) + ": expected a non-negative integer");
        }
        return c->get<std::uint64_t>();
    }

    std::string string(const std::string& key)
    {
        const json& c = required(key);
        if (!c.is_string()) {
            throw ValidationError(at(key) + ": expected a string");
        }
        return c.get<std::string>();
    }

    std::string string(const std::string& key, const std::string& fallback)
    {
        if (!has(key)) {
            seen_.insert(key);
            return fallback;
        }
        return string(key);
    }

    const json* array(const std::string& key)
    {
        const json* c = child(key);
        if (c && !c->is_array()) {
            throw ValidationError(at(key) + ": expected an array");
        }
        return c;
    }

    void finish() const
    {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) {
                throw ValidationError(at(item.key()) + ": unknown field");
            }
        }
    }

    static double as_number(const json& v, const std::string& path)
    {
        if (!v.is_number()) {
            throw ValidationError(path + ": expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ValidationError(path + ": expected a finite number");
        }
        return d;
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
void checked(const std::string& path, F&& fn)
{
    try {
        fn();
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string index_path(const std::string& base, std::size_t i)
{
    return base + "[" + std::to_string(i) + "]";
}

MediaChannel parse_media_channel(const json& j, const std::string& path)
{
    Reader r(j, path);
    MediaChannel mc;
    mc.center = r.number("center_ghz");
    mc.width = r.number("width_ghz");
    mc.guard_band_each_side = r.number("guard_band_each_side_ghz", 0.0);
    r.finish();
    checked(path, [&] { mc.validate(); });
    return mc;
}

json media_channel_json(const MediaChannel& mc)
{
    return {{"center_ghz", mc.center},
            {"width_ghz", mc.width},
            {"guard_band_each_side_ghz", mc.guard_band_each_side}};
}

spectral::FilterElement parse_filter(const json& j, const std::string& path)
{
    Reader r(j, path);
    spectral::FilterElement f;
    f.name = r.string("name", "");
    f.center = r.number("center_ghz");
    f.bandwidth_3db = r.number("bandwidth_3db_ghz");
    f.order = static_cast<int>(r.integer("order", 1));
    if (const json* rip = r.child("ripple")) {
        Reader rr(*rip, r.at("ripple"));
        spectral::FilterRipple fr;
        fr.amplitude_db = rr.number("amplitude_db");
        fr.period_ghz = rr.number("period_ghz");
        fr.phase_rad = rr.number("phase_rad", 0.0);
        rr.finish();
        f.ripple = fr;
    }
    r.finish();
    checked(path, [&] { f.validate(); });
    return f;
}

json filter_json(const spectral::FilterElement& f)
{
    json j = {{"name", f.name},
              {"center_ghz", f.center},
              {"bandwidth_3db_ghz", f.bandwidth_3db},
              {"order", f.order}};
    if (f.ripple) {
        j["ripple"] = {{"amplitude_db", f.ripple->amplitude_db},
                       {"period_ghz", f.ripple->period_ghz},
                       {"phase_rad", f.ripple->phase_rad}};
    }
    return j;
}

PowerRule parse_power_rule(const json* j, const std::string& path)
{
    PowerRule p;
    if (!j) {
        return p;
    }
    Reader r(*j, path);
    p.p_ref_dbm = r.number("p_ref_dbm", p.p_ref_dbm);
    p.sr_ref_gbd = r.number("sr_ref_gbd", p.sr_ref_gbd);
    r.finish();
    if (!(p.sr_ref_gbd > 0.0)) {
        throw ValidationError(path + ".sr_ref_gbd: reference rate must be positive");
    }
    return p;
}

json power_rule_json(const PowerRule& p)
{
    return {{"p_ref_dbm", p.p_ref_dbm}, {"sr_ref_gbd", p.sr_ref_gbd}};
}

linesim::Scenario parse_line(const json& j, const std::string& path)
{
    Reader r(j, path);
    linesim::Scenario s;

    const json* mcs = r.array("media_channels");
    if (!mcs || mcs->empty()) {
        throw ValidationError(r.at("media_channels") + ": at least one media channel is required");
    }
    for (std::size_t i = 0; i < mcs->size(); ++i) {
        s.media_channels.push_back(
            parse_media_channel((*mcs)[i], index_path(r.at("media_channels"), i)));
    }

    if (const json* fs = r.array("filters")) {
        for (std::size_t i = 0; i < fs->size(); ++i) {
            s.filters.push_back(parse_filter((*fs)[i], index_path(r.at("filters"), i)));
        }
    }

    if (const json* gp = r.child("gsnr_profile")) {
        Reader g(*gp, r.at("gsnr_profile"));
        s.gsnr_profile.base_gsnr_db = g.number("base_gsnr_db");
        s.gsnr_profile.tilt_db = g.number("tilt_db", 0.0);
        if (const json* rip = g.array("ripple")) {
            for (std::size_t i = 0; i < rip->size(); ++i) {
                Reader rr((*rip)[i], index_path(g.at("ripple"), i));
                linesim::RippleComponent rc;
                rc.amplitude_db = rr.number("amplitude_db");
                rc.period_ghz = rr.number("period_ghz");
                rc.phase_rad = rr.number("phase_rad", 0.0);
                rr.finish();
                s.gsnr_profile.ripple.push_back(rc);
            }
        }
        g.finish();
    }

    if (const json* ns = r.array("neighbors")) {
        for (std::size_t i = 0; i < ns->size(); ++i) {
            const std::string np = index_path(r.at("neighbors"), i);
            Reader nr((*ns)[i], np);
            linesim::NeighborChannel n;
            n.spectrum.symbol_rate = nr.number("symbol_rate_gbd");
            n.spectrum.roll_off = nr.number("roll_off");
            n.spectrum.center = nr.number("center_ghz");
            n.power_offset_db = nr.number("power_offset_db", 0.0);
            nr.finish();
            checked(np, [&] { n.spectrum.validate(); });
            s.neighbors.push_back(n);
        }
    }

    s.crosstalk_coupling = r.number("crosstalk_coupling", s.crosstalk_coupling);
    s.filtering_exponent = r.number("filtering_exponent", s.filtering_exponent);
    s.measurement_noise_sigma_db =
        r.number("measurement_noise_sigma_db", s.measurement_noise_sigma_db);
    s.seed = r.unsigned_integer("seed", 0);

    if (const json* g = r.child("grid")) {
        Reader gr(*g, r.at("grid"));
        s.grid.start = gr.number("start_ghz");
        s.grid.stop = gr.number("stop_ghz");
        s.grid.resolution = gr.number("resolution_ghz", spectral::kDefaultResolutionGHz);
        gr.finish();
    } else {
        s.grid.start = s.span_lower();
        s.grid.stop = s.span_upper();
    }
    s.line_power_rule = parse_power_rule(r.child("line_power_rule"), r.at("line_power_rule"));

    if (const json* c = r.child("chain")) {
        Reader cr(*c, r.at("chain"));
        s.chain.fec_threshold_ber = cr.number("fec_threshold_ber", s.chain.fec_threshold_ber);
        s.chain.outage_ber = cr.number("outage_ber", s.chain.outage_ber);
        cr.finish();
    }
    r.finish();
    checked(path, [&] { s.validate(); });
    return s;
}

json line_json(const linesim::Scenario& s)
{
    json mcs = json::array();
    for (const auto& mc : s.media_channels) {
        mcs.push_back(media_channel_json(mc));
    }
    json fs = json::array();
    for (const auto& f : s.filters) {
        fs.push_back(filter_json(f));
    }
    json rip = json::array();
    for (const auto& rc : s.gsnr_profile.ripple) {
        rip.push_back({{"amplitude_db", rc.amplitude_db},
                       {"period_ghz", rc.period_ghz},
                       {"phase_rad", rc.phase_rad}});
    }
    json ns = json::array();
    for (const auto& n : s.neighbors) {
        ns.push_back({{"symbol_rate_gbd", n.spectrum.symbol_rate},
                      {"roll_off", n.spectrum.roll_off},
                      {"center_ghz", n.spectrum.center},
                      {"power_offset_db", n.power_offset_db}});
    }
    return {{"media_channels", mcs},
            {"filters", fs},
            {"gsnr_profile",
             {{"base_gsnr_db", s.gsnr_profile.base_gsnr_db},
              {"tilt_db", s.gsnr_profile.tilt_db},
              {"ripple", rip}}},
            {"neighbors", ns},
            {"crosstalk_coupling", s.crosstalk_coupling},
            {"filtering_exponent", s.filtering_exponent},
            {"measurement_noise_sigma_db", s.measurement_noise_sigma_db},
            {"seed", s.seed},
            {"grid",
             {{"start_ghz", s.grid.start},
              {"stop_ghz", s.grid.stop},
              {"resolution_ghz", s.grid.resolution}}},
            {"line_power_rule", power_rule_json(s.line_power_rule)},
            {"chain",
             {{"fec_threshold_ber", s.chain.fec_threshold_ber},
              {"outage_ber", s.chain.outage_ber}}}};
}

formats::CatalogEntry parse_entry(const json& j, const std::string& path)
{
    Reader r(j, path);
    formats::CatalogEntry e;
    e.name = r.string("name");
    const std::string fmt = r.string("format");
    const auto f = formats::format_by_name(fmt);
    if (!f) {
        throw ValidationError(r.at("format") + ": unknown modulation format '" + fmt + "'");
    }
    e.format = *f;
    e.symbol_rate = r.number("symbol_rate_gbd");
    e.net_data_rate = r.number("net_data_rate_gbps");
    e.margin_db = r.number("margin_db", e.margin_db);
    r.finish();
    checked(path, [&] { e.validate(); });
    return e;
}

std::vector<formats::CatalogEntry> parse_entries(const json* arr, const std::string& path)
{
    std::vector<formats::CatalogEntry> out;
    if (!arr) {
        return out;
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < arr->size(); ++i) {
        auto e = parse_entry((*arr)[i], index_path(path, i));
        if (!names.insert(e.name).second) {
            throw ValidationError(index_path(path, i) + ".name: duplicate entry '" + e.name + "'");
        }
        out.push_back(std::move(e));
    }
    return out;
}

ProbeConfig parse_probe(const json& j, const std::string& path,
                        const std::vector<formats::CatalogEntry>& catalog)
{
    Reader r(j, path);
    ProbeConfig p;
    const std::string name = r.string("entry");
    const auto e = formats::find_entry(catalog, name);
    if (!e) {
        throw ValidationError(r.at("entry") + ": '" + name + "' is not in the catalog");
    }
    p.entry = *e;
    p.roll_off = r.number("roll_off", p.roll_off);
    p.power_rule = parse_power_rule(r.child("power_rule"), r.at("power_rule"));
    r.finish();
    checked(path, [&] { p.validate(); });
    return p;
}

json probe_json(const ProbeConfig& p)
{
    return {{"entry", p.entry.name},
            {"roll_off", p.roll_off},
            {"power_rule", power_rule_json(p.power_rule)}};
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::string num(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string num(const std::optional<double>& v)
{
    return v ? num(*v) : std::string();
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_text(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ValidationError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                              ": malformed JSON (" + e.what() + ")");
    }
}

void check_version(Reader& r)
{
    const json& v = r.required("schema_version");
    if (!v.is_number_integer() || v.get<std::int64_t>() != kSchemaVersion) {
        throw ValidationError(r.at("schema_version") + ": unsupported schema version " + v.dump() +
                              " (supported: " + std::to_string(kSchemaVersion) + ")");
    }
}

}  // namespace

std::vector<formats::CatalogEntry> merge_catalog(const std::vector<formats::CatalogEntry>& base,
                                                 const std::vector<formats::CatalogEntry>& extra)
{
    auto out = base;
    for (const auto& e : extra) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const formats::CatalogEntry& b) { return b.name == e.name; });
        if (it != out.end()) {
            *it = e;
        } else {
            out.push_back(e);
        }
    }
    return out;
}

std::vector<formats::CatalogEntry> ScenarioFile::effective_catalog() const
{
    return merge_catalog(formats::builtin_catalog(), catalog);
}

probe::SweepPlan ScenarioFile::sweep_plan() const
{
    probe::SweepPlan plan;
    plan.slot = scenario.media_channels.at(sweep.slot_index);
    plan.probes = probe_set;
    plan.step = sweep.step;
    plan.trials_per_point = sweep.trials_per_point;
    return plan;
}

ScenarioFile parse_scenario(const json& doc)
{
    Reader r(doc, "$");
    check_version(r);
    ScenarioFile f;
    f.description = r.string("description", "");
    f.catalog = parse_entries(r.array("catalog"), r.at("catalog"));
    f.scenario = parse_line(r.required("scenario"), r.at("scenario"));
    const auto catalog = f.effective_catalog();

    const json* ps = r.array("probe_set");
    if (!ps || ps->empty()) {
        throw ValidationError(r.at("probe_set") + ": at least one probe is required");
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < ps->size(); ++i) {
        const auto path = index_path(r.at("probe_set"), i);
        auto p = parse_probe((*ps)[i], path, catalog);
        if (!ids.insert(p.id()).second) {
            throw ValidationError(path + ".entry: probe '" + p.id() + "' listed twice");
        }
        f.probe_set.push_back(std::move(p));
    }

    if (const json* sw = r.child("sweep")) {
        Reader sr(*sw, r.at("sweep"));
        const auto slot = sr.integer("slot_index", 0);
        if (slot < 0 || static_cast<std::size_t>(slot) >= f.scenario.media_channels.size()) {
            throw ValidationError(sr.at("slot_index") + ": no media channel with index " +
                                  std::to_string(slot));
        }
        f.sweep.slot_index = static_cast<std::size_t>(slot);
        f.sweep.step = sr.number("step_ghz", f.sweep.step);
        f.sweep.trials_per_point = static_cast<int>(sr.integer("trials_per_point", 1));
        sr.finish();
        if (!(f.sweep.step > 0.0)) {
            throw ValidationError(sr.at("step_ghz") + ": step must be positive");
        }
        if (f.sweep.trials_per_point < 1) {
            throw ValidationError(sr.at("trials_per_point") + ": must be >= 1");
        }
    }

    if (const json* xt = r.child("crosstalk")) {
        Reader xr(*xt, r.at("crosstalk"));
        CrosstalkSettings cs;
        cs.center_probe = xr.string("center_probe");
        cs.side_probe = xr.string("side_probe");
        cs.step = xr.number("step_ghz", cs.step);
        cs.trials = static_cast<int>(xr.integer("trials", 1));
        xr.finish();
        for (const auto& [key, id] : {std::pair{"center_probe", cs.center_probe},
                                      std::pair{"side_probe", cs.side_probe}}) {
            if (!ids.count(id)) {
                throw ValidationError(xr.at(key) + ": '" + id + "' is not in probe_set");
            }
        }
        const auto n = f.scenario.media_channels.size();
        if (n < 3 || n % 2 == 0) {
            throw ValidationError(xr.path() + ": needs an odd number (>= 3) of media channels");
        }
        if (!(cs.step > 0.0) || cs.trials < 1) {
            throw ValidationError(xr.path() + ": step must be positive and trials >= 1");
        }
        f.crosstalk = cs;
    }

    if (const json* d = r.child("diagnosis")) {
        Reader dr(*d, r.at("diagnosis"));
        auto& c = f.diagnosis;
        c.penalty_threshold_db = dr.number("penalty_threshold_db", c.penalty_threshold_db);
        c.guard_max_penalty_db = dr.number("guard_max_penalty_db", c.guard_max_penalty_db);
        c.pre_emphasis_clip_db = dr.number("pre_emphasis_clip_db", c.pre_emphasis_clip_db);
        c.recommend_guard_ghz = dr.number("recommend_guard_ghz", c.recommend_guard_ghz);
        if (const json* g = dr.child("guard_link_gsnr_db"); g && !g->is_null()) {
            c.guard_link_gsnr_db = Reader::as_number(*g, dr.at("guard_link_gsnr_db"));
        }
        dr.finish();
        if (!(c.penalty_threshold_db > 0.0) || !(c.guard_max_penalty_db > 0.0) ||
            c.pre_emphasis_clip_db < 0.0 || c.recommend_guard_ghz < 0.0) {
            throw ValidationError(dr.path() +
                                  ": thresholds must be positive, clip and guard non-negative");
        }
    }
    f.diagnosis.chain = f.scenario.chain;
    r.finish();
    return f;
}

ScenarioFile parse_scenario_text(const std::string& text)
{
    return parse_scenario(parse_text(text));
}

ScenarioFile load_scenario(const std::filesystem::path& path)
{
    return parse_scenario_text(read_file(path));
}

json to_json(const formats::CatalogEntry& e)
{
    return {{"name", e.name},
            {"format", e.format.name},
            {"symbol_rate_gbd", e.symbol_rate},
            {"net_data_rate_gbps", e.net_data_rate},
            {"margin_db", e.margin_db}};
}

json to_json(const ScenarioFile& f)
{
    json cat = json::array();
    for (const auto& e : f.catalog) {
        cat.push_back(to_json(e));
    }
    json probes = json::array();
    for (const auto& p : f.probe_set) {
        probes.push_back(probe_json(p));
    }
    json j = {{"schema_version", f.schema_version},
              {"description", f.description},
              {"catalog", cat},
              {"scenario", line_json(f.scenario)},
              {"probe_set", probes},
              {"sweep",
               {{"slot_index", f.sweep.slot_index},
                {"step_ghz", f.sweep.step},
                {"trials_per_point", f.sweep.trials_per_point}}},
              {"diagnosis",
               {{"penalty_threshold_db", f.diagnosis.penalty_threshold_db},
                {"guard_max_penalty_db", f.diagnosis.guard_max_penalty_db},
                {"pre_emphasis_clip_db", f.diagnosis.pre_emphasis_clip_db},
                {"recommend_guard_ghz", f.diagnosis.recommend_guard_ghz},
                {"guard_link_gsnr_db", optional_json(f.diagnosis.guard_link_gsnr_db)}}}};
    if (f.crosstalk) {
        j["crosstalk"] = {{"center_probe", f.crosstalk->center_probe},
                          {"side_probe", f.crosstalk->side_probe},
                          {"step_ghz", f.crosstalk->step},
                          {"trials", f.crosstalk->trials}};
    }
    return j;
}

std::vector<formats::CatalogEntry> parse_catalog(const json& doc)
{
    Reader r(doc, "$");
    check_version(r);
    const json* arr = r.array("catalog");
    if (!arr || arr->empty()) {
        throw ValidationError(r.at("catalog") + ": catalog must not be empty");
    }
    auto out = parse_entries(arr, r.at("catalog"));
    r.finish();
    return out;
}

std::vector<formats::CatalogEntry> load_catalog(const std::filesystem::path& path)
{
    return parse_catalog(parse_text(read_file(path)));
}

std::string scenario_hash(const ScenarioFile& file)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(to_json(file).dump())));
    return buf;
}

json to_json(const probe::SweepResult& sweep)
{
    json curves = json::array();
    for (const auto& c : sweep.curves) {
        json pts = json::array();
        for (const auto& p : c.points) {
            pts.push_back({{"carrier_ghz", p.carrier},
                           {"gsnr_db", optional_json(p.sample.maybe_db())},
                           {"outage", p.sample.is_outage()},
                           {"q_db", optional_json(p.q_db)}});
        }
        curves.push_back({{"probe", probe_json(c.probe)}, {"points", pts}});
    }
    return {{"slot", media_channel_json(sweep.slot)},
            {"step_ghz", sweep.step},
            {"trials_per_point", sweep.trials_per_point},
            {"curves", curves}};
}

probe::SweepResult sweep_from_json(const json& doc,
                                   const std::vector<formats::CatalogEntry>& catalog)
{
    Reader r(doc, "$.sweep");
    probe::SweepResult s;
    s.slot = parse_media_channel(r.required("slot"), r.at("slot"));
    s.step = r.number("step_ghz");
    s.trials_per_point = static_cast<int>(r.integer("trials_per_point", 1));
    const json* cs = r.array("curves");
    if (!cs) {
        throw ValidationError(r.at("curves") + ": missing required field");
    }
    for (std::size_t i = 0; i < cs->size(); ++i) {
        const auto cp = index_path(r.at("curves"), i);
        Reader cr((*cs)[i], cp);
        probe::ProbeCurve curve;
        curve.probe = parse_probe(cr.required("probe"), cr.at("probe"), catalog);
        const json* pts = cr.array("points");
        if (!pts) {
            throw ValidationError(cr.at("points") + ": missing required field");
        }
        for (std::size_t k = 0; k < pts->size(); ++k) {
            Reader pr((*pts)[k], index_path(cr.at("points"), k));
            probe::SweepPoint p;
            p.carrier = pr.number("carrier_ghz");
            const json& g = pr.required("gsnr_db");
            const json& outage = pr.required("outage");
            if (!outage.is_boolean()) {
                throw ValidationError(pr.at("outage") + ": expected a boolean");
            }
            if (outage.get<bool>() != g.is_null()) {
                throw ValidationError(pr.path() + ": outage flag and gsnr_db disagree");
            }
            if (!g.is_null()) {
                p.sample = formats::GsnrSample::value(Reader::as_number(g, pr.at("gsnr_db")));
            }
            if (const json* q = pr.child("q_db"); q && !q->is_null()) {
                p.q_db = Reader::as_number(*q, pr.at("q_db"));
            }
            pr.finish();
            curve.points.push_back(p);
        }
        cr.finish();
        s.curves.push_back(std::move(curve));
    }
    r.finish();
    return s;
}

json to_json(const diagnosis::CarrierPlan& plan)
{
    json carriers = json::array();
    for (const auto& c : plan.carriers) {
        carriers.push_back({{"center_ghz", c.center},
                            {"entry", c.entry.name},
                            {"net_data_rate_gbps", c.entry.net_data_rate},
                            {"predicted_min_gsnr_db", c.predicted_min_gsnr_db},
                            {"required_gsnr_db", c.required_gsnr_db},
                            {"margin_db", c.margin_db}});
    }
    json shortfalls = json::array();
    for (const auto& s : plan.shortfalls) {
        shortfalls.push_back({{"entry", s.entry}, {"best_margin_db", optional_json(s.best_margin_db)}});
    }
    double total = 0.0;
    for (const auto& c : plan.carriers) {
        total += c.entry.net_data_rate;
    }
    return {{"guard_ghz", plan.guard_ghz},
            {"total_net_data_rate_gbps", total},
            {"carriers", carriers},
            {"shortfalls", shortfalls}};
}

json to_json(const diagnosis::DiagnosisReport& rep)
{
    json j;
    j["config"] = {{"penalty_threshold_db", rep.config.penalty_threshold_db},
                   {"guard_max_penalty_db", rep.config.guard_max_penalty_db},
                   {"pre_emphasis_clip_db", rep.config.pre_emphasis_clip_db},
                   {"recommend_guard_ghz", rep.config.recommend_guard_ghz},
                   {"guard_link_gsnr_db", optional_json(rep.config.guard_link_gsnr_db)},
                   {"fec_threshold_ber", rep.config.chain.fec_threshold_ber},
                   {"outage_ber", rep.config.chain.outage_ber}};
    if (const auto& eb = rep.effective_bandwidth) {
        j["effective_bandwidth"] = {{"lower_bound_ghz", eb->lower_bound},
                                    {"upper_bound_ghz", eb->upper_bound},
                                    {"threshold_db", eb->threshold_db},
                                    {"probe", eb->probe_id},
                                    {"filter_limited", eb->filter_limited},
                                    {"degenerate", eb->degenerate}};
    } else {
        j["effective_bandwidth"] = nullptr;
    }
    if (const auto& co = rep.center_offset) {
        json peaks = json::array();
        for (const auto& p : co->peaks) {
            peaks.push_back({{"probe", p.probe_id}, {"peak_ghz", p.peak}, {"weight", p.weight}});
        }
        j["center_offset"] = {{"offset_ghz", co->offset},
                              {"low_confidence", co->low_confidence},
                              {"peaks", peaks}};
    } else {
        j["center_offset"] = nullptr;
    }
    if (const auto& tr = rep.tilt_ripple) {
        j["tilt_ripple"] = {{"tilt_db", tr->tilt_db},
                            {"ripple_pp_db", tr->ripple_pp_db},
                            {"probe", tr->probe_id}};
    } else {
        j["tilt_ripple"] = nullptr;
    }
    json curves = json::array();
    for (const auto& pc : rep.penalty_curves) {
        json pts = json::array();
        for (std::size_t i = 0; i < pc.carriers.size(); ++i) {
            pts.push_back({{"carrier_ghz", pc.carriers[i]},
                           {"penalty_db", optional_json(pc.penalty_db[i])}});
        }
        curves.push_back({{"probe", pc.probe_id}, {"points", pts}});
    }
    j["penalty_curves"] = curves;
    j["carrier_plan"] = to_json(rep.carrier_plan);
    json guards = json::array();
    for (const auto& g : rep.guard_bands) {
        guards.push_back({{"probe_a", g.probe_a},
                          {"probe_b", g.probe_b},
                          {"min_spacing_ghz", g.min_spacing_ghz},
                          {"guard_ghz", g.guard_ghz}});
    }
    j["guard_bands"] = guards;
    json pe = json::array();
    for (const auto& p : rep.pre_emphasis) {
        pe.push_back({{"frequency_ghz", p.frequency}, {"offset_db", p.offset_db}});
    }
    j["pre_emphasis"] = pe;
    j["notes"] = rep.notes;
    return j;
}

json to_json(const probe::CrosstalkScan& scan)
{
    json slots = json::array();
    for (const auto& s : scan.slots) {
        slots.push_back(media_channel_json(s));
    }
    json ref = json::array();
    for (const auto& g : scan.reference) {
        ref.push_back(optional_json(g.maybe_db()));
    }
    json rows = json::array();
    for (const auto& row : scan.rows) {
        json g = json::array();
        json p = json::array();
        for (std::size_t i = 0; i < row.gsnr.size(); ++i) {
            g.push_back(optional_json(row.gsnr[i].maybe_db()));
            p.push_back(optional_json(row.penalty_db[i]));
        }
        rows.push_back({{"offset_ghz", row.offset}, {"gsnr_db", g}, {"penalty_db", p}});
    }
    return {{"slots", slots},
            {"center_index", scan.center_index},
            {"center_probe", scan.center_probe},
            {"side_probe", scan.side_probe},
            {"reference_gsnr_db", ref},
            {"rows", rows}};
}

std::string sweep_csv(const probe::ProbeCurve& curve)
{
    std::string out = "carrier,gsnr_db,outage\n";
    for (const auto& p : curve.points) {
        out += num(p.carrier) + "," + num(p.sample.maybe_db()) + "," +
               (p.sample.is_outage() ? "1" : "0") + "\n";
    }
    return out;
}

std::string crosstalk_csv(const probe::CrosstalkScan& scan)
{
    std::string out = "offset_ghz,channel,gsnr_db,outage,penalty_db\n";
    for (const auto& row : scan.rows) {
        for (std::size_t i = 0; i < row.gsnr.size(); ++i) {
            out += num(row.offset) + "," + std::to_string(i) + "," +
                   num(row.gsnr[i].maybe_db()) + "," + (row.gsnr[i].is_outage() ? "1" : "0") +
                   "," + num(row.penalty_db[i]) + "\n";
        }
    }
    return out;
}

std::string penalty_csv(const diagnosis::PenaltyCurve& curve)
{
    std::string out = "carrier,penalty_db,outage\n";
    for (std::size_t i = 0; i < curve.carriers.size(); ++i) {
        out += num(curve.carriers[i]) + "," + num(curve.penalty_db[i]) + "," +
               (curve.penalty_db[i] ? "0" : "1") + "\n";
    }
    return out;
}

std::string pre_emphasis_csv(const std::vector<diagnosis::PreEmphasisPoint>& points)
{
    std::string out = "frequency,offset_db\n";
    for (const auto& p : points) {
        out += num(p.frequency) + "," + num(p.offset_db) + "\n";
    }
    return out;
}

std::string plan_csv(const diagnosis::CarrierPlan& plan)
{
    std::string out = "center,entry,predicted_min_gsnr_db,required_gsnr_db,margin_db\n";
    for (const auto& c : plan.carriers) {
        out += num(c.center) + "," + c.entry.name + "," + num(c.predicted_min_gsnr_db) + "," +
               num(c.required_gsnr_db) + "," + num(c.margin_db) + "\n";
    }
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed: " + path.string());
    }
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

}  // namespace osaas::io
