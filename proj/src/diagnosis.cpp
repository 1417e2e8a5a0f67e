#include "osaas/diagnosis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace osaas::diagnosis {

namespace {

constexpr double kTol = 1e-9;
constexpr double kGuardTolGHz = 0.01;

bool finite_at(const probe::ProbeCurve& c, std::size_t i)
{
    return !c.points[i].sample.is_outage();
}

double gsnr_at(const probe::ProbeCurve& c, std::size_t i)
{
    return c.points[i].sample.gsnr_db();
}

std::optional<std::size_t> argmax(const probe::ProbeCurve& c)
{
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (finite_at(c, i) && (!best || gsnr_at(c, i) > gsnr_at(c, *best))) {
            best = i;
        }
    }
    return best;
}

bool any_finite(const probe::SweepResult& sweep)
{
    return std::any_of(sweep.curves.begin(), sweep.curves.end(),
                       [](const probe::ProbeCurve& c) { return c.finite_count() > 0; });
}

// narrowest occupied width, then lowest symbol rate, then id
const probe::ProbeCurve& narrowest(const probe::SweepResult& sweep)
{
    if (sweep.curves.empty()) {
        throw UndiagnosableError("sweep has no probe curves");
    }
    return *std::min_element(sweep.curves.begin(), sweep.curves.end(),
                             [](const probe::ProbeCurve& a, const probe::ProbeCurve& b) {
                                 const auto ka = std::tuple(a.probe.occupied_width(),
                                                            a.probe.symbol_rate(), a.probe.id());
                                 const auto kb = std::tuple(b.probe.occupied_width(),
                                                            b.probe.symbol_rate(), b.probe.id());
                                 return ka < kb;
                             });
}

// the curve falls by at least `drop` (or goes dark) somewhere on this side
bool declines(const probe::ProbeCurve& c, std::size_t peak, double drop, int dir)
{
    const double top = gsnr_at(c, peak);
    for (long i = static_cast<long>(peak) + dir; i >= 0 && i < static_cast<long>(c.points.size());
         i += dir) {
        const auto k = static_cast<std::size_t>(i);
        if (!finite_at(c, k) || top - gsnr_at(c, k) >= drop) {
            return true;
        }
    }
    return false;
}

// value of the curve at f by linear interpolation; empty on outage or outside
std::optional<double> interpolate(const probe::ProbeCurve& c, double f)
{
    const auto& p = c.points;
    if (p.empty() || f < p.front().carrier - kTol || f > p.back().carrier + kTol) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::abs(p[i].carrier - f) <= kTol) {
            return p[i].sample.maybe_db();
        }
    }
    const auto hi = static_cast<std::size_t>(
        std::upper_bound(p.begin(), p.end(), f,
                         [](double v, const probe::SweepPoint& sp) { return v < sp.carrier; }) -
        p.begin());
    if (hi == 0 || hi >= p.size()) {
        return std::nullopt;
    }
    const auto& a = p[hi - 1];
    const auto& b = p[hi];
    if (a.sample.is_outage() || b.sample.is_outage()) {
        return std::nullopt;
    }
    const double t = (f - a.carrier) / (b.carrier - a.carrier);
    return a.sample.gsnr_db() + t * (b.sample.gsnr_db() - a.sample.gsnr_db());
}

const probe::ProbeCurve& nearest_rate_curve(const probe::SweepResult& sweep, double symbol_rate)
{
    return *std::min_element(sweep.curves.begin(), sweep.curves.end(),
                             [&](const probe::ProbeCurve& a, const probe::ProbeCurve& b) {
                                 const auto ka = std::tuple(
                                     std::abs(a.probe.symbol_rate() - symbol_rate),
                                     a.probe.symbol_rate(), a.probe.id());
                                 const auto kb = std::tuple(
                                     std::abs(b.probe.symbol_rate() - symbol_rate),
                                     b.probe.symbol_rate(), b.probe.id());
                                 return ka < kb;
                             });
}

}  // namespace

CenterOffset estimate_center_offset(const probe::SweepResult& sweep, double penalty_threshold_db)
{
    const bool enough = std::any_of(sweep.curves.begin(), sweep.curves.end(),
                                    [](const probe::ProbeCurve& c) { return c.finite_count() >= 3; });
    if (!enough) {
        throw UndiagnosableError("center offset needs a probe with at least 3 finite samples");
    }

    CenterOffset out;
    double wsum = 0.0;
    double acc = 0.0;
    for (const auto& c : sweep.curves) {
        const auto k = argmax(c);
        if (!k || *k == 0 || *k + 1 >= c.points.size()) {
            continue;
        }
        if (!finite_at(c, *k - 1) || !finite_at(c, *k + 1)) {
            continue;
        }
        if (!declines(c, *k, penalty_threshold_db, -1) || !declines(c, *k, penalty_threshold_db, +1)) {
            continue;
        }
        const double ym = gsnr_at(c, *k - 1);
        const double y0 = gsnr_at(c, *k);
        const double yp = gsnr_at(c, *k + 1);
        const double curv = ym - 2.0 * y0 + yp;
        if (!(curv < 0.0)) {
            continue;
        }
        const double h = c.points[*k + 1].carrier - c.points[*k].carrier;
        const double vertex = c.points[*k].carrier + 0.5 * h * (ym - yp) / curv;
        const double w = curv * curv;
        out.peaks.push_back({c.probe.id(), vertex, w});
        wsum += w;
        acc += w * (vertex - sweep.slot.center);
    }

    if (out.peaks.empty()) {
        out.offset = 0.0;
        out.low_confidence = true;
        return out;
    }
    out.offset = acc / wsum;
    return out;
}

EffectiveBandwidth estimate_effective_bandwidth(const probe::SweepResult& sweep,
                                                double penalty_threshold_db)
{
    if (!any_finite(sweep)) {
        throw UndiagnosableError("effective bandwidth: no finite readings");
    }
    const auto& c = narrowest(sweep);
    const auto k = argmax(c);
    if (!k) {
        throw UndiagnosableError("effective bandwidth: narrowest probe " + c.probe.id() +
                                 " has no finite reading");
    }

    EffectiveBandwidth out;
    out.threshold_db = penalty_threshold_db;
    out.probe_id = c.probe.id();

    const double top = gsnr_at(c, *k);
    auto within = [&](std::size_t i) {
        return finite_at(c, i) && top - gsnr_at(c, i) <= penalty_threshold_db;
    };
    std::size_t lo = *k;
    std::size_t hi = *k;
    while (lo > 0 && within(lo - 1)) {
        --lo;
    }
    while (hi + 1 < c.points.size() && within(hi + 1)) {
        ++hi;
    }
    const double extent = c.points[hi].carrier - c.points[lo].carrier;
    out.upper_bound = c.probe.occupied_width() + extent + sweep.step;
    out.filter_limited = !(lo == 0 && hi + 1 == c.points.size());
    out.degenerate = c.finite_count() == 1;

    // widest symbol rate whose best reading is within the threshold of the
    // best reading of any probe
    double best_peak = -std::numeric_limits<double>::infinity();
    for (const auto& cc : sweep.curves) {
        if (const auto kk = argmax(cc)) {
            best_peak = std::max(best_peak, gsnr_at(cc, *kk));
        }
    }
    double lower = c.probe.symbol_rate();
    for (const auto& cc : sweep.curves) {
        const auto kk = argmax(cc);
        if (kk && gsnr_at(cc, *kk) >= best_peak - penalty_threshold_db) {
            lower = std::max(lower, cc.probe.symbol_rate());
        }
    }
    out.lower_bound = std::min(lower, out.upper_bound);
    return out;
}

const probe::ProbeCurve& reference_curve(const probe::SweepResult& sweep)
{
    const probe::ProbeCurve* best = nullptr;
    for (const auto& c : sweep.curves) {
        if (c.points.empty() || 5 * c.finite_count() < 4 * c.points.size()) {
            continue;
        }
        if (!best || c.probe.occupied_width() > best->probe.occupied_width() ||
            (c.probe.occupied_width() == best->probe.occupied_width() &&
             c.probe.id() < best->probe.id())) {
            best = &c;
        }
    }
    return best ? *best : narrowest(sweep);
}

TiltRipple estimate_tilt_ripple(const probe::SweepResult& sweep)
{
    const auto& c = reference_curve(sweep);
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : c.points) {
        if (!p.sample.is_outage()) {
            xs.push_back(p.carrier - sweep.slot.center);
            ys.push_back(p.sample.gsnr_db());
        }
    }
    if (xs.size() < 4) {
        throw UndiagnosableError("tilt/ripple: " + c.probe.id() + " has fewer than 4 finite points");
    }
    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (my + slope * (xs[i] - mx));
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    return {slope * sweep.slot.width, rmax - rmin, c.probe.id()};
}

std::optional<double> predicted_min_gsnr(const probe::SweepResult& sweep,
                                         const formats::CatalogEntry& entry, double roll_off,
                                         double center)
{
    if (sweep.curves.empty()) {
        return std::nullopt;
    }
    const auto& c = nearest_rate_curve(sweep, entry.symbol_rate);
    const double half = spectral::occupied_width(entry.symbol_rate, roll_off) / 2.0;
    const double lo = center - half;
    const double hi = center + half;

    auto lo_v = interpolate(c, lo);
    auto hi_v = interpolate(c, hi);
    if (!lo_v || !hi_v) {
        return std::nullopt;
    }
    double m = std::min(*lo_v, *hi_v);
    for (const auto& p : c.points) {
        if (p.carrier > lo + kTol && p.carrier < hi - kTol) {
            if (p.sample.is_outage()) {
                return std::nullopt;
            }
            m = std::min(m, p.sample.gsnr_db());
        }
    }
    return m;
}

CarrierPlan recommend_carriers(const probe::SweepResult& sweep,
                               std::span<const formats::CatalogEntry> catalog, double guard_ghz,
                               const formats::ChainConfig& chain, double roll_off)
{
    CarrierPlan plan;
    plan.guard_ghz = guard_ghz;
    if (sweep.curves.empty() || catalog.empty()) {
        return plan;
    }

    std::vector<formats::CatalogEntry> order(catalog.begin(), catalog.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return std::tuple(-a.net_data_rate, a.symbol_rate, a.name) <
               std::tuple(-b.net_data_rate, b.symbol_rate, b.name);
    });

    std::vector<double> grid;
    for (const auto& p : sweep.curves.front().points) {
        grid.push_back(p.carrier);
    }

    // each entry sits on the first grid center whose band starts at or after
    // the cursor; the best feasible entry is placed and the cursor moves past it
    std::vector<std::optional<double>> best_margin(order.size());
    for (const double c : grid) {
        for (std::size_t e = 0; e < order.size(); ++e) {
            const auto& entry = order[e];
            const double half = spectral::occupied_width(entry.symbol_rate, roll_off) / 2.0;
            if (c - half < sweep.slot.lower() - kTol || c + half > sweep.slot.upper() + kTol) {
                continue;
            }
            if (const auto g = predicted_min_gsnr(sweep, entry, roll_off, c)) {
                const double margin = *g - formats::required_gsnr(entry, chain);
                if (!best_margin[e] || margin > *best_margin[e]) {
                    best_margin[e] = margin;
                }
            }
        }
    }

    double cursor = sweep.slot.lower();
    while (cursor <= sweep.slot.upper() + kTol) {
        bool placed = false;
        for (const auto& entry : order) {
            const double half = spectral::occupied_width(entry.symbol_rate, roll_off) / 2.0;
            const auto it = std::find_if(grid.begin(), grid.end(),
                                         [&](double c) { return c - half >= cursor - kTol; });
            if (it == grid.end() || *it + half > sweep.slot.upper() + kTol) {
                continue;
            }
            const auto g = predicted_min_gsnr(sweep, entry, roll_off, *it);
            const double req = formats::required_gsnr(entry, chain);
            if (g && *g >= req) {
                plan.carriers.push_back({*it, entry, *g, req, *g - req});
                cursor = *it + half + guard_ghz;
                placed = true;
                break;
            }
        }
        if (!placed) {
            cursor += sweep.step;
        }
    }

    if (plan.carriers.empty()) {
        for (std::size_t e = 0; e < order.size(); ++e) {
            plan.shortfalls.push_back({order[e].name, best_margin[e]});
        }
    }
    return plan;
}

double pairwise_crosstalk_penalty_db(const ProbeConfig& a, const ProbeConfig& b, double spacing,
                                     double link_gsnr_db, double resolution)
{
    const double g = std::pow(10.0, link_gsnr_db / 10.0);
    const auto sa = a.spectrum_at(0.0);
    const auto sb = b.spectrum_at(spacing);
    const double chi_a = spectral::overlap_coefficient(sa, sb, spacing, resolution);
    const double chi_b = spectral::overlap_coefficient(sb, sa, spacing, resolution);
    return 10.0 * std::log10(1.0 + g * std::max(chi_a, chi_b));
}

GuardBand guard_band(const ProbeConfig& a, const ProbeConfig& b, double max_penalty_db,
                     double link_gsnr_db, double resolution)
{
    if (!(max_penalty_db > 0.0)) {
        throw ConfigError("guard band: max penalty must be positive");
    }
    GuardBand out{a.id(), b.id(), 0.0, 0.0};
    auto ok = [&](double d) {
        return pairwise_crosstalk_penalty_db(a, b, d, link_gsnr_db, resolution) <= max_penalty_db;
    };

    double lo = 0.0;
    double hi = (a.occupied_width() + b.occupied_width()) / 2.0;
    if (ok(lo)) {
        hi = lo;
    } else {
        while (hi - lo > kGuardTolGHz) {
            const double mid = 0.5 * (lo + hi);
            (ok(mid) ? hi : lo) = mid;
        }
    }
    out.min_spacing_ghz = hi;
    out.guard_ghz = std::max(0.0, hi - (a.symbol_rate() + b.symbol_rate()) / 2.0);
    return out;
}

std::vector<PreEmphasisPoint> pre_emphasis(const probe::SweepResult& sweep, double clip_db)
{
    const auto& c = reference_curve(sweep);
    std::vector<PreEmphasisPoint> out;
    const auto k = argmax(c);
    if (!k) {
        return out;
    }
    const double top = gsnr_at(c, *k);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        const double off = finite_at(c, i) ? top - gsnr_at(c, i) : clip_db;
        out.push_back({c.points[i].carrier, std::clamp(off, 0.0, clip_db)});
    }
    return out;
}

std::vector<PenaltyCurve> penalty_curves(const probe::SweepResult& sweep)
{
    std::vector<PenaltyCurve> out;
    for (const auto& c : sweep.curves) {
        PenaltyCurve pc;
        pc.probe_id = c.probe.id();
        const auto k = argmax(c);
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            pc.carriers.push_back(c.points[i].carrier);
            if (k && finite_at(c, i)) {
                pc.penalty_db.emplace_back(gsnr_at(c, *k) - gsnr_at(c, i));
            } else {
                pc.penalty_db.emplace_back();
            }
        }
        out.push_back(std::move(pc));
    }
    return out;
}

DiagnosisReport diagnose(const probe::SweepResult& sweep,
                         std::span<const formats::CatalogEntry> catalog,
                         const DiagnosisConfig& config)
{
    if (!any_finite(sweep)) {
        throw UndiagnosableError("every probe is in outage at every sweep point");
    }
    DiagnosisReport r;
    r.config = config;

    try {
        r.effective_bandwidth = estimate_effective_bandwidth(sweep, config.penalty_threshold_db);
    } catch (const UndiagnosableError& e) {
        r.notes.emplace_back(e.what());
    }
    try {
        r.center_offset = estimate_center_offset(sweep, config.penalty_threshold_db);
    } catch (const UndiagnosableError& e) {
        r.notes.emplace_back(e.what());
    }
    try {
        r.tilt_ripple = estimate_tilt_ripple(sweep);
    } catch (const UndiagnosableError& e) {
        r.notes.emplace_back(e.what());
    }
    r.penalty_curves = penalty_curves(sweep);
    r.carrier_plan = recommend_carriers(sweep, catalog, config.recommend_guard_ghz, config.chain);
    r.pre_emphasis = pre_emphasis(sweep, config.pre_emphasis_clip_db);

    double link = config.guard_link_gsnr_db.value_or(-std::numeric_limits<double>::infinity());
    if (!config.guard_link_gsnr_db) {
        for (const auto& c : sweep.curves) {
            if (const auto k = argmax(c)) {
                link = std::max(link, gsnr_at(c, *k));
            }
        }
    }
    for (std::size_t i = 0; i < sweep.curves.size(); ++i) {
        for (std::size_t j = i; j < sweep.curves.size(); ++j) {
            r.guard_bands.push_back(guard_band(sweep.curves[i].probe, sweep.curves[j].probe,
                                               config.guard_max_penalty_db, link));
        }
    }
    return r;
}

}  // namespace osaas::diagnosis
