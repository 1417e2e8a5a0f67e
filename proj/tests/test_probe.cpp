#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "helpers.hpp"
#include "oracles.hpp"
#include "osaas/line_sim.hpp"
#include "osaas/probe_engine.hpp"

using namespace osaas;
using namespace osaas::probe;
using testing_support::flat;

namespace {

// Replays a fixed list of Q readings (empty = outage) regardless of settings.
class ScriptedProbe final : public BlackBoxProbe {
public:
    explicit ScriptedProbe(std::vector<std::optional<double>> qs) : qs_(std::move(qs)) {}
    void set_carrier(double c) override { carrier_ = c; }
    void set_probe(const ProbeConfig& p) override { id_ = p.id(); }
    MeasurementResult read_q(int trial) override
    {
        return {carrier_, id_, trial, qs_.at(static_cast<std::size_t>(trial))};
    }
    std::vector<MediaChannel> slots() const override { return {{0.0, 100.0, 0.0}}; }

private:
    std::vector<std::optional<double>> qs_;
    double carrier_ = 0.0;
    std::string id_;
};

linesim::Scenario five_slots(double kappa, double g0 = 20.0)
{
    linesim::Scenario s = flat(193500.0, 375.0, g0);
    s.media_channels.clear();
    for (int k = -2; k <= 2; ++k) {
        s.media_channels.push_back({193500.0 + 75.0 * k, 75.0, 0.0});
    }
    s.crosstalk_coupling = kappa;
    return s;
}

}  // namespace

TEST_CASE("sweep plan grid")
{
    SweepPlan plan;
    plan.slot = {193500.0, 100.0, 0.0};
    plan.probes = {testing_support::qam34()};
    const auto c = plan.carriers();
    REQUIRE(c.size() == 17);
    CHECK(c.front() == 193450.0);
    CHECK(c.back() == 193550.0);
    plan.slot.width = 75.0;
    CHECK(plan.carriers().size() == 13);
    plan.slot.width = 80.0;
    CHECK(plan.carriers().back() == doctest::Approx(193500.0 - 40.0 + 75.0));
    plan.probes.clear();
    CHECK_THROWS_AS(plan.validate(), ConfigError);
}

TEST_CASE("probe_point recovers g0 on an ideal channel")
{
    const auto s = flat(193500.0, 100.0, 19.3);
    auto session = linesim::open_session(std::make_shared<const linesim::Scenario>(s));
    for (const auto& p : {testing_support::qpsk69(), testing_support::hyb46(), testing_support::qam34(),
                          testing_support::qpsk34()}) {
        const auto g = probe_point(*session, 193500.0, p, 1);
        REQUIRE_FALSE(g.is_outage());
        CHECK(g.gsnr_db() == doctest::Approx(19.3).epsilon(0.01 / 19.3));
    }
}

TEST_CASE("outage propagation and majority rule")
{
    const auto p = testing_support::qam34();
    ScriptedProbe all_out({std::nullopt, std::nullopt, std::nullopt});
    CHECK(probe_point(all_out, 0.0, p, 3).is_outage());

    ScriptedProbe majority({std::nullopt, 8.0, std::nullopt});
    CHECK(probe_point(majority, 0.0, p, 3).is_outage());

    ScriptedProbe minority({7.0, std::nullopt, 9.0});
    const auto r = probe_point_reading(minority, 0.0, p, 3);
    REQUIRE_FALSE(r.sample.is_outage());
    CHECK(*r.q_db == 8.0);

    ScriptedProbe median({9.0, 7.0, 8.5, 100.0, 8.0});
    CHECK(*probe_point_reading(median, 0.0, p, 5).q_db == 8.5);
    CHECK_THROWS_AS(probe_point(median, 0.0, p, 0), ConfigError);
}

TEST_CASE("median of 5 noisy trials follows the order-statistic oracle")
{
    // QPSK: Q in dB equals in-band SNR in dB, so GSNR noise equals Q noise.
    auto s = flat(193500.0, 100.0, 16.0);
    const auto p = testing_support::qpsk69();
    const double truth = [&] {
        auto session = linesim::open_session(std::make_shared<const linesim::Scenario>(s));
        return probe_point(*session, 193500.0, p, 1).gsnr_db();
    }();
    s.measurement_noise_sigma_db = 0.1;
    const int seeds = 1000;
    int within = 0;
    for (int k = 0; k < seeds; ++k) {
        s.seed = static_cast<std::uint64_t>(k);
        auto session = linesim::open_session(std::make_shared<const linesim::Scenario>(s));
        const auto g = probe_point(*session, 193500.0, p, 5);
        within += std::abs(g.gsnr_db() - truth) <= 0.1 ? 1 : 0;
    }
    const double frac = static_cast<double>(within) / seeds;
    const double expect = oracle::median5_within(0.1, 0.1);
    const double tol = 4.0 * std::sqrt(expect * (1.0 - expect) / seeds);
    CHECK(std::abs(frac - expect) <= tol);
    MESSAGE("P(|median-of-5 error| <= 0.1 dB): observed " << frac << ", oracle " << expect);
}

TEST_CASE("run_sweep: grid, ECP consistency, reorder independence, determinism")
{
    const auto s = flat(193500.0, 100.0, 18.0);
    const std::vector<ProbeConfig> probes{testing_support::qpsk69(), testing_support::hyb46(),
                                          testing_support::qam34()};
    const auto a = testing_support::sweep(s, probes);
    REQUIRE(a.curves.size() == 3);
    for (const auto& c : a.curves) {
        CHECK(c.points.size() == 17);
        CHECK(c.finite_count() == 17);
    }
    for (std::size_t i = 0; i < 17; ++i) {
        const double g0 = a.curves[0].points[i].sample.gsnr_db();
        for (const auto& c : a.curves) {
            CHECK(std::abs(c.points[i].sample.gsnr_db() - g0) <= 0.1);
            CHECK(c.points[i].carrier == a.curves[0].points[i].carrier);
        }
    }
    const auto b = testing_support::sweep(s, {probes[2], probes[0], probes[1]});
    CHECK(*b.find(probes[0].id()) == *a.find(probes[0].id()));
    CHECK(*b.find(probes[2].id()) == *a.find(probes[2].id()));
    CHECK(testing_support::sweep(s, probes) == a);
    CHECK(a.find("nope") == nullptr);
}

TEST_CASE("run_sweep on a tilted 400 GHz slot gives three finite tilted curves")
{
    auto s = flat(193700.0, 400.0, 20.3);
    s.gsnr_profile.tilt_db = 2.5;
    const auto r = testing_support::sweep(s, {testing_support::qpsk69(), testing_support::hyb46(),
                                              testing_support::qam34()});
    for (const auto& c : r.curves) {
        CHECK(c.finite_count() == c.points.size());
        CHECK(c.points.back().sample.gsnr_db() - c.points.front().sample.gsnr_db() ==
              doctest::Approx(2.5).epsilon(0.02));
    }
}

TEST_CASE("crosstalk scan on five 69 GBd slots")
{
    const auto s = five_slots(0.0958);
    linesim::SimulatedChannelBank bank(std::make_shared<const linesim::Scenario>(s));
    const auto p = testing_support::qpsk69();
    const auto offsets = edge_to_edge_offsets(s.media_channels[2]);
    REQUIRE(offsets.size() == 13);
    CHECK(offsets.front() == -37.5);
    CHECK(offsets.back() == 37.5);

    const auto scan = crosstalk_scan(bank, p, p, offsets);
    REQUIRE(scan.rows.size() == 13);
    const auto& zero = scan.rows[6];
    CHECK(zero.offset == 0.0);
    for (const auto& pen : zero.penalty_db) {
        CHECK(*pen == 0.0);
    }
    for (std::size_t k = 0; k < 13; ++k) {
        const auto& row = scan.rows[k];
        const auto& mirror = scan.rows[12 - k];
        CHECK(*row.penalty_db[0] < 0.05);
        CHECK(*row.penalty_db[4] < 0.05);
        CHECK(*row.penalty_db[2] >= 0.0);
        CHECK(std::abs(*row.penalty_db[2] - *mirror.penalty_db[2]) <= 0.05);
        CHECK(std::abs(*row.penalty_db[1] - *mirror.penalty_db[3]) <= 0.05);
        // the approached neighbor loses; the receding one gains at most the
        // aligned-grid crosstalk it started with
        const std::size_t approached = row.offset > 0 ? 3 : 1;
        const std::size_t receding = row.offset > 0 ? 1 : 3;
        if (row.offset != 0.0) {
            CHECK(*row.penalty_db[approached] > 0.0);
            CHECK(*row.penalty_db[receding] <= 0.0);
            CHECK(*row.penalty_db[receding] > -0.1);
        }
    }
    CHECK(crosstalk_scan(bank, p, p, offsets) == scan);
}

TEST_CASE("crosstalk onset comes later for a 34 GBd central carrier")
{
    const auto s = five_slots(0.0958);
    linesim::SimulatedChannelBank bank(std::make_shared<const linesim::Scenario>(s));
    const auto offsets = edge_to_edge_offsets(s.media_channels[2]);
    const auto all69 = crosstalk_scan(bank, testing_support::qpsk69(), testing_support::qpsk69(), offsets);
    const auto mixed = crosstalk_scan(bank, testing_support::qpsk34(), testing_support::qpsk69(), offsets);
    auto onset = [](const CrosstalkScan& sc) {
        for (const auto& row : sc.rows) {
            if (row.offset > 0.0 && *row.penalty_db[2] > 0.1) {
                return row.offset;
            }
        }
        return 1e9;
    };
    CHECK(onset(mixed) > onset(all69));
}

TEST_CASE("crosstalk scan preconditions")
{
    auto s = five_slots(0.1);
    linesim::SimulatedChannelBank bank(std::make_shared<const linesim::Scenario>(s));
    const auto p = testing_support::qpsk69();
    const std::vector<double> too_far{40.0};
    CHECK_THROWS_AS(crosstalk_scan(bank, p, p, too_far), std::domain_error);
    s.media_channels.pop_back();
    s.grid.stop -= 75.0;
    linesim::SimulatedChannelBank four(std::make_shared<const linesim::Scenario>(s));
    const std::vector<double> ok{0.0};
    CHECK_THROWS_AS(crosstalk_scan(four, p, p, ok), ConfigError);
}
