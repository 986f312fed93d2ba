#include "migshift/errors.hpp"
#include "migshift/reliability.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace migshift;

namespace {

const TechNodeParams& n22() { return find_tech_node("22nm"); }

VariationTrial nominal(const TechNodeParams& n)
{
    VariationTrial t;
    t.perturbed = n;
    return t;
}

} // namespace

TEST_CASE("node presets")
{
    const auto& p = tech_node_presets();
    REQUIRE(p.size() == 6);
    const auto& n = n22();
    CHECK(n.vdd == 1.2);
    CHECK(n.wl_boost == 2.5);
    CHECK(n.c_cell_fF == 25.0);
    CHECK(n.access_l_um == 0.022);
    CHECK(n.access_w_um == 0.044);
    CHECK(n.bl_c_per_cell_fF == 0.24);
    CHECK(n.trise_ns == 0.5);
    for (const auto& node : p)
        CHECK_NOTHROW(node.validate());
    CHECK_THROWS_AS(find_tech_node("7nm"), ConfigError);
}

TEST_CASE("shipped node table mirrors the presets")
{
    const auto loaded = load_tech_nodes(std::string(MIGSHIFT_DATA_DIR) + "/tech_nodes.csv");
    CHECK(loaded == tech_node_presets());
}

TEST_CASE("node table parsing errors")
{
    const std::string path = "bad_nodes.csv";
    {
        std::ofstream out(path);
        out << "node,vdd_V\n22nm,1.2\n";
    }
    CHECK_THROWS_AS(load_tech_nodes(path), ConfigError);
    CHECK_THROWS_AS(load_tech_nodes("does_not_exist.csv"), ConfigError);
    std::filesystem::remove(path);
}

TEST_CASE("sense margin matches charge conservation")
{
    const MarginModel m;
    for (const auto& n : tech_node_presets()) {
        const double cb = m.c_bitline_fF(n);
        const double cc = n.c_cell_fF;
        for (double v : {0.0, n.vdd, 0.3 * n.vdd})
            CHECK(sense_margin(v, nominal(n), m) == doctest::Approx(oracle::charge_share_mV(cc, cb, v, n.vdd / 2)));
    }
    const double cb22 = 512 * 0.24 + 20.0;
    CHECK(m.c_bitline_fF(n22()) == doctest::Approx(cb22));
    CHECK(sense_margin(1.2, nominal(n22()), m) == doctest::Approx(600.0 * 25.0 / (25.0 + cb22)));
}

TEST_CASE("sense margin limits and errors")
{
    const MarginModel m;
    auto t = nominal(n22());
    CHECK(sense_margin(0.6, t, m) == doctest::Approx(0.0));
    t.perturbed.c_cell_fF = 1e-9;
    CHECK(sense_margin(1.2, t, m) < 1e-6);
    t.perturbed.c_cell_fF = 0.0;
    CHECK_THROWS_AS(sense_margin(1.2, t, m), ParameterError);
    t = nominal(n22());
    t.perturbed.bl_c_per_cell_fF = -1.0;
    MarginModel no_sa = m;
    no_sa.c_sa_input_ref_fF = 0.0;
    CHECK_THROWS_AS(sense_margin(1.2, t, no_sa), ParameterError);
}

TEST_CASE("derating shrinks with distance and RC")
{
    const MarginModel m;
    const auto& n = n22();
    CHECK(m.derating(n, 0.0) <= 1.0);
    CHECK(m.derating(n, 1.0) < m.derating(n, 0.5));
    auto slow = n;
    slow.bl_r_per_cell_mohm *= 10;
    CHECK(m.derating(slow, 1.0) < m.derating(n, 1.0));
}

TEST_CASE("trials are deterministic and level 0 always passes")
{
    for (std::uint64_t s = 0; s < 500; ++s) {
        const auto t = simulate_shift_trial(0.0, s, n22());
        CHECK(t.pass);
        CHECK_FALSE(t.failing_step.has_value());
        CHECK(t.perturbed == n22());
    }
    const auto a = simulate_shift_trial(0.2, 1234, n22());
    const auto b = simulate_shift_trial(0.2, 1234, n22());
    CHECK(a.perturbed == b.perturbed);
    CHECK(a.margins_mV == b.margins_mV);
    CHECK(a.pass == b.pass);
}

TEST_CASE("perturbations stay within the level")
{
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const auto t = simulate_shift_trial(0.1, s, n22());
        for (auto [got, nom] : {std::pair{t.perturbed.c_cell_fF, 25.0}, std::pair{t.perturbed.access_l_um, 0.022},
                                std::pair{t.perturbed.access_w_um, 0.044}, std::pair{t.perturbed.bl_c_per_cell_fF, 0.24},
                                std::pair{t.perturbed.bl_r_per_cell_mohm, 120.0}}) {
            CHECK(got >= nom * 0.9 - 1e-12);
            CHECK(got <= nom * 1.1 + 1e-12);
        }
        CHECK(t.perturbed.vdd == 1.2);
    }
}

TEST_CASE("threshold above the nominal margin fails every trial")
{
    MarginModel m;
    m.sense_threshold_mV = 1000.0;
    const auto t = simulate_shift_trial(0.0, 1, n22(), m);
    CHECK_FALSE(t.pass);
    CHECK(t.failing_step == 1);
}

TEST_CASE("invalid levels are rejected")
{
    CHECK_THROWS_AS(simulate_shift_trial(-0.1, 1, n22()), ParameterError);
    CHECK_THROWS_AS(simulate_shift_trial(0.6, 1, n22()), ParameterError);
    CHECK_THROWS_AS(monte_carlo(0.1, 0, n22(), 1), ParameterError);
}

TEST_CASE("monte carlo is reproducible and independent of threading")
{
    const auto a = monte_carlo(0.2, 20000, n22(), 5);
    const auto b = monte_carlo(0.2, 20000, n22(), 5);
    const auto c = monte_carlo(0.2, 20000, n22(), 5, MarginModel{}, 4);
    CHECK(a.failures == b.failures);
    CHECK(a.failures == c.failures);
    CHECK(a.failures_by_step == c.failures_by_step);
    std::size_t sum = 0;
    for (auto f : a.failures_by_step)
        sum += f;
    CHECK(sum == a.failures);
}

TEST_CASE("failure rate grows with variation")
{
    double prev = -1.0;
    for (double level : {0.0, 0.05, 0.1, 0.15, 0.2, 0.3}) {
        const double rate = monte_carlo(level, 20000, n22(), 1).rate();
        CHECK(rate >= prev);
        prev = rate;
    }
    CHECK(monte_carlo(0.0, 20000, n22(), 1).failures == 0);
}

TEST_CASE("calibration reproduces the target on its own sample")
{
    const double th = calibrate_threshold(0.1, 0.2, 5000, n22(), 3);
    MarginModel m;
    m.sense_threshold_mV = th;
    CHECK(monte_carlo(0.1, 5000, n22(), 3, m).failures == 1000);
}

TEST_CASE("frozen threshold reproduces the anchor")
{
    const auto r = monte_carlo(0.1, 100000, n22(), 1);
    CHECK(r.rate() == doctest::Approx(0.14).epsilon(0.01 / 0.14));
}

TEST_CASE("MIM plate area")
{
    const auto g = mim_plate_area(25.0, 8.0, 20.0);
    const double eps0 = 8.8541878128e-12;
    const double area = 25e-15 * 8e-9 / (eps0 * 20.0) * 1e18;
    CHECK(g.area_nm2 == doctest::Approx(area));
    CHECK(g.area_nm2 == doctest::Approx(1.129e6).epsilon(5e-4));
    CHECK(g.side_nm == doctest::Approx(1063.0).epsilon(5e-4));
    CHECK(mim_plate_area(25.0, 16.0, 20.0).area_nm2 == doctest::Approx(2 * g.area_nm2));
    CHECK(mim_plate_area(25.0, 6.0, 20.0).area_nm2 == doctest::Approx(0.847e6).epsilon(1e-3));
    CHECK_THROWS_AS(mim_plate_area(0.0, 8.0, 20.0), ParameterError);
}
