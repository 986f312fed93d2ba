#include "migshift/engine.hpp"
#include "migshift/errors.hpp"
#include "migshift/timing_energy.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace migshift;

namespace {

const DramGeometry kGeometry{};

ExecutionReport shifts(std::size_t n, std::uint32_t bank = 0)
{
    ExecutionReport rep;
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < 4; ++k)
            rep.events.push_back({EventKind::Aap, bank, 0, i, CommandKind::ShiftRight});
    rep.commands_executed = n;
    return rep;
}

ExecutionReport random_events(std::mt19937_64& rng, std::size_t n)
{
    ExecutionReport rep;
    for (std::size_t i = 0; i < n; ++i) {
        const auto bank = static_cast<std::uint32_t>(rng() % 3);
        switch (rng() % 5) {
        case 0:
            for (int k = 0; k < 4; ++k)
                rep.events.push_back({EventKind::Aap, bank, 0, i, CommandKind::ShiftLeft});
            break;
        case 1: rep.events.push_back({EventKind::Tra, bank, 0, i, CommandKind::Tra}); break;
        case 2: rep.events.push_back({EventKind::Rd, bank, 0, i, CommandKind::Rd}); break;
        case 3: rep.events.push_back({EventKind::Act, bank, 0, i, CommandKind::Act}); break;
        default: rep.events.push_back({EventKind::Aap, bank, 0, i, CommandKind::Aap}); break;
        }
    }
    rep.commands_executed = n;
    return rep;
}

} // namespace

TEST_CASE("single shift matches the calibrated breakdown")
{
    const auto c = cost_trace(shifts(1), TimingParams{}, EnergyParams{}, kGeometry);
    const auto s = c.ledger.sum();
    CHECK(s.active == doctest::Approx(30.24));
    CHECK(s.burst == 0.0);
    CHECK(s.refresh == 0.0);
    CHECK(s.total() == doctest::Approx(31.321));
    CHECK(c.stats.total_time_ns == doctest::Approx(208.7));
    CHECK(c.stats.shifts_executed == 1);
}

TEST_CASE("512 shifts")
{
    const auto c = cost_trace(shifts(512), TimingParams{}, EnergyParams{}, kGeometry);
    const auto s = c.ledger.sum();
    CHECK(s.refresh == doctest::Approx(1041.08).epsilon(0.001));
    CHECK(s.total() == doctest::Approx(16554.6).epsilon(0.03));
    CHECK(c.stats.total_time_ns == doctest::Approx(106272.0).epsilon(0.02));
    CHECK(c.stats.energy_per_shift_nj == doctest::Approx(32.333).epsilon(0.03));
}

TEST_CASE("refresh event multiples for the benchmark sizes")
{
    const double expected[] = {0.0, 1.0, 2.5, 13.5};
    const std::size_t sizes[] = {1, 50, 100, 512};
    for (int i = 0; i < 4; ++i) {
        const auto c = cost_trace(shifts(sizes[i]), TimingParams{}, EnergyParams{}, kGeometry);
        CHECK(c.ledger.sum().refresh_events == expected[i]);
    }
}

TEST_CASE("empty event list costs nothing")
{
    const auto c = cost_trace(ExecutionReport{}, TimingParams{}, EnergyParams{}, kGeometry);
    CHECK(c.ledger.total() == 0.0);
    CHECK(c.stats.total_time_ns == 0.0);
    CHECK(c.ledger.banks.empty());
}

TEST_CASE("per-shift stability and the nJ/KB band")
{
    for (std::size_t n : {1u, 50u, 100u, 512u}) {
        const auto c = cost_trace(shifts(n), TimingParams{}, EnergyParams{}, kGeometry);
        CHECK(c.stats.energy_per_kb_nj >= 3.915);
        CHECK(c.stats.energy_per_kb_nj <= 4.041);
        CHECK(c.stats.throughput_mops == doctest::Approx(n / c.stats.total_time_ns * 1e3));
        CHECK(c.stats.energy_per_kb_nj == doctest::Approx(c.stats.energy_per_shift_nj / 8.0));
        if (n > 1) {
            CHECK(c.stats.energy_per_shift_nj >= 31.0);
            CHECK(c.stats.energy_per_shift_nj <= 32.5);
            CHECK(c.stats.latency_per_shift_ns >= 205.0);
            CHECK(c.stats.latency_per_shift_ns <= 209.0);
        }
    }
}

TEST_CASE("PIM-only traces never spend burst energy")
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        auto rep = random_events(rng, 100);
        std::erase_if(rep.events, [](const CommandEvent& e) { return e.kind == EventKind::Rd; });
        CHECK(cost_trace(rep, TimingParams{}, EnergyParams{}, kGeometry).ledger.sum().burst == 0.0);
    }
}

TEST_CASE("energy is additive over concatenated traces without refresh")
{
    std::mt19937_64 rng(6);
    EnergyParams e;
    e.refresh.enabled = false;
    for (int t = 0; t < 100; ++t) {
        const auto a = random_events(rng, 1 + rng() % 60);
        const auto b = random_events(rng, 1 + rng() % 60);
        ExecutionReport ab = a;
        ab.append(b);

        EnergyParams flat = e;
        flat.e_shift_overhead = 0.0;
        const auto sa = cost_trace(a, TimingParams{}, flat, kGeometry).ledger.sum();
        const auto sb = cost_trace(b, TimingParams{}, flat, kGeometry).ledger.sum();
        const auto sab = cost_trace(ab, TimingParams{}, flat, kGeometry).ledger.sum();
        CHECK(sab.total() == doctest::Approx(sa.total() + sb.total()));
        CHECK(sab.active == doctest::Approx(sa.active + sb.active));
        CHECK(sab.burst == doctest::Approx(sa.burst + sb.burst));
        for (std::size_t k = 0; k < 6; ++k)
            CHECK(sab.event_counts[k] == sa.event_counts[k] + sb.event_counts[k]);

        // The per-run shift overhead is charged once for the joined run.
        const auto da = cost_trace(a, TimingParams{}, e, kGeometry).ledger.sum().total();
        const auto db = cost_trace(b, TimingParams{}, e, kGeometry).ledger.sum().total();
        const auto dab = cost_trace(ab, TimingParams{}, e, kGeometry).ledger.sum().total();
        const bool both = a.shifts() > 0 && b.shifts() > 0;
        CHECK(dab == doctest::Approx(da + db - (both ? e.e_shift_overhead : 0.0)));
    }
}

TEST_CASE("banks run in parallel")
{
    ExecutionReport rep = shifts(10, 0);
    rep.append(shifts(10, 5));
    const auto c = cost_trace(rep, TimingParams{}, EnergyParams{}, kGeometry);
    CHECK(c.ledger.banks.size() == 2);
    CHECK(c.stats.total_time_ns == doctest::Approx(10 * 4 * 51.9 + 1.1));
    CHECK(c.stats.throughput_mops == doctest::Approx(2 * 10 / c.stats.total_time_ns * 1e3));
}

TEST_CASE("blocking refresh stalls the timeline")
{
    EnergyParams e;
    e.refresh.mode = RefreshMode::Blocking;
    const auto blocked = cost_trace(shifts(512), TimingParams{}, e, kGeometry);
    const auto free_run = cost_trace(shifts(512), TimingParams{}, EnergyParams{}, kGeometry);
    CHECK(blocked.stats.total_time_ns > free_run.stats.total_time_ns);
    const double stalls = (blocked.stats.total_time_ns - free_run.stats.total_time_ns) / 260.0;
    CHECK(stalls == doctest::Approx(std::round(stalls)));
    CHECK(std::round(stalls) == std::floor((blocked.stats.total_time_ns - 51.9) / 7800.0));
}

TEST_CASE("integer-only refresh counting")
{
    EnergyParams e;
    e.refresh.prorate = false;
    CHECK(cost_trace(shifts(100), TimingParams{}, e, kGeometry).ledger.sum().refresh_events == 2.0);
}

TEST_CASE("baseline movement energy")
{
    CHECK(baseline_movement_energy(8192, EnergyParams{}) == std::pair{1280.0, 1920.0});
    CHECK(baseline_movement_energy(64, EnergyParams{}) == std::pair{10.0, 15.0});
    CHECK(baseline_movement_energy(8192, EnergyParams{}, true) == std::pair{2560.0, 3840.0});
    CHECK(baseline_movement_energy(65, EnergyParams{}) == std::pair{20.0, 30.0});
    CHECK_THROWS(baseline_movement_energy(0, EnergyParams{}));
}

TEST_CASE("aggregate throughput")
{
    CHECK(aggregate_throughput(4.82, 8) == doctest::Approx(38.56));
    CHECK(aggregate_throughput(4.82, 32) == doctest::Approx(154.24));
    CHECK(aggregate_throughput(4.82, 1) == 4.82);
    CHECK_THROWS(aggregate_throughput(4.82, 0));
}

TEST_CASE("parameter validation")
{
    TimingParams t;
    CHECK_NOTHROW(t.validate());
    t.tRC = 50.0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    EnergyParams e;
    e.e_aap_active = -1.0;
    CHECK_THROWS_AS(e.validate(), ConfigError);
}

TEST_CASE("zero-duration runs are an invariant failure")
{
    TimingParams t;
    t.t_aap = 0.0;
    t.t_shift_setup = 0.0;
    ExecutionReport rep;
    rep.events.push_back({EventKind::Aap, 0, 0, 0, CommandKind::Aap});
    CHECK_THROWS_AS(cost_trace(rep, t, EnergyParams{}, kGeometry), std::logic_error);
}
