// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "migshift/engine.hpp"
#include "migshift/experiment.hpp"
#include "migshift/kernels.hpp"
#include "migshift/reliability.hpp"
#include "migshift/timing_energy.hpp"

#include "oracles.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace migshift;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

bool within_rel(double v, double ref, double tol) { return std::abs(v - ref) <= tol * std::abs(ref); }

RowAddress row(std::uint32_t r) { return row_at(0, 0, RowRef::data(r)); }

CostResult bench_cost(std::size_t shifts)
{
    const DramGeometry g;
    MemoryState mem(g);
    const auto rep = run_trace(shift_bench_trace(shifts), mem);
    return cost_trace(rep, TimingParams{}, EnergyParams{}, g);
}

Outcome shift_correctness()
{
    std::size_t bad = 0;
    {
        const DramGeometry g{1, 1, 1, 1, 4, 8};
        for (unsigned v = 0; v < 256; ++v) {
            oracle::Bits src(8);
            for (unsigned c = 0; c < 8; ++c)
                src[c] = (v >> c) & 1U;
            MemoryState mem(g);
            mem.host_write_row(row(0), oracle::row_of(src));
            CommandEngine eng(mem);
            eng.exec_shift_right(row(0), row(1));
            eng.exec_shift_left(row(0), row(2));
            bad += oracle::bits_of(mem.host_read_row(row(1))) != oracle::shift_right(src);
            bad += oracle::bits_of(mem.host_read_row(row(2))) != oracle::shift_left(src);
        }
    }
    const DramGeometry g{1, 1, 1, 1, 4, 65536};
    MemoryState mem(g);
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 1000; ++t) {
        const auto src = oracle::random_bits(65536, rng);
        mem.host_write_row(row(0), oracle::row_of(src));
        CommandEngine eng(mem);
        eng.exec_shift_right(row(0), row(1));
        eng.exec_shift_left(row(0), row(2));
        bad += oracle::bits_of(mem.host_read_row(row(1))) != oracle::shift_right(src);
        bad += oracle::bits_of(mem.host_read_row(row(2))) != oracle::shift_left(src);
    }
    return {bad == 0, fmt::format("{} mismatching rows out of 2512", bad)};
}

Outcome aap_structure()
{
    const DramGeometry g{1, 1, 1, 1, 8, 256};
    MemoryState mem(g);
    CommandTrace t;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
        const auto a = static_cast<std::uint32_t>(rng() % 8);
        const auto b = static_cast<std::uint32_t>(rng() % 8);
        t.push(i % 2 ? Command::shift_left(row(a), row(b)) : Command::shift_right(row(a), row(b)));
    }
    const auto rep = run_trace(t, mem);
    std::vector<int> per(10000, 0);
    bool only_aap = true;
    for (const auto& e : rep.events) {
        only_aap = only_aap && e.kind == EventKind::Aap;
        ++per[e.command_index];
    }
    std::size_t wrong = 0;
    for (int n : per)
        wrong += n != 4;
    return {only_aap && wrong == 0 && rep.events.size() == 40000,
            fmt::format("{} events, {} shifts without exactly 4 AAPs", rep.events.size(), wrong)};
}

Outcome energy_totals()
{
    const double e1 = bench_cost(1).ledger.total();
    bool ok = within_rel(e1, 31.321, 0.005);
    std::string detail = fmt::format("1: {:.3f} nJ", e1);
    const std::pair<std::size_t, double> refs[] = {{50, 1592.52}, {100, 3223.6}, {512, 16554.6}};
    for (auto [n, ref] : refs) {
        const double e = bench_cost(n).ledger.total();
        ok = ok && within_rel(e, ref, 0.03);
        detail += fmt::format(", {}: {:.2f} nJ ({:+.2f}%)", n, e, 100.0 * (e - ref) / ref);
    }
    return {ok, detail};
}

Outcome latency_totals()
{
    const double t1 = bench_cost(1).stats.total_time_ns;
    bool ok = std::abs(t1 - 208.7) < 1e-9;
    std::string detail = fmt::format("1: {:.3f} ns", t1);
    const std::pair<std::size_t, double> refs[] = {{50, 10.291}, {100, 20.733}, {512, 106.272}};
    double mops = 0.0;
    for (auto [n, ref] : refs) {
        const auto c = bench_cost(n);
        const double us = c.stats.total_time_ns / 1000.0;
        ok = ok && within_rel(us, ref, 0.02);
        detail += fmt::format(", {}: {:.3f} us ({:+.2f}%)", n, us, 100.0 * (us - ref) / ref);
        mops = c.stats.throughput_mops;
    }
    ok = ok && within_rel(mops, 4.82, 0.02);
    detail += fmt::format(", throughput {:.3f} MOps/s", mops);
    return {ok, detail};
}

Outcome efficiency_band()
{
    bool ok = true;
    std::string detail;
    for (std::size_t n : {1u, 50u, 100u, 512u}) {
        const double kb = bench_cost(n).stats.energy_per_kb_nj;
        ok = ok && kb >= 3.915 && kb <= 4.041;
        detail += fmt::format("{}{}: {:.4f}", detail.empty() ? "" : ", ", n, kb);
    }
    return {ok, detail + " nJ/KB"};
}

Outcome bank_parallelism()
{
    const double a8 = aggregate_throughput(4.82, 8);
    const double a32 = aggregate_throughput(4.82, 32);
    return {within_rel(a8, 38.56, 1e-12) && within_rel(a32, 154.24, 1e-12),
            fmt::format("8 banks {:.2f}, 32 banks {:.2f} MOps/s", a8, a32)};
}

Outcome baseline()
{
    const auto [lo, hi] = baseline_movement_energy(8192, EnergyParams{});
    return {lo == 1280.0 && hi == 1920.0, fmt::format("({}, {}) nJ", lo, hi)};
}

Outcome variation_rates()
{
    const auto& node = find_tech_node("22nm");
    const double levels[] = {0.0, 0.05, 0.10, 0.20};
    double rate[4];
    for (int i = 0; i < 4; ++i)
        rate[i] = monte_carlo(levels[i], 100000, node, 1).rate();
    const bool ok = rate[0] == 0.0 && rate[1] >= 0.001 && rate[1] <= 0.02 && std::abs(rate[2] - 0.14) <= 0.01 &&
                    rate[3] >= 0.22 && rate[3] <= 0.38 && rate[0] < rate[1] && rate[1] < rate[2] && rate[2] < rate[3];
    return {ok, fmt::format("threshold {:.4f} mV; 0%: {:.3f}%, 5%: {:.3f}%, 10%: {:.3f}%, 20%: {:.3f}%",
                            kCalibratedSenseThresholdMv, 100 * rate[0], 100 * rate[1], 100 * rate[2], 100 * rate[3])};
}

Outcome mim_geometry()
{
    const auto g = mim_plate_area(25.0, 8.0, 20.0);
    const double area_3sf = std::round(g.area_nm2 / 1e3) / 1e3;   // in units of 1e6 nm^2
    const double side_3sf = std::round(g.side_nm);
    return {area_3sf == 1.129 && side_3sf == 1063.0,
            fmt::format("area {:.0f} nm^2, side {:.2f} nm", g.area_nm2, g.side_nm)};
}

Outcome kernel_oracles()
{
    const DramGeometry g{1, 1, 1, 2, 512, 65536};
    const oracle::Gf256 gf;
    std::size_t bad = 0;
    auto sweep = [&](KernelKind kind, std::uint32_t width, auto&& expect) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> in;
        for (std::uint64_t a = 0; a < (1ULL << width); ++a)
            for (std::uint64_t b = 0; b < (1ULL << width); ++b)
                in.emplace_back(a, b);
        const auto k = compile_kernel(kind, width, default_allocation(g), g);
        MemoryState mem(g);
        const auto r = execute_kernel(k, in, mem);
        for (std::size_t i = 0; i < in.size(); ++i)
            bad += r.outputs[i] != expect(in[i].first, in[i].second);
        return in.size();
    };
    std::size_t total = 0;
    total += sweep(KernelKind::Gf256Mul, 8, [&](std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>(gf.mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)));
    });
    total += sweep(KernelKind::MulShiftAdd, 8, [](std::uint64_t a, std::uint64_t b) { return a * b; });
    total += sweep(KernelKind::AddRipple, 4, [](std::uint64_t a, std::uint64_t b) { return a + b; });
    return {bad == 0, fmt::format("{} mismatches over {} cases", bad, total)};
}

Outcome determinism()
{
    std::vector<WorkloadSpec> ws(3);
    ws[0].shift_count = 512;
    ws[1].kind = WorkloadKind::Kernel;
    ws[1].kernel = KernelKind::MulShiftAdd;
    ws[1].operand_a = 201;
    ws[1].operand_b = 99;
    ws[2].kind = WorkloadKind::Reliability;
    ws[2].trials = 20000;
    std::size_t differing = 0;
    for (const auto& w : ws) {
        const auto a = run_experiment(SimConfig{}, w);
        const auto b = run_experiment(SimConfig{}, w);
        differing += a.report.text() != b.report.text() || a.report.json() != b.report.json() || a.csv != b.csv;
    }
    return {differing == 0, fmt::format("{} of {} workloads differ between runs", differing, ws.size())};
}

} // namespace

int main()
{
    struct Criterion {
        std::string name;
        std::function<Outcome()> check;
        double time_limit_s;
    };
    const std::vector<Criterion> criteria = {
        {"shift correctness vs displacement oracle", shift_correctness, 60.0},
        {"4 AAP events per shift", aap_structure, 60.0},
        {"energy breakdown totals", energy_totals, 60.0},
        {"latency and throughput", latency_totals, 60.0},
        {"energy per KB band", efficiency_band, 60.0},
        {"bank-parallel throughput", bank_parallelism, 1.0},
        {"baseline 8KB movement energy", baseline, 1.0},
        {"process-variation failure rates", variation_rates, 300.0},
        {"MIM plate geometry", mim_geometry, 1.0},
        {"kernel oracles", kernel_oracles, 600.0},
        {"report determinism", determinism, 60.0},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = criteria[i].check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = o.pass && secs <= criteria[i].time_limit_s;
        fmt::print("{} [{:2}] {}: {} ({:.2f} s, limit {:.0f} s)\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                   o.detail, secs, criteria[i].time_limit_s);
        failed += !pass;
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}
