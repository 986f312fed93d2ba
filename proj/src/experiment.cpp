#include "migshift/experiment.hpp"

#include "migshift/engine.hpp"
#include "migshift/errors.hpp"
#include "migshift/kernels.hpp"
#include "migshift/memory.hpp"
#include "migshift/reliability.hpp"
#include "migshift/trace_io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <random>

namespace migshift {

namespace {

std::uint64_t reference_result(KernelKind kind, std::uint32_t width, std::uint64_t a, std::uint64_t b)
{
    switch (kind) {
    case KernelKind::AddRipple: return (a + b) & ((1ULL << (width + 1)) - 1);
    case KernelKind::MulShiftAdd: return (a * b) & ((1ULL << (2 * width)) - 1);
    case KernelKind::Gf256Mul: {
        std::uint8_t x = static_cast<std::uint8_t>(a), y = static_cast<std::uint8_t>(b), p = 0;
        while (y) {
            if (y & 1U)
                p ^= x;
            x = static_cast<std::uint8_t>((x << 1) ^ ((x & 0x80U) ? 0x1BU : 0U));
            y >>= 1;
        }
        return p;
    }
    }
    return 0;
}

void add_common(Report& r, const SimConfig& cfg, WorkloadKind kind)
{
    r.add("workload", std::string(to_string(kind)));
    r.attach("config", config_to_json(cfg));
}

ExperimentResult run_shift_bench(const SimConfig& cfg, const WorkloadSpec& w)
{
    ExperimentResult out;
    Report& r = out.report;
    add_common(r, cfg, w.kind);

    MemoryState mem = build_memory(cfg.geometry);
    const RowAddress row = row_at(0, 0, RowRef::data(0));
    std::mt19937_64 rng(kBenchPatternSeed);
    BitRow expected = BitRow::random(cfg.geometry.columns_per_row, rng);
    mem.host_write_row(row, expected);
    r.add("bench.source_hash", fmt::format("{:016x}", expected.hash()));

    out.trace = shift_bench_trace(w.shift_count);
    const ExecutionReport events = run_trace(out.trace, mem);
    const CostResult cost = cost_trace(events, cfg.timing, cfg.energy, cfg.geometry);

    for (std::size_t i = 0; i < std::min<std::size_t>(w.shift_count, cfg.geometry.columns_per_row); ++i)
        expected = expected.delayed();
    if (w.shift_count >= cfg.geometry.columns_per_row)
        expected.fill(false);
    const BitRow result = mem.host_read_row(row);

    r.add("bench.shifts", w.shift_count);
    r.add("bench.commands", events.commands_executed);
    r.add("bench.result_hash", fmt::format("{:016x}", result.hash()));
    r.add("bench.matches_oracle", result == expected);
    add_ledger(r, "energy", cost.ledger);
    add_stats(r, "stats", cost.stats);
    return out;
}

ExperimentResult run_trace_file(const SimConfig& cfg, const WorkloadSpec& w)
{
    ExperimentResult out;
    Report& r = out.report;
    add_common(r, cfg, w.kind);

    out.trace = load_trace(w.trace_path);
    MemoryState mem = build_memory(cfg.geometry);
    const ExecutionReport events = run_trace(out.trace, mem);
    const CostResult cost = cost_trace(events, cfg.timing, cfg.energy, cfg.geometry);

    r.add("trace.label", out.trace.label);
    r.add("trace.commands", events.commands_executed);
    r.add("trace.shifts", events.shifts());
    r.add("state.hash", fmt::format("{:016x}", mem.hash()));
    add_ledger(r, "energy", cost.ledger);
    add_stats(r, "stats", cost.stats);
    return out;
}

ExperimentResult run_kernel(const SimConfig& cfg, const WorkloadSpec& w)
{
    ExperimentResult out;
    Report& r = out.report;
    add_common(r, cfg, w.kind);

    const CompiledKernel k = compile_kernel(w.kernel, w.kernel_width, default_allocation(cfg.geometry), cfg.geometry);
    out.trace = k.trace;
    MemoryState mem = build_memory(cfg.geometry);
    const KernelRun run = execute_kernel(k, {{w.operand_a, w.operand_b}}, mem);
    const CostResult cost = cost_trace(run.report, cfg.timing, cfg.energy, cfg.geometry);
    const KernelCost pc = predict_cost(k.trace, cfg.timing, cfg.energy);

    const std::uint64_t expected = reference_result(w.kernel, w.kernel_width, w.operand_a, w.operand_b);
    r.add("kernel.kind", std::string(to_string(w.kernel)));
    r.add("kernel.width", static_cast<std::uint64_t>(w.kernel_width));
    r.add("kernel.a", fmt::format("0x{:x}", w.operand_a));
    r.add("kernel.b", fmt::format("0x{:x}", w.operand_b));
    r.add("kernel.result", fmt::format("0x{:x}", run.outputs.at(0)));
    r.add("kernel.expected", fmt::format("0x{:x}", expected));
    r.add("kernel.match", run.outputs.at(0) == expected && run.complement_outputs.at(0) == expected);
    r.add("kernel.lanes", static_cast<std::uint64_t>(k.program.layout.lanes));
    r.add("kernel.commands", k.trace.size());
    r.add("kernel.aap_count", pc.aap_count);
    r.add("kernel.tra_count", pc.tra_count);
    r.add("kernel.notx_count", pc.notx_count);
    r.add("kernel.shift_count", pc.shift_count);
    r.add("kernel.predicted_energy_nJ", pc.predicted_energy_nJ);
    r.add("kernel.predicted_latency_ns", pc.predicted_latency_ns);
    add_ledger(r, "energy", cost.ledger);
    add_stats(r, "stats", cost.stats);
    return out;
}

ExperimentResult run_reliability(const SimConfig& cfg, const WorkloadSpec& w)
{
    ExperimentResult out;
    Report& r = out.report;
    add_common(r, cfg, w.kind);

    const TechNodeParams node = cfg.tech_node();
    r.add("reliability.node", node.name);
    r.add("reliability.seed", cfg.seed);
    r.add("reliability.sense_threshold_mV", cfg.margin.sense_threshold_mV);
    out.csv = "level,trials,failures,rate\n";
    for (std::size_t i = 0; i < w.levels.size(); ++i) {
        const MonteCarloResult mc = monte_carlo(w.levels[i], w.trials, node, cfg.seed, cfg.margin, cfg.threads);
        const std::string key = fmt::format("reliability.runs.{}", i);
        r.add(key + ".level", mc.level);
        r.add(key + ".trials", mc.trials);
        r.add(key + ".failures", mc.failures);
        r.add(key + ".rate", mc.rate());
        for (std::size_t s = 0; s < 4; ++s)
            r.add(fmt::format("{}.failures_step{}", key, s + 1), mc.failures_by_step[s]);
        out.csv += fmt::format("{},{},{},{:.6f}\n", mc.level, mc.trials, mc.failures, mc.rate());
    }
    return out;
}

ExperimentResult run_capacitor(const SimConfig& cfg, const WorkloadSpec& w)
{
    ExperimentResult out;
    add_common(out.report, cfg, w.kind);
    const PlateGeometry g = mim_plate_area(w.cap_fF, w.cap_dielectric_nm, w.cap_eps_r);
    out.report.add("capacitor.c_fF", w.cap_fF);
    out.report.add("capacitor.dielectric_nm", w.cap_dielectric_nm);
    out.report.add("capacitor.eps_r", w.cap_eps_r);
    out.report.add("capacitor.area_nm2", g.area_nm2);
    out.report.add("capacitor.side_nm", g.side_nm);
    return out;
}

} // namespace

CommandTrace shift_bench_trace(std::size_t shifts, std::uint32_t bank, std::uint32_t subarray)
{
    CommandTrace t;
    t.label = fmt::format("shift_bench_{}", shifts);
    const RowAddress row = row_at(bank, subarray, RowRef::data(0));
    t.commands.assign(shifts, Command::shift_right(row, row));
    return t;
}

ExperimentResult run_experiment(const SimConfig& cfg, const WorkloadSpec& workload)
{
    cfg.validate();
    workload.validate();
    switch (workload.kind) {
    case WorkloadKind::ShiftBench: return run_shift_bench(cfg, workload);
    case WorkloadKind::TraceFile: return run_trace_file(cfg, workload);
    case WorkloadKind::Kernel: return run_kernel(cfg, workload);
    case WorkloadKind::Reliability: return run_reliability(cfg, workload);
    case WorkloadKind::Capacitor: return run_capacitor(cfg, workload);
    }
    throw ConfigError("unknown workload");
}

std::vector<SelfCheck> self_test()
{
    std::vector<SelfCheck> checks;
    auto check = [&](std::string name, bool pass, std::string detail) {
        checks.push_back({std::move(name), pass, std::move(detail)});
    };
    auto near = [](double v, double ref, double rel) { return std::abs(v - ref) <= rel * std::abs(ref); };

    {
        DramGeometry g{1, 1, 1, 1, 8, 8};
        std::size_t bad = 0;
        for (unsigned v = 0; v < 256; ++v) {
            MemoryState mem(g);
            BitRow src(8);
            for (unsigned c = 0; c < 8; ++c)
                src.set(c, (v >> c) & 1U);
            mem.host_write_row(row_at(0, 0, RowRef::data(0)), src);
            CommandEngine eng(mem);
            eng.exec_shift_right(row_at(0, 0, RowRef::data(0)), row_at(0, 0, RowRef::data(1)));
            eng.exec_shift_left(row_at(0, 0, RowRef::data(0)), row_at(0, 0, RowRef::data(2)));
            for (unsigned c = 0; c < 8; ++c) {
                const bool right = c == 0 ? false : src.get(c - 1);
                const bool left = c == 7 ? false : src.get(c + 1);
                bad += mem.host_read_row(row_at(0, 0, RowRef::data(1))).get(c) != right;
                bad += mem.host_read_row(row_at(0, 0, RowRef::data(2))).get(c) != left;
            }
        }
        check("shift_oracle_8col", bad == 0, fmt::format("{} mismatching bits", bad));
    }

    SimConfig cfg;
    for (std::size_t n : {1, 512}) {
        WorkloadSpec w;
        w.shift_count = n;
        const auto res = run_experiment(cfg, w);
        const auto& doc = res.report.document();
        const double e = doc["energy"]["total_nJ"].get<double>();
        const double t = doc["stats"]["total_time_ns"].get<double>();
        const double kb = doc["stats"]["energy_per_kb_nJ"].get<double>();
        if (n == 1)
            check("single_shift_cost", near(e, 31.321, 0.005) && std::abs(t - 208.7) < 1e-6,
                  fmt::format("{:.4f} nJ, {:.4f} ns", e, t));
        else
            check("shift_512_cost", near(e, 16554.6, 0.03) && near(t, 106272.0, 0.02),
                  fmt::format("{:.2f} nJ, {:.2f} ns", e, t));
        check(fmt::format("energy_per_kb_{}", n), kb >= 3.915 && kb <= 4.041, fmt::format("{:.4f} nJ/KB", kb));
    }

    const auto [lo, hi] = baseline_movement_energy(8192, EnergyParams{});
    check("baseline_8KB", lo == 1280.0 && hi == 1920.0, fmt::format("({}, {}) nJ", lo, hi));
    check("bank_scaling", near(aggregate_throughput(4.82, 32), 154.24, 1e-12), "4.82 x 32");
    const PlateGeometry plate = mim_plate_area(25.0, 8.0, 20.0);
    check("mim_plate", near(plate.area_nm2, 1.129e6, 5e-4) && near(plate.side_nm, 1063.0, 5e-4),
          fmt::format("{:.0f} nm^2, {:.1f} nm", plate.area_nm2, plate.side_nm));

    {
        DramGeometry g{1, 1, 1, 2, 512, 64};
        const CompiledKernel k = compile_kernel(KernelKind::Gf256Mul, 8, default_allocation(g), g);
        MemoryState mem(g);
        const auto run = execute_kernel(k, {{0x57, 0x83}}, mem);
        check("gf256_0x57_0x83", run.outputs.at(0) == 0xC1, fmt::format("0x{:x}", run.outputs.at(0)));
    }
    {
        const MonteCarloResult mc = monte_carlo(0.0, 1000, find_tech_node("22nm"), 1);
        check("zero_variation", mc.failures == 0, fmt::format("{} failures", mc.failures));
    }
    return checks;
}

} // namespace migshift
