#include "migshift/config.hpp"
#include "migshift/errors.hpp"
#include "migshift/experiment.hpp"
#include "migshift/reliability.hpp"
#include "migshift/trace_io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace migshift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTrace = 3;
constexpr int kExitSelfTest = 4;

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write " + path);
    out << content;
}

std::uint64_t parse_operand(const std::string& s)
{
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw ConfigError("invalid operand '" + s + "'");
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bit-level simulator of migration-cell shifts in open-bitline DRAM"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    std::string report_path;
    std::string json_path;
    bool dump_config = false;
    app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "override one config key (key=value), repeatable");
    app.add_option("--report", report_path, "write the key=value report here instead of stdout");
    app.add_option("--json", json_path, "write the JSON report here");
    app.add_flag("--dump-config", dump_config, "print the effective configuration and exit");

    WorkloadSpec w;
    std::string a_text = "0";
    std::string b_text = "0";
    std::string kind_text = "add";
    std::string trace_out;
    std::string csv_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> node;
    std::optional<unsigned> threads;

    auto* run = app.add_subcommand("run", "execute a command-trace file");
    run->add_option("trace", w.trace_path, "trace file")->required();

    auto* bench = app.add_subcommand("shift-bench", "in-place right shifts of one row in bank 0");
    bench->add_option("--shifts", w.shift_count, "number of shifts")->default_val(1);

    auto* rel = app.add_subcommand("reliability", "Monte-Carlo failure rates of one shift");
    rel->add_option("--levels", w.levels, "variation levels as fractions, e.g. 0 0.05 0.1 0.2")->delimiter(',');
    rel->add_option("--trials", w.trials, "trials per level");
    rel->add_option("--seed", seed, "base seed");
    rel->add_option("--node", node, "technology node name");
    rel->add_option("--threads", threads, "worker threads");
    rel->add_option("--csv", csv_path, "write the CSV here instead of stdout");

    auto* kern = app.add_subcommand("kernel", "compile and run one arithmetic kernel");
    kern->add_option("--kind", kind_text, "mul, add or gf256")->required();
    kern->add_option("--width", w.kernel_width, "operand width in bits")->default_val(8);
    kern->add_option("--a", a_text, "first operand (hex with 0x or decimal)");
    kern->add_option("--b", b_text, "second operand");
    kern->add_option("--trace-out", trace_out, "dump the compiled trace");

    auto* cap = app.add_subcommand("capacitor", "MIM capacitor plate size");
    cap->add_option("--c", w.cap_fF, "capacitance in fF");
    cap->add_option("--d", w.cap_dielectric_nm, "dielectric thickness in nm");
    cap->add_option("--epsr", w.cap_eps_r, "relative permittivity");

    double cal_level = 0.10;
    double cal_target = 0.14;
    auto* calib = app.add_subcommand("calibrate", "fit the sense threshold to a target failure rate");
    calib->add_option("--level", cal_level, "variation level of the anchor point");
    calib->add_option("--target", cal_target, "failure rate to reproduce at that level");
    calib->add_option("--trials", w.trials, "trials");
    calib->add_option("--seed", seed, "base seed");
    calib->add_option("--node", node, "technology node name");

    auto* selftest = app.add_subcommand("self-test", "run built-in sanity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    if (app.get_subcommands().empty() && !dump_config) {
        fmt::print(stderr, "{}", app.help());
        return kExitConfig;
    }

    try {
        if (*selftest) {
            bool ok = true;
            for (const auto& c : self_test()) {
                fmt::print("{} {} ({})\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
                ok = ok && c.pass;
            }
            return ok ? kExitOk : kExitSelfTest;
        }

        SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed)
            cfg.seed = *seed;
        if (node)
            cfg.node = *node;
        if (threads)
            cfg.threads = *threads;
        cfg.validate();
        if (dump_config) {
            fmt::print("{}", serialize_config(cfg));
            return kExitOk;
        }

        if (*calib) {
            const double th = calibrate_threshold(cal_level, cal_target, w.trials, cfg.tech_node(), cfg.seed, cfg.margin);
            fmt::print("sense_threshold_mV={:.17g}\n", th);
            return kExitOk;
        }
        if (*run)
            w.kind = WorkloadKind::TraceFile;
        else if (*bench)
            w.kind = WorkloadKind::ShiftBench;
        else if (*rel)
            w.kind = WorkloadKind::Reliability;
        else if (*kern) {
            w.kind = WorkloadKind::Kernel;
            w.kernel = parse_kernel_kind(kind_text);
            w.operand_a = parse_operand(a_text);
            w.operand_b = parse_operand(b_text);
        } else if (*cap)
            w.kind = WorkloadKind::Capacitor;

        const ExperimentResult res = run_experiment(cfg, w);

        if (!trace_out.empty())
            write_file(trace_out, format_trace(res.trace));
        if (!json_path.empty())
            write_file(json_path, res.report.json());
        if (w.kind == WorkloadKind::Reliability) {
            if (csv_path.empty())
                fmt::print("{}", res.csv);
            else
                write_file(csv_path, res.csv);
            if (!report_path.empty())
                write_file(report_path, res.report.text());
        } else if (report_path.empty()) {
            fmt::print("{}", res.report.text());
        } else {
            write_file(report_path, res.report.text());
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const ParameterError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const TraceParseError& e) {
        fmt::print(stderr, "trace error: {}: {}\n", w.trace_path, e.what());
        return kExitTrace;
    } catch (const TraceError& e) {
        fmt::print(stderr, "trace error: {}\n", e.what());
        return kExitTrace;
    } catch (const AddressError& e) {
        fmt::print(stderr, "trace error: {}\n", e.what());
        return kExitTrace;
    } catch (const ProtocolError& e) {
        fmt::print(stderr, "trace error: {}\n", e.what());
        return kExitTrace;
    }
}
