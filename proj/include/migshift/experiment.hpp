#pragma once

#include "migshift/command.hpp"
#include "migshift/config.hpp"
#include "migshift/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace migshift {

/// Fixed seed of the shift-bench source row. Independent of SimConfig::seed
/// so that only reliability output depends on the configured seed.
inline constexpr std::uint64_t kBenchPatternSeed = 0x6d69677368696674ULL;

struct ExperimentResult {
    Report report;
    std::string csv;            ///< reliability workloads only
    CommandTrace trace;         ///< the executed or compiled trace, if any
};

/// N in-place SHIFT_RIGHTs of row 0, bank 0, subarray 0.
CommandTrace shift_bench_trace(std::size_t shifts, std::uint32_t bank = 0, std::uint32_t subarray = 0);

/// Runs one workload under `cfg`. Throws ConfigError for invalid input and
/// TraceError / TraceParseError for failing traces.
ExperimentResult run_experiment(const SimConfig& cfg, const WorkloadSpec& workload);

struct SelfCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Quick end-to-end sanity checks of the default calibration.
std::vector<SelfCheck> self_test();

} // namespace migshift
