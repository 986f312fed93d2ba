#pragma once

#include "migshift/geometry.hpp"
#include "migshift/kernels.hpp"
#include "migshift/reliability.hpp"
#include "migshift/timing_energy.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace migshift {

/// Everything an experiment needs besides the workload itself.
struct SimConfig {
    DramGeometry geometry;
    TimingParams timing;
    EnergyParams energy;
    std::string node = "22nm";
    std::string node_table;      ///< optional CSV overriding the built-in presets
    MarginModel margin;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    /// Throws ConfigError if any section is inconsistent.
    void validate() const;
    /// Resolves `node` against `node_table` or the presets.
    TechNodeParams tech_node() const;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// Flat key=value format, one setting per line, '#' starts a comment:
//
//   geometry.columns_per_row = 65536
//   timing.t_aap = 51.9
//   refresh.mode = blocking
//   node = 22nm
//
// Unknown keys and malformed values raise ConfigError with the line number.

SimConfig parse_config(std::string_view text, const std::string& origin = "<config>");
SimConfig load_config(const std::string& path);
/// Every key with its current value, in a fixed order; parse_config of the
/// result reproduces `cfg` exactly.
std::string serialize_config(const SimConfig& cfg);
/// Applies a single key=value pair (used for command-line overrides).
void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value);
std::vector<std::string> config_keys();

enum class WorkloadKind : std::uint8_t { ShiftBench, TraceFile, Kernel, Reliability, Capacitor };

std::string_view to_string(WorkloadKind k);

struct WorkloadSpec {
    WorkloadKind kind = WorkloadKind::ShiftBench;
    std::size_t shift_count = 1;
    std::string trace_path;
    KernelKind kernel = KernelKind::AddRipple;
    std::uint32_t kernel_width = 8;
    std::uint64_t operand_a = 0;
    std::uint64_t operand_b = 0;
    std::vector<double> levels = {0.0, 0.05, 0.10, 0.20};
    std::size_t trials = 100000;
    double cap_fF = 25.0;
    double cap_dielectric_nm = 8.0;
    double cap_eps_r = 20.0;

    /// Throws ConfigError for out-of-range parameters.
    void validate() const;
};

} // namespace migshift
