#pragma once

#include "migshift/bit_row.hpp"
#include "migshift/command.hpp"
#include "migshift/geometry.hpp"
#include "migshift/memory.hpp"
#include "migshift/timing_energy.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace migshift {

enum class KernelKind : std::uint8_t { MulShiftAdd, AddRipple, Gf256Mul };

std::string_view to_string(KernelKind k);
/// Accepts "mul", "add", "gf256" and the enumerator spellings.
KernelKind parse_kernel_kind(std::string_view s);

/// Rows a kernel may use. Everything runs in `subarray`; `staging_subarray`
/// (adjacent to it) receives plain copies of the inputs, which NOT_XSUB
/// turns into their complements next to the originals.
///
/// Required names in `rows`: zero, one (control rows), t0, t1, t2 (TRA
/// operands), a.p, a.n, b.p, b.n, out.p, out.n. Required names in
/// `staging_rows`: a, b. `scratch` holds rows free for temporaries.
struct RowAllocation {
    std::uint32_t channel = 0;
    std::uint32_t rank = 0;
    std::uint32_t bank = 0;
    std::uint32_t subarray = 0;
    std::uint32_t staging_subarray = 1;
    std::map<std::string, std::uint32_t> rows;
    std::map<std::string, std::uint32_t> staging_rows;
    std::vector<std::uint32_t> scratch;

    RowAddress at(std::uint32_t row) const { return {channel, rank, bank, subarray, RowRef::data(row)}; }
    RowAddress row(const std::string& name) const;
    RowAddress staging(const std::string& name) const;
};

/// Default allocation: named rows first, then every remaining row as scratch.
RowAllocation default_allocation(const DramGeometry& geometry, std::uint32_t bank = 0,
                                 std::uint32_t subarray = 0);

/// Horizontal operand layout: each lane holds one operand, one bit per
/// column with the most significant bit at the lowest column. A guard
/// column precedes every lane and one trails the last lane.
struct LaneLayout {
    std::uint32_t lane_bits = 0;
    std::uint32_t stride = 0;   ///< lane_bits + 1 guard
    std::uint32_t lanes = 0;

    std::uint32_t column(std::uint32_t lane, std::uint32_t bit) const
    {
        return lane * stride + 1 + (lane_bits - 1 - bit);
    }
    BitRow pack(const std::vector<std::uint64_t>& values, std::uint32_t columns) const;
    std::vector<std::uint64_t> unpack(const BitRow& row, std::size_t count) const;
    /// Per-lane constant `value` in every lane, guards 0.
    BitRow broadcast(std::uint64_t value, std::uint32_t columns) const;
};

struct KernelCost {
    std::size_t aap_count = 0;    ///< AAP events, including the four per shift
    std::size_t tra_count = 0;
    std::size_t notx_count = 0;
    std::size_t shift_count = 0;
    double predicted_energy_nJ = 0.0;
    double predicted_latency_ns = 0.0;
};

/// Static cost of a trace with the given calibration.
KernelCost predict_cost(const CommandTrace& trace, const TimingParams& timing = {},
                        const EnergyParams& energy = {});

struct KernelProgram {
    KernelKind kind = KernelKind::AddRipple;
    std::uint32_t operand_width = 0;
    RowAllocation allocation;
    LaneLayout layout;
    std::uint32_t columns = 0;
    /// Constant rows loaded by the host before the trace runs.
    std::vector<std::pair<RowAddress, BitRow>> constants;
};

struct CompiledKernel {
    KernelProgram program;
    CommandTrace trace;
    KernelCost cost;
};

/// Throws ConfigError for an unsupported width, a row collision or an
/// allocation that runs out of scratch rows.
CompiledKernel compile_kernel(KernelKind kind, std::uint32_t width, const RowAllocation& allocation,
                              const DramGeometry& geometry);

struct KernelRun {
    std::vector<std::uint64_t> outputs;
    /// Complement rail decoded and inverted; equals `outputs` when the
    /// dual-rail invariant held.
    std::vector<std::uint64_t> complement_outputs;
    KernelCost cost;            ///< per trace execution
    std::size_t batches = 0;
    ExecutionReport report;     ///< events of every batch
};

/// Loads operand pairs lane by lane, runs the trace once per batch of
/// `layout.lanes` pairs and decodes the results. Engine errors propagate.
KernelRun execute_kernel(const CompiledKernel& kernel,
                         const std::vector<std::pair<std::uint64_t, std::uint64_t>>& inputs,
                         MemoryState& mem);

} // namespace migshift
