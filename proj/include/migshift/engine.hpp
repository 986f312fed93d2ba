#pragma once

#include "migshift/command.hpp"
#include "migshift/memory.hpp"

#include <string_view>
#include <utility>

namespace migshift {

/// Value written into the vacated boundary column of a shifted row.
/// Shifts are logical: the bit pushed past the far edge is discarded.
inline constexpr bool kShiftEdgeFill = false;

/// Applies DRAM and PIM commands to a MemoryState with bit-exact semantics
/// and records the primitive events each command costs.
///
/// Every command validates all operands before touching state, so a
/// rejected command leaves memory and bank state unchanged.
class CommandEngine {
public:
    explicit CommandEngine(MemoryState& mem) : m_mem(mem) {}

    void exec_act(const RowAddress& row);
    void exec_pre(const RowAddress& bank);
    void exec_rd(const RowAddress& bank);
    void exec_wr(const RowAddress& bank);

    /// RowClone. A migration operand participates only through the bitlines
    /// of its selected port: capture stores the port-side column of every
    /// cell, release drives every cell onto its port-side column and leaves
    /// the other columns of the destination as they were.
    void exec_aap(const RowAddress& src, const RowAddress& dst);
    void exec_dra(const RowAddress& src, const RowAddress& dst1, const RowAddress& dst2);
    /// Destructive majority: all three rows end up holding MAJ(a, b, c).
    void exec_tra(const RowAddress& a, const RowAddress& b, const RowAddress& c);
    /// dst = ~src where dst lives in the subarray on the other side of the
    /// shared sense-amplifier stripe.
    void exec_not_xsub(const RowAddress& src, const RowAddress& dst);

    /// Four RowClones: src -> top.A, src -> bot.A, top.B -> dst, bot.B -> dst.
    /// Result: dst[i+1] = src[i], dst[0] = kShiftEdgeFill.
    void exec_shift_right(const RowAddress& src, const RowAddress& dst);
    /// Four RowClones: src -> bot.B, src -> top.B, bot.A -> dst, top.A -> dst.
    /// Result: dst[i] = src[i+1], dst[C-1] = kShiftEdgeFill.
    void exec_shift_left(const RowAddress& src, const RowAddress& dst);

    void execute(const Command& cmd);

    const ExecutionReport& report() const noexcept { return m_report; }
    ExecutionReport take_report() { return std::exchange(m_report, {}); }

private:
    void begin(CommandKind kind);
    void end() { ++m_report.commands_executed; }
    void emit(EventKind kind, const RowAddress& where);

    void require_precharged(const RowAddress& addr) const;
    void require_same_subarray(const RowAddress& a, const RowAddress& b, std::string_view what) const;
    void check_aap(const RowAddress& src, const RowAddress& dst) const;
    void check_shift(const RowAddress& src, const RowAddress& dst) const;
    void do_aap(const RowAddress& src, const RowAddress& dst);

    MemoryState& m_mem;
    ExecutionReport m_report;
    CommandKind m_origin = CommandKind::Aap;
};

/// Executes a trace in order. The first failing command aborts the run with
/// a TraceError carrying its index.
ExecutionReport run_trace(const CommandTrace& trace, MemoryState& mem);

} // namespace migshift
