#include "migshift/engine.hpp"

#include "migshift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <utility>

namespace migshift {

namespace {

bool same_bank(const RowAddress& a, const RowAddress& b)
{
    return a.channel == b.channel && a.rank == b.rank && a.bank == b.bank;
}

void require_data_row(const RowAddress& a, std::string_view what)
{
    if (!a.row.is_data())
        throw AddressError(fmt::format("{} requires a data row, got {}", what, to_string(a.row)));
}

// Bits a migration row stores when captured from `src` through `mp`.
BitRow capture(const BitRow& src, MigrationPort mp)
{
    if (mp.side == MigrationSide::Top)
        return src.extract_parity(mp.port == Port::A ? 0 : 1);
    if (mp.port == Port::A)
        return src.extract_parity(1);
    // Bottom port B reaches column 2k+2; the last cell's port is unconnected.
    return src.extract_parity(0).advanced();
}

// Drives a migration row through `mp` onto `dst`.
void release(const BitRow& mig, MigrationPort mp, BitRow& dst)
{
    if (mp.side == MigrationSide::Top) {
        dst.deposit_parity(mp.port == Port::A ? 0 : 1, mig);
        return;
    }
    if (mp.port == Port::A) {
        dst.deposit_parity(1, mig);
        return;
    }
    // Column 0 has no bottom cell and keeps its value.
    BitRow even = mig.delayed();
    even.set(0, dst.get(0));
    dst.deposit_parity(0, even);
}

} // namespace

void CommandEngine::begin(CommandKind kind)
{
    m_origin = kind;
}

void CommandEngine::emit(EventKind kind, const RowAddress& where)
{
    const auto& g = m_mem.geometry();
    m_report.events.push_back(
        {kind, flat_bank(g, where), flat_rank(g, where), m_report.commands_executed, m_origin});
}

void CommandEngine::require_precharged(const RowAddress& addr) const
{
    if (!m_mem.bank(addr).precharged())
        throw ProtocolError("bank has an open row: " + to_string(addr));
}

void CommandEngine::require_same_subarray(const RowAddress& a, const RowAddress& b,
                                          std::string_view what) const
{
    if (!same_bank(a, b) || a.subarray != b.subarray)
        throw AddressError(fmt::format("{} operands must share a subarray: {} vs {}", what,
                                       to_string(a), to_string(b)));
}

void CommandEngine::exec_act(const RowAddress& row)
{
    begin(CommandKind::Act);
    check_address(m_mem.geometry(), row);
    require_data_row(row, "ACT");
    require_precharged(row);
    auto& sa = m_mem.subarray(row);
    sa.latch(sa.data_rows[row.row.index]);
    m_mem.bank(row).open = BankState::OpenRow{row.subarray, row.row.index};
    emit(EventKind::Act, row);
    end();
}

void CommandEngine::exec_pre(const RowAddress& bank)
{
    begin(CommandKind::Pre);
    m_mem.bank(bank).open.reset();
    emit(EventKind::Pre, bank);
    end();
}

void CommandEngine::exec_rd(const RowAddress& bank)
{
    begin(CommandKind::Rd);
    if (m_mem.bank(bank).precharged())
        throw ProtocolError("RD with no open row: " + to_string(bank));
    emit(EventKind::Rd, bank);
    end();
}

void CommandEngine::exec_wr(const RowAddress& bank)
{
    begin(CommandKind::Wr);
    if (m_mem.bank(bank).precharged())
        throw ProtocolError("WR with no open row: " + to_string(bank));
    emit(EventKind::Wr, bank);
    end();
}

void CommandEngine::check_aap(const RowAddress& src, const RowAddress& dst) const
{
    const auto& g = m_mem.geometry();
    check_address(g, src);
    check_address(g, dst);
    if (!same_bank(src, dst))
        throw AddressError("AAP across banks: " + to_string(src) + " -> " + to_string(dst));
    if (src.subarray != dst.subarray)
        throw AddressError("AAP across subarrays (use NOT_XSUB): " + to_string(src) + " -> " +
                           to_string(dst));
    if (src.row.is_migration() && dst.row.is_migration())
        throw AddressError("AAP between two migration rows");
    if (src.row.same_row(dst.row))
        throw ProtocolError("AAP source and destination are the same row: " + to_string(src));
    require_precharged(src);
}

void CommandEngine::do_aap(const RowAddress& src, const RowAddress& dst)
{
    auto& sa = m_mem.subarray(src);
    if (src.row.is_data() && dst.row.is_data()) {
        const BitRow& s = sa.data_rows[src.row.index];
        sa.latch(s);
        sa.data_rows[dst.row.index] = s;
    } else if (src.row.is_data()) {
        const BitRow& s = sa.data_rows[src.row.index];
        sa.latch(s);
        sa.migration(dst.row.migration.side) = capture(s, dst.row.migration);
    } else {
        BitRow& d = sa.data_rows[dst.row.index];
        release(sa.migration(src.row.migration.side), src.row.migration, d);
        sa.latch(d);
    }
    emit(EventKind::Aap, src);
}

void CommandEngine::exec_aap(const RowAddress& src, const RowAddress& dst)
{
    begin(CommandKind::Aap);
    check_aap(src, dst);
    do_aap(src, dst);
    end();
}

void CommandEngine::exec_dra(const RowAddress& src, const RowAddress& dst1, const RowAddress& dst2)
{
    begin(CommandKind::Dra);
    for (const auto* a : {&src, &dst1, &dst2})
        require_data_row(*a, "DRA");
    check_aap(src, dst1);
    check_aap(src, dst2);
    if (dst1.row.same_row(dst2.row))
        throw ProtocolError("DRA destinations must be distinct rows");
    auto& sa = m_mem.subarray(src);
    const BitRow s = sa.data_rows[src.row.index];
    sa.latch(s);
    sa.data_rows[dst1.row.index] = s;
    sa.data_rows[dst2.row.index] = s;
    emit(EventKind::Aap, src);
    end();
}

void CommandEngine::exec_tra(const RowAddress& a, const RowAddress& b, const RowAddress& c)
{
    begin(CommandKind::Tra);
    const auto& g = m_mem.geometry();
    for (const auto* r : {&a, &b, &c}) {
        check_address(g, *r);
        require_data_row(*r, "TRA");
    }
    require_same_subarray(a, b, "TRA");
    require_same_subarray(a, c, "TRA");
    if (a.row.same_row(b.row) || a.row.same_row(c.row) || b.row.same_row(c.row))
        throw ProtocolError("TRA needs three distinct rows");
    require_precharged(a);

    auto& sa = m_mem.subarray(a);
    const BitRow maj = BitRow::majority(sa.data_rows[a.row.index], sa.data_rows[b.row.index],
                                        sa.data_rows[c.row.index]);
    sa.data_rows[a.row.index] = maj;
    sa.data_rows[b.row.index] = maj;
    sa.data_rows[c.row.index] = maj;
    sa.latch(maj);
    emit(EventKind::Tra, a);
    end();
}

void CommandEngine::exec_not_xsub(const RowAddress& src, const RowAddress& dst)
{
    begin(CommandKind::NotXsub);
    const auto& g = m_mem.geometry();
    check_address(g, src);
    check_address(g, dst);
    require_data_row(src, "NOT_XSUB");
    require_data_row(dst, "NOT_XSUB");
    if (!same_bank(src, dst))
        throw AddressError("NOT_XSUB across banks: " + to_string(src) + " -> " + to_string(dst));
    const auto lo = std::min(src.subarray, dst.subarray);
    const auto hi = std::max(src.subarray, dst.subarray);
    if (hi - lo != 1)
        throw AddressError(fmt::format("NOT_XSUB needs adjacent subarrays (got s{} -> s{})",
                                       src.subarray, dst.subarray));
    require_precharged(src);

    const BitRow inverted = ~m_mem.subarray(src).data_rows[src.row.index];
    m_mem.subarray(src).latch(~inverted);
    auto& dsa = m_mem.subarray(dst);
    dsa.data_rows[dst.row.index] = inverted;
    emit(EventKind::Aap, src);
    end();
}

void CommandEngine::check_shift(const RowAddress& src, const RowAddress& dst) const
{
    const auto& g = m_mem.geometry();
    check_address(g, src);
    check_address(g, dst);
    require_data_row(src, "SHIFT");
    require_data_row(dst, "SHIFT");
    require_same_subarray(src, dst, "SHIFT");
    require_precharged(src);
}

void CommandEngine::exec_shift_right(const RowAddress& src, const RowAddress& dst)
{
    begin(CommandKind::ShiftRight);
    check_shift(src, dst);
    auto mig = [&](RowRef r) { return RowAddress{src.channel, src.rank, src.bank, src.subarray, r}; };
    do_aap(src, mig(RowRef::top(Port::A)));      // even columns up
    do_aap(src, mig(RowRef::bottom(Port::A)));   // odd columns down
    do_aap(mig(RowRef::top(Port::B)), dst);      // dst odd columns
    do_aap(mig(RowRef::bottom(Port::B)), dst);   // dst even columns 2..C-2
    m_mem.subarray(dst).data_rows[dst.row.index].set(0, kShiftEdgeFill);
    end();
}

void CommandEngine::exec_shift_left(const RowAddress& src, const RowAddress& dst)
{
    begin(CommandKind::ShiftLeft);
    check_shift(src, dst);
    auto mig = [&](RowRef r) { return RowAddress{src.channel, src.rank, src.bank, src.subarray, r}; };
    do_aap(src, mig(RowRef::bottom(Port::B)));   // even columns 2..C-2 down
    do_aap(src, mig(RowRef::top(Port::B)));      // odd columns up
    do_aap(mig(RowRef::bottom(Port::A)), dst);   // dst odd columns
    do_aap(mig(RowRef::top(Port::A)), dst);      // dst even columns
    const auto last = m_mem.geometry().columns_per_row - 1;
    m_mem.subarray(dst).data_rows[dst.row.index].set(last, kShiftEdgeFill);
    end();
}

void CommandEngine::execute(const Command& cmd)
{
    if (cmd.operands.size() != expected_arity(cmd.kind))
        throw ProtocolError(fmt::format("{} expects {} operands, got {}", to_string(cmd.kind),
                                        expected_arity(cmd.kind), cmd.operands.size()));
    const auto& o = cmd.operands;
    switch (cmd.kind) {
    case CommandKind::Act: exec_act(o[0]); break;
    case CommandKind::Pre: exec_pre(o[0]); break;
    case CommandKind::Rd: exec_rd(o[0]); break;
    case CommandKind::Wr: exec_wr(o[0]); break;
    case CommandKind::Aap: exec_aap(o[0], o[1]); break;
    case CommandKind::Dra: exec_dra(o[0], o[1], o[2]); break;
    case CommandKind::Tra: exec_tra(o[0], o[1], o[2]); break;
    case CommandKind::NotXsub: exec_not_xsub(o[0], o[1]); break;
    case CommandKind::ShiftLeft: exec_shift_left(o[0], o[1]); break;
    case CommandKind::ShiftRight: exec_shift_right(o[0], o[1]); break;
    }
}

ExecutionReport run_trace(const CommandTrace& trace, MemoryState& mem)
{
    CommandEngine engine(mem);
    for (std::size_t i = 0; i < trace.commands.size(); ++i) {
        try {
            engine.execute(trace.commands[i]);
        } catch (const AddressError& e) {
            throw TraceError(i, TraceError::Cause::Address, e.what());
        } catch (const ProtocolError& e) {
            throw TraceError(i, TraceError::Cause::Protocol, e.what());
        }
    }
    return engine.take_report();
}

} // namespace migshift
