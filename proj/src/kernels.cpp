#include "migshift/kernels.hpp"

#include "migshift/engine.hpp"
#include "migshift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>
#include <utility>

namespace migshift {

std::string_view to_string(KernelKind k)
{
    switch (k) {
    case KernelKind::MulShiftAdd: return "MUL_SHIFT_ADD";
    case KernelKind::AddRipple: return "ADD_RIPPLE";
    case KernelKind::Gf256Mul: return "GF256_MUL";
    }
    return "?";
}

KernelKind parse_kernel_kind(std::string_view s)
{
    if (s == "mul" || s == "MUL_SHIFT_ADD") return KernelKind::MulShiftAdd;
    if (s == "add" || s == "ADD_RIPPLE") return KernelKind::AddRipple;
    if (s == "gf256" || s == "GF256_MUL") return KernelKind::Gf256Mul;
    throw ConfigError(fmt::format("unknown kernel kind '{}'", s));
}

RowAddress RowAllocation::row(const std::string& name) const
{
    const auto it = rows.find(name);
    if (it == rows.end())
        throw ConfigError("allocation lacks row '" + name + "'");
    return at(it->second);
}

RowAddress RowAllocation::staging(const std::string& name) const
{
    const auto it = staging_rows.find(name);
    if (it == staging_rows.end())
        throw ConfigError("allocation lacks staging row '" + name + "'");
    return {channel, rank, bank, staging_subarray, RowRef::data(it->second)};
}

RowAllocation default_allocation(const DramGeometry& geometry, std::uint32_t bank, std::uint32_t subarray)
{
    RowAllocation a;
    a.bank = bank;
    a.subarray = subarray;
    a.staging_subarray = subarray + 1 < geometry.subarrays_per_bank ? subarray + 1 : subarray - 1;
    const char* names[] = {"zero", "one", "t0", "t1", "t2", "a.p", "a.n", "b.p", "b.n", "out.p", "out.n"};
    std::uint32_t next = 0;
    for (const char* n : names)
        a.rows[n] = next++;
    for (; next < geometry.rows_per_subarray; ++next)
        a.scratch.push_back(next);
    a.staging_rows["a"] = 0;
    a.staging_rows["b"] = 1;
    return a;
}

BitRow LaneLayout::pack(const std::vector<std::uint64_t>& values, std::uint32_t columns) const
{
    BitRow row(columns);
    for (std::uint32_t lane = 0; lane < values.size() && lane < lanes; ++lane)
        for (std::uint32_t bit = 0; bit < lane_bits; ++bit)
            if ((values[lane] >> bit) & 1U)
                row.set(column(lane, bit), true);
    return row;
}

std::vector<std::uint64_t> LaneLayout::unpack(const BitRow& row, std::size_t count) const
{
    std::vector<std::uint64_t> out(std::min<std::size_t>(count, lanes), 0);
    for (std::uint32_t lane = 0; lane < out.size(); ++lane)
        for (std::uint32_t bit = 0; bit < lane_bits; ++bit)
            if (row.get(column(lane, bit)))
                out[lane] |= 1ULL << bit;
    return out;
}

BitRow LaneLayout::broadcast(std::uint64_t value, std::uint32_t columns) const
{
    return pack(std::vector<std::uint64_t>(lanes, value), columns);
}

KernelCost predict_cost(const CommandTrace& trace, const TimingParams& timing, const EnergyParams& energy)
{
    KernelCost c;
    for (const auto& cmd : trace.commands) {
        switch (cmd.kind) {
        case CommandKind::Aap:
        case CommandKind::Dra: ++c.aap_count; break;
        case CommandKind::Tra: ++c.tra_count; break;
        case CommandKind::NotXsub: ++c.notx_count; break;
        case CommandKind::ShiftLeft:
        case CommandKind::ShiftRight:
            ++c.shift_count;
            c.aap_count += 4;
            break;
        default:
            throw ConfigError(fmt::format("{} is not a PIM primitive", to_string(cmd.kind)));
        }
    }
    const auto aap_like = static_cast<double>(c.aap_count + c.notx_count);
    const auto tra = static_cast<double>(c.tra_count);
    c.predicted_energy_nJ = aap_like * energy.e_aap_active + tra * energy.e_tra_active;
    c.predicted_latency_ns = aap_like * timing.t_aap + tra * timing.t_tra +
                             (c.shift_count > 0 ? timing.t_shift_setup : 0.0);
    return c;
}

namespace {

// Scratch-row pool shared by the registers of one compilation.
class RowPool {
public:
    explicit RowPool(std::vector<std::uint32_t> rows) : m_free(std::move(rows))
    {
        std::reverse(m_free.begin(), m_free.end());
    }

    std::uint32_t take()
    {
        if (m_free.empty())
            throw ConfigError("kernel allocation ran out of scratch rows");
        const auto r = m_free.back();
        m_free.pop_back();
        return r;
    }
    void give(std::uint32_t r) { m_free.push_back(r); }

private:
    std::vector<std::uint32_t> m_free;
};

// Dual-rail value: every logical row is held together with its complement
// so the monotone TRA gates can form any function. NOT is a rail swap.
struct Rails {
    std::uint32_t p;
    std::uint32_t n;

    Rails operator!() const { return {n, p}; }
};

class Reg {
public:
    explicit Reg(RowPool& pool) : m_pool(&pool), m_rails{pool.take(), pool.take()} {}
    Reg(const Reg&) = delete;
    Reg& operator=(const Reg&) = delete;
    Reg(Reg&& o) noexcept : m_pool(std::exchange(o.m_pool, nullptr)), m_rails(o.m_rails) {}
    Reg& operator=(Reg&& o) noexcept
    {
        if (this != &o) {
            release();
            m_pool = std::exchange(o.m_pool, nullptr);
            m_rails = o.m_rails;
        }
        return *this;
    }
    ~Reg() { release(); }

    Rails rails() const { return m_rails; }
    operator Rails() const { return m_rails; }

private:
    void release()
    {
        if (m_pool) {
            m_pool->give(m_rails.n);
            m_pool->give(m_rails.p);
            m_pool = nullptr;
        }
    }

    RowPool* m_pool;
    Rails m_rails;
};

class KernelBuilder {
public:
    KernelBuilder(const RowAllocation& alloc, CommandTrace& trace)
        : m_alloc(alloc), m_trace(trace), m_pool(alloc.scratch)
    {
        m_zero = alloc.rows.at("zero");
        m_one = alloc.rows.at("one");
        m_t = {alloc.rows.at("t0"), alloc.rows.at("t1"), alloc.rows.at("t2")};
    }

    RowPool& pool() { return m_pool; }

    // -- single-rail primitives -------------------------------------------

    void copy(std::uint32_t dst, std::uint32_t src)
    {
        if (dst != src)
            m_trace.push(Command::aap(at(src), at(dst)));
    }

    void maj(std::uint32_t dst, std::uint32_t x, std::uint32_t y, std::uint32_t z)
    {
        m_trace.push(Command::aap(at(x), at(m_t[0])));
        m_trace.push(Command::aap(at(y), at(m_t[1])));
        m_trace.push(Command::aap(at(z), at(m_t[2])));
        m_trace.push(Command::tra(at(m_t[0]), at(m_t[1]), at(m_t[2])));
        m_trace.push(Command::aap(at(m_t[0]), at(dst)));
    }

    void and_row(std::uint32_t dst, std::uint32_t x, std::uint32_t y) { maj(dst, x, y, m_zero); }
    void or_row(std::uint32_t dst, std::uint32_t x, std::uint32_t y) { maj(dst, x, y, m_one); }

    // -- dual-rail operations ---------------------------------------------

    Reg fresh() { return Reg(m_pool); }

    void assign(Rails dst, Rails src)
    {
        copy(dst.p, src.p);
        copy(dst.n, src.n);
    }

    Reg and_(Rails x, Rails y)
    {
        Reg r = fresh();
        and_row(r.rails().p, x.p, y.p);
        or_row(r.rails().n, x.n, y.n);
        return r;
    }

    Reg or_(Rails x, Rails y)
    {
        Reg r = fresh();
        or_row(r.rails().p, x.p, y.p);
        and_row(r.rails().n, x.n, y.n);
        return r;
    }

    /// OR(AND(x, ~y), AND(~x, y))
    Reg xor_(Rails x, Rails y)
    {
        Reg l = and_(x, !y);
        Reg r = and_(!x, y);
        return or_(l, r);
    }

    Reg maj_(Rails x, Rails y, Rails z)
    {
        Reg r = fresh();
        maj(r.rails().p, x.p, y.p, z.p);
        maj(r.rails().n, x.n, y.n, z.n);
        return r;
    }

    /// Numeric x2 within each lane (toward lower columns).
    Reg shl(Rails x) { return shift(x, true); }
    /// Numeric /2 within each lane (toward higher columns).
    Reg shr(Rails x) { return shift(x, false); }

    /// ORs copies of a single-bit-per-lane value shifted toward higher bit
    /// positions until every position up to `distance` above it is set.
    Reg spread(Rails x, std::uint32_t distance, bool toward_msb)
    {
        Reg acc = fresh();
        assign(acc, x);
        std::uint32_t covered = 0;
        while (covered < distance) {
            const std::uint32_t step = std::min(covered + 1, distance - covered);
            Reg moved = shift(acc, toward_msb);
            for (std::uint32_t i = 1; i < step; ++i)
                moved = shift(moved, toward_msb);
            acc = or_(acc, moved);
            covered += step;
        }
        return acc;
    }

    /// x + y over `bits` positions, discarding the carry out of the top.
    Reg add(Rails x, Rails y, Rails zero_const, std::uint32_t bits)
    {
        Reg carry = fresh();
        assign(carry, zero_const);
        for (std::uint32_t i = 0; i + 1 < bits; ++i) {
            Reg c = maj_(x, y, carry);
            carry = shl(c);
        }
        Reg partial = xor_(x, y);
        return xor_(partial, carry);
    }

    void set_lane_masks(Rails lane_mask) { m_lane_mask = lane_mask; }

private:
    RowAddress at(std::uint32_t row) const { return m_alloc.at(row); }

    Reg shift(Rails x, bool toward_msb)
    {
        Reg r = fresh();
        const Rails d = r.rails();
        for (auto [src, dst] : {std::pair{x.p, d.p}, std::pair{x.n, d.n}}) {
            if (toward_msb)
                m_trace.push(Command::shift_left(at(src), at(dst)));
            else
                m_trace.push(Command::shift_right(at(src), at(dst)));
        }
        // Bits pushed into guard columns are cleared so the guards keep
        // feeding 0 (true rail) and 1 (complement rail) into the next shift.
        and_row(d.p, d.p, m_lane_mask.p);
        or_row(d.n, d.n, m_lane_mask.n);
        return r;
    }

    const RowAllocation& m_alloc;
    CommandTrace& m_trace;
    RowPool m_pool;
    std::uint32_t m_zero = 0;
    std::uint32_t m_one = 0;
    std::array<std::uint32_t, 3> m_t{};
    Rails m_lane_mask{};
};

void check_allocation(const RowAllocation& a, const DramGeometry& g)
{
    if (a.subarray >= g.subarrays_per_bank || a.staging_subarray >= g.subarrays_per_bank ||
        a.bank >= g.banks_per_rank || a.channel >= g.channels || a.rank >= g.ranks_per_channel)
        throw ConfigError("kernel allocation outside the geometry");
    const auto lo = std::min(a.subarray, a.staging_subarray);
    const auto hi = std::max(a.subarray, a.staging_subarray);
    if (hi - lo != 1)
        throw ConfigError("staging subarray must be adjacent to the compute subarray");

    std::set<std::uint32_t> used;
    auto claim = [&](std::uint32_t row, const std::string& what) {
        if (row >= g.rows_per_subarray)
            throw ConfigError(fmt::format("allocation row {} ({}) does not fit the subarray", row, what));
        if (!used.insert(row).second)
            throw ConfigError(fmt::format("allocation collision on row {} ({})", row, what));
    };
    for (const char* n : {"zero", "one", "t0", "t1", "t2", "a.p", "a.n", "b.p", "b.n", "out.p", "out.n"}) {
        const auto it = a.rows.find(n);
        if (it == a.rows.end())
            throw ConfigError(std::string("allocation lacks row '") + n + "'");
    }
    for (const auto& [name, row] : a.rows)
        claim(row, name);
    for (auto row : a.scratch)
        claim(row, "scratch");

    std::set<std::uint32_t> staged;
    for (const char* n : {"a", "b"}) {
        const auto it = a.staging_rows.find(n);
        if (it == a.staging_rows.end())
            throw ConfigError(std::string("allocation lacks staging row '") + n + "'");
        if (it->second >= g.rows_per_subarray || !staged.insert(it->second).second)
            throw ConfigError("staging rows collide or do not fit");
    }
}

std::uint32_t lane_bits_for(KernelKind kind, std::uint32_t width)
{
    switch (kind) {
    case KernelKind::AddRipple: return width + 1;
    case KernelKind::MulShiftAdd: return 2 * width;
    case KernelKind::Gf256Mul: return 8;
    }
    return 0;
}

} // namespace

CompiledKernel compile_kernel(KernelKind kind, std::uint32_t width, const RowAllocation& allocation,
                              const DramGeometry& geometry)
{
    geometry.validate();
    if (kind == KernelKind::Gf256Mul ? width != 8 : (width != 4 && width != 8 && width != 16))
        throw ConfigError(fmt::format("{} does not support width {}", to_string(kind), width));
    check_allocation(allocation, geometry);

    CompiledKernel out;
    KernelProgram& prog = out.program;
    prog.kind = kind;
    prog.operand_width = width;
    prog.allocation = allocation;
    prog.columns = geometry.columns_per_row;
    prog.layout.lane_bits = lane_bits_for(kind, width);
    prog.layout.stride = prog.layout.lane_bits + 1;
    prog.layout.lanes = (geometry.columns_per_row - 1) / prog.layout.stride;
    if (prog.layout.lanes == 0)
        throw ConfigError("row too narrow for a single lane");

    const auto C = geometry.columns_per_row;
    const LaneLayout& L = prog.layout;
    auto add_const = [&](std::uint32_t row, BitRow bits) { prog.constants.emplace_back(allocation.at(row), std::move(bits)); };
    add_const(allocation.rows.at("zero"), BitRow(C));
    add_const(allocation.rows.at("one"), BitRow(C, true));

    CommandTrace& trace = out.trace;
    trace.label = fmt::format("{} w{}", to_string(kind), width);
    KernelBuilder b(allocation, trace);

    // Constants live in scratch rows for the lifetime of the program.
    std::vector<std::uint32_t> const_rows;
    auto dual_const = [&](std::uint64_t lane_value) {
        const BitRow bits = L.broadcast(lane_value, C);
        const Rails r{b.pool().take(), b.pool().take()};
        add_const(r.p, bits);
        add_const(r.n, ~bits);
        return r;
    };
    const std::uint64_t lane_all = L.lane_bits >= 64 ? ~0ULL : (1ULL << L.lane_bits) - 1;
    const Rails lane_mask = dual_const(lane_all);
    const Rails zero = dual_const(0);
    b.set_lane_masks(lane_mask);

    // Complement rails of the inputs via the open-bitline inversion.
    const Rails a{allocation.rows.at("a.p"), allocation.rows.at("a.n")};
    const Rails bb{allocation.rows.at("b.p"), allocation.rows.at("b.n")};
    trace.push(Command::not_xsub(allocation.staging("a"), allocation.row("a.n")));
    trace.push(Command::not_xsub(allocation.staging("b"), allocation.row("b.n")));
    const Rails result{allocation.rows.at("out.p"), allocation.rows.at("out.n")};

    switch (kind) {
    case KernelKind::AddRipple: {
        Reg sum = b.add(a, bb, zero, L.lane_bits);
        b.assign(result, sum);
        break;
    }
    case KernelKind::MulShiftAdd: {
        const Rails bit0 = dual_const(1);
        Reg shifted = b.fresh();
        b.assign(shifted, a);
        Reg select = b.fresh();
        b.assign(select, bit0);
        Reg acc = b.fresh();
        b.assign(acc, zero);
        for (std::uint32_t i = 0; i < width; ++i) {
            // Mask of multiplier bit i over the columns the shifted
            // multiplicand can occupy (positions i .. i + width - 1).
            Reg bit = b.and_(bb, select);
            Reg mask = b.spread(bit, width - 1, true);
            Reg partial = b.and_(shifted, mask);
            acc = b.add(acc, partial, zero, L.lane_bits);
            if (i + 1 < width) {
                shifted = b.shl(shifted);
                select = b.shl(select);
            }
        }
        b.assign(result, acc);
        break;
    }
    case KernelKind::Gf256Mul: {
        const Rails bit0 = dual_const(0x01);
        const Rails bit7 = dual_const(0x80);
        const Rails poly = dual_const(0x1B);
        Reg x = b.fresh();
        b.assign(x, a);
        Reg y = b.fresh();
        b.assign(y, bb);
        Reg acc = b.fresh();
        b.assign(acc, zero);
        for (int i = 0; i < 8; ++i) {
            Reg low = b.and_(y, bit0);
            Reg take = b.spread(low, 7, true);
            Reg term = b.and_(x, take);
            acc = b.xor_(acc, term);
            if (i == 7)
                break;
            // Branchless reduction: the carried-out bit selects the polynomial.
            Reg high = b.and_(x, bit7);
            Reg reduce = b.spread(high, 7, false);
            Reg doubled = b.shl(x);
            Reg poly_term = b.and_(poly, reduce);
            x = b.xor_(doubled, poly_term);
            y = b.shr(y);
        }
        b.assign(result, acc);
        break;
    }
    }

    out.cost = predict_cost(trace);
    return out;
}

KernelRun execute_kernel(const CompiledKernel& kernel,
                         const std::vector<std::pair<std::uint64_t, std::uint64_t>>& inputs,
                         MemoryState& mem)
{
    const KernelProgram& prog = kernel.program;
    if (mem.geometry().columns_per_row != prog.columns)
        throw ConfigError("kernel was compiled for a different row width");
    const std::uint64_t limit = prog.operand_width >= 64 ? ~0ULL : (1ULL << prog.operand_width) - 1;
    for (const auto& [a, b] : inputs)
        if (a > limit || b > limit)
            throw std::invalid_argument(fmt::format("operand exceeds {} bits", prog.operand_width));

    KernelRun run;
    run.cost = kernel.cost;
    const LaneLayout& L = prog.layout;
    const auto& alloc = prog.allocation;
    const std::uint64_t out_mask = L.lane_bits >= 64 ? ~0ULL : (1ULL << L.lane_bits) - 1;

    for (std::size_t begin = 0; begin < inputs.size(); begin += L.lanes) {
        const std::size_t end = std::min(inputs.size(), begin + L.lanes);
        std::vector<std::uint64_t> av, bv;
        for (std::size_t i = begin; i < end; ++i) {
            av.push_back(inputs[i].first);
            bv.push_back(inputs[i].second);
        }
        for (const auto& [addr, bits] : prog.constants)
            mem.host_write_row(addr, bits);
        const BitRow arow = L.pack(av, prog.columns);
        const BitRow brow = L.pack(bv, prog.columns);
        mem.host_write_row(alloc.row("a.p"), arow);
        mem.host_write_row(alloc.row("b.p"), brow);
        mem.host_write_row(alloc.staging("a"), arow);
        mem.host_write_row(alloc.staging("b"), brow);

        run.report.append(run_trace(kernel.trace, mem));
        ++run.batches;

        const auto pos = L.unpack(mem.host_read_row(alloc.row("out.p")), av.size());
        const auto neg = L.unpack(mem.host_read_row(alloc.row("out.n")), av.size());
        for (std::size_t i = 0; i < pos.size(); ++i) {
            run.outputs.push_back(pos[i]);
            run.complement_outputs.push_back(~neg[i] & out_mask);
        }
    }
    return run;
}

} // namespace migshift
