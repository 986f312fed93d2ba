#include "migshift/memory.hpp"

#include "migshift/errors.hpp"

#include <fmt/format.h>

namespace migshift {

namespace {

std::uint64_t combine(std::uint64_t seed, std::uint64_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace

SubarrayState::SubarrayState(const DramGeometry& g)
    : data_rows(g.rows_per_subarray, BitRow(g.columns_per_row)),
      top_mig(g.migration_cells()),
      bottom_mig(g.migration_cells()),
      row_buffer_top(g.migration_cells()),
      row_buffer_bottom(g.migration_cells())
{
}

void SubarrayState::latch(const BitRow& row)
{
    row_buffer_top = row.extract_parity(0);
    row_buffer_bottom = row.extract_parity(1);
}

std::uint64_t SubarrayState::hash() const noexcept
{
    std::uint64_t h = 0;
    for (const auto& r : data_rows)
        h = combine(h, r.hash());
    h = combine(h, top_mig.hash());
    h = combine(h, bottom_mig.hash());
    return h;
}

MemoryState::MemoryState(const DramGeometry& geometry) : m_geometry(geometry)
{
    m_geometry.validate();
    m_banks.resize(m_geometry.total_banks());
}

SubarrayState& MemoryState::subarray(const RowAddress& addr)
{
    check_address(m_geometry, addr);
    const auto key = flat_subarray(m_geometry, addr);
    auto it = m_subarrays.find(key);
    if (it == m_subarrays.end())
        it = m_subarrays.emplace(key, SubarrayState(m_geometry)).first;
    return it->second;
}

const SubarrayState* MemoryState::find_subarray(const RowAddress& addr) const
{
    check_address(m_geometry, addr);
    const auto it = m_subarrays.find(flat_subarray(m_geometry, addr));
    return it == m_subarrays.end() ? nullptr : &it->second;
}

BankState& MemoryState::bank(const RowAddress& addr)
{
    check_address(m_geometry, addr);
    return m_banks[flat_bank(m_geometry, addr)];
}

const BankState& MemoryState::bank(const RowAddress& addr) const
{
    check_address(m_geometry, addr);
    return m_banks[flat_bank(m_geometry, addr)];
}

void MemoryState::host_write_row(const RowAddress& addr, const BitRow& bits)
{
    check_address(m_geometry, addr);
    if (!addr.row.is_data())
        throw AddressError("host writes must target a data row, not " + to_string(addr.row));
    if (bits.size() != m_geometry.columns_per_row)
        throw AddressError(fmt::format("row write of {} bits into a {}-column row", bits.size(),
                                       m_geometry.columns_per_row));
    if (!bank(addr).precharged())
        throw ProtocolError("host write while bank has an open row: " + to_string(addr));
    subarray(addr).data_rows[addr.row.index] = bits;
}

BitRow MemoryState::host_read_row(const RowAddress& addr) const
{
    const SubarrayState* sa = find_subarray(addr);
    if (addr.row.is_data())
        return sa ? sa->data_rows[addr.row.index] : BitRow(m_geometry.columns_per_row);
    return sa ? sa->migration(addr.row.migration.side) : BitRow(m_geometry.migration_cells());
}

std::uint64_t MemoryState::zero_subarray_hash() const
{
    if (!m_zero_hash)
        m_zero_hash = SubarrayState(m_geometry).hash();
    return *m_zero_hash;
}

std::uint64_t MemoryState::subarray_hash(const RowAddress& addr) const
{
    const SubarrayState* sa = find_subarray(addr);
    return sa ? sa->hash() : zero_subarray_hash();
}

std::uint64_t MemoryState::hash_excluding(const RowAddress& addr) const
{
    check_address(m_geometry, addr);
    const auto skip = flat_subarray(m_geometry, addr);
    const auto zero = zero_subarray_hash();
    std::uint64_t h = 0;
    for (const auto& [key, sa] : m_subarrays) {
        if (key == skip)
            continue;
        const auto sh = sa.hash();
        if (sh != zero)
            h = combine(combine(h, key), sh);
    }
    return h;
}

std::uint64_t MemoryState::hash() const
{
    const auto zero = zero_subarray_hash();
    std::uint64_t h = 0;
    for (const auto& [key, sa] : m_subarrays) {
        const auto sh = sa.hash();
        if (sh != zero)
            h = combine(combine(h, key), sh);
    }
    return h;
}

MemoryState build_memory(const DramGeometry& geometry)
{
    return MemoryState(geometry);
}

} // namespace migshift
