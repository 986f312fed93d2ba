#include "migshift/geometry.hpp"

#include "migshift/errors.hpp"

#include <fmt/format.h>

namespace migshift {

void DramGeometry::validate() const
{
    if (channels == 0 || ranks_per_channel == 0 || banks_per_rank == 0 ||
        subarrays_per_bank == 0 || rows_per_subarray == 0 || columns_per_row == 0)
        throw ConfigError("geometry counts must all be at least 1");
    if (columns_per_row % 2 != 0)
        throw ConfigError(fmt::format("columns_per_row must be even (got {})", columns_per_row));
}

std::int64_t migration_column(MigrationPort mp, std::uint32_t cell, std::uint32_t columns)
{
    const std::int64_t base = 2 * static_cast<std::int64_t>(cell);
    std::int64_t col = 0;
    if (mp.side == MigrationSide::Top)
        col = base + (mp.port == Port::A ? 0 : 1);
    else
        col = base + (mp.port == Port::A ? 1 : 2);
    return col < columns ? col : -1;
}

bool RowRef::same_row(const RowRef& other) const noexcept
{
    if (kind != other.kind)
        return false;
    if (kind == Kind::Data)
        return index == other.index;
    return migration.side == other.migration.side;
}

std::uint32_t flat_rank(const DramGeometry& g, const RowAddress& a)
{
    return a.channel * g.ranks_per_channel + a.rank;
}

std::uint32_t flat_bank(const DramGeometry& g, const RowAddress& a)
{
    return flat_rank(g, a) * g.banks_per_rank + a.bank;
}

std::uint64_t flat_subarray(const DramGeometry& g, const RowAddress& a)
{
    return static_cast<std::uint64_t>(flat_bank(g, a)) * g.subarrays_per_bank + a.subarray;
}

void check_address(const DramGeometry& g, const RowAddress& a)
{
    if (a.channel >= g.channels || a.rank >= g.ranks_per_channel || a.bank >= g.banks_per_rank ||
        a.subarray >= g.subarrays_per_bank)
        throw AddressError("address out of range: " + to_string(a));
    if (a.row.is_data() && a.row.index >= g.rows_per_subarray)
        throw AddressError("row out of range: " + to_string(a));
}

std::string to_string(const RowRef& r)
{
    if (r.is_data())
        return fmt::format("r{}", r.index);
    return fmt::format("{}.{}", r.migration.side == MigrationSide::Top ? "top" : "bot",
                       r.migration.port == Port::A ? 'A' : 'B');
}

std::string to_string(const RowAddress& a)
{
    return fmt::format("ch{} rk{} b{} s{} {}", a.channel, a.rank, a.bank, a.subarray,
                       to_string(a.row));
}

} // namespace migshift
