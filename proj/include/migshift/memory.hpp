#pragma once

#include "migshift/bit_row.hpp"
#include "migshift/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace migshift {

/// Bit-level state of one open-bitline subarray with its two migration rows.
///
/// Even columns sense through the top sense-amplifier stripe and odd columns
/// through the bottom one, so each stripe latches columns/2 bits. Migration
/// cell k of the top row bridges columns 2k/2k+1, cell k of the bottom row
/// bridges 2k+1/2k+2 (the last bottom cell has no second bitline).
struct SubarrayState {
    explicit SubarrayState(const DramGeometry& g);

    std::vector<BitRow> data_rows;
    BitRow top_mig;
    BitRow bottom_mig;
    BitRow row_buffer_top;      ///< latched even columns
    BitRow row_buffer_bottom;   ///< latched odd columns

    BitRow& migration(MigrationSide side) { return side == MigrationSide::Top ? top_mig : bottom_mig; }
    const BitRow& migration(MigrationSide side) const
    {
        return side == MigrationSide::Top ? top_mig : bottom_mig;
    }

    /// Latches a full row into both stripes.
    void latch(const BitRow& row);

    std::uint64_t hash() const noexcept;
};

/// Per-bank protocol state. A bank is precharged unless an ACT left a row open.
struct BankState {
    struct OpenRow {
        std::uint32_t subarray;
        std::uint32_t row;
    };
    std::optional<OpenRow> open;

    bool precharged() const noexcept { return !open.has_value(); }
};

/// Whole simulated memory. Subarrays are materialized on first write; an
/// untouched subarray reads as all zeros.
class MemoryState {
public:
    /// Throws ConfigError if the geometry is invalid.
    explicit MemoryState(const DramGeometry& geometry);

    const DramGeometry& geometry() const noexcept { return m_geometry; }

    /// Fixture loading: stores `bits` into a data row without costing anything.
    void host_write_row(const RowAddress& addr, const BitRow& bits);
    /// Observation: data rows return columns_per_row bits, migration rows
    /// columns_per_row/2 bits.
    BitRow host_read_row(const RowAddress& addr) const;

    SubarrayState& subarray(const RowAddress& addr);
    const SubarrayState* find_subarray(const RowAddress& addr) const;

    BankState& bank(const RowAddress& addr);
    const BankState& bank(const RowAddress& addr) const;

    /// Hash of a subarray's stored bits (data and migration rows).
    std::uint64_t subarray_hash(const RowAddress& addr) const;
    /// Hash of every subarray other than the one containing `addr`.
    std::uint64_t hash_excluding(const RowAddress& addr) const;
    /// Hash of the entire memory contents.
    std::uint64_t hash() const;

    std::size_t materialized_subarrays() const noexcept { return m_subarrays.size(); }

private:
    std::uint64_t zero_subarray_hash() const;

    DramGeometry m_geometry;
    std::map<std::uint64_t, SubarrayState> m_subarrays;
    std::vector<BankState> m_banks;
    mutable std::optional<std::uint64_t> m_zero_hash;
};

/// Builds a zeroed, fully precharged memory.
MemoryState build_memory(const DramGeometry& geometry);

} // namespace migshift
