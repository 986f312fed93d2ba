#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace migshift {

/// Shape of the simulated memory. Defaults mirror a dual-channel,
/// dual-rank DDR3-1333 4Gb system with 8KB rows.
struct DramGeometry {
    std::uint32_t channels = 2;
    std::uint32_t ranks_per_channel = 2;
    std::uint32_t banks_per_rank = 8;
    std::uint32_t subarrays_per_bank = 128;   ///< 64K rows per bank / 512
    std::uint32_t rows_per_subarray = 512;
    std::uint32_t columns_per_row = 65536;    ///< bits; must be even

    /// Throws ConfigError on zero counts or an odd column count.
    void validate() const;

    std::uint32_t total_ranks() const noexcept { return channels * ranks_per_channel; }
    std::uint32_t total_banks() const noexcept { return total_ranks() * banks_per_rank; }
    std::uint32_t migration_cells() const noexcept { return columns_per_row / 2; }
    double row_kilobytes() const noexcept { return columns_per_row / 8.0 / 1024.0; }

    friend bool operator==(const DramGeometry&, const DramGeometry&) = default;
};

enum class MigrationSide : std::uint8_t { Top, Bottom };

/// Access port of a migration cell. Port A is the lower-column bitline of
/// the bridged pair, port B the higher one.
enum class Port : std::uint8_t { A, B };

struct MigrationPort {
    MigrationSide side = MigrationSide::Top;
    Port port = Port::A;

    friend bool operator==(const MigrationPort&, const MigrationPort&) = default;
};

/// Column driven by migration cell `cell` through `port`, or -1 when the
/// port is the unconnected boundary port of the last bottom cell.
///
///   top cell k    : A -> 2k,     B -> 2k + 1
///   bottom cell k : A -> 2k + 1, B -> 2k + 2
std::int64_t migration_column(MigrationPort mp, std::uint32_t cell, std::uint32_t columns);

/// Row inside a subarray: an ordinary data row or one of the two
/// migration rows accessed through a given port.
struct RowRef {
    enum class Kind : std::uint8_t { Data, Migration };

    Kind kind = Kind::Data;
    std::uint32_t index = 0;       ///< data row index (Kind::Data)
    MigrationPort migration{};     ///< side and port (Kind::Migration)

    static RowRef data(std::uint32_t row) { return {Kind::Data, row, {}}; }
    static RowRef top(Port p = Port::A) { return {Kind::Migration, 0, {MigrationSide::Top, p}}; }
    static RowRef bottom(Port p = Port::A) { return {Kind::Migration, 0, {MigrationSide::Bottom, p}}; }

    bool is_data() const noexcept { return kind == Kind::Data; }
    bool is_migration() const noexcept { return kind == Kind::Migration; }

    /// Same physical row, ignoring the migration port.
    bool same_row(const RowRef& other) const noexcept;

    friend bool operator==(const RowRef&, const RowRef&) = default;
};

struct RowAddress {
    std::uint32_t channel = 0;
    std::uint32_t rank = 0;
    std::uint32_t bank = 0;
    std::uint32_t subarray = 0;
    RowRef row{};

    friend bool operator==(const RowAddress&, const RowAddress&) = default;
};

/// Shorthand for channel 0 / rank 0 addresses used throughout tests.
inline RowAddress row_at(std::uint32_t bank, std::uint32_t subarray, RowRef row)
{
    return {0, 0, bank, subarray, row};
}

/// Flat indices used by the bank scheduler and the ledgers.
std::uint32_t flat_bank(const DramGeometry& g, const RowAddress& a);
std::uint32_t flat_rank(const DramGeometry& g, const RowAddress& a);
std::uint64_t flat_subarray(const DramGeometry& g, const RowAddress& a);

/// Throws AddressError when any index is out of range.
void check_address(const DramGeometry& g, const RowAddress& a);

std::string to_string(const RowRef& r);
std::string to_string(const RowAddress& a);

} // namespace migshift
