#include "migshift/errors.hpp"
#include "migshift/geometry.hpp"
#include "migshift/memory.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace migshift;

namespace {

DramGeometry tiny(std::uint32_t rows = 8, std::uint32_t cols = 8, std::uint32_t subarrays = 1)
{
    return DramGeometry{1, 1, 1, subarrays, rows, cols};
}

} // namespace

TEST_CASE("default geometry has 32 banks of 8KB rows")
{
    const DramGeometry g;
    CHECK(g.total_banks() == 32);
    CHECK(g.row_kilobytes() == doctest::Approx(8.0));
    CHECK(g.migration_cells() == 32768);
}

TEST_CASE("invalid geometries are configuration errors")
{
    CHECK_THROWS_AS(build_memory(tiny(8, 7)), ConfigError);
    CHECK_THROWS_AS(build_memory(DramGeometry{0, 1, 1, 1, 8, 8}), ConfigError);
    CHECK_THROWS_AS(build_memory(tiny(0, 8)), ConfigError);
}

TEST_CASE("fresh memory reads as zeros")
{
    MemoryState mem = build_memory(tiny());
    for (std::uint32_t r = 0; r < 8; ++r)
        CHECK(mem.host_read_row(row_at(0, 0, RowRef::data(r))).popcount() == 0);
    CHECK(mem.host_read_row(row_at(0, 0, RowRef::top())).size() == 4);
    CHECK(mem.host_read_row(row_at(0, 0, RowRef::bottom())).size() == 4);
    CHECK(mem.bank(row_at(0, 0, RowRef::data(0))).precharged());
}

TEST_CASE("host write/read round trip")
{
    MemoryState mem = build_memory(DramGeometry{1, 1, 2, 2, 16, 64});
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto bits = oracle::random_bits(64, rng);
        const RowAddress a{0, 0, static_cast<std::uint32_t>(rng() % 2), static_cast<std::uint32_t>(rng() % 2),
                           RowRef::data(static_cast<std::uint32_t>(rng() % 16))};
        mem.host_write_row(a, oracle::row_of(bits));
        CHECK(oracle::bits_of(mem.host_read_row(a)) == bits);
    }
    const std::uint8_t pattern[] = {0xA5};
    MemoryState small = build_memory(tiny());
    small.host_write_row(row_at(0, 0, RowRef::data(3)), BitRow::from_bytes(pattern, 8));
    CHECK(small.host_read_row(row_at(0, 0, RowRef::data(3))).to_bytes()[0] == 0xA5);
}

TEST_CASE("host writes reject migration rows, bad lengths and bad addresses")
{
    MemoryState mem = build_memory(DramGeometry{});
    CHECK_THROWS_AS(mem.host_write_row(row_at(0, 0, RowRef::top()), BitRow(65536)), AddressError);
    CHECK_THROWS(mem.host_write_row(row_at(0, 0, RowRef::data(0)), BitRow(64)));
    CHECK_THROWS_AS(mem.host_read_row(row_at(0, 0, RowRef::data(512))), AddressError);
    CHECK_THROWS_AS(mem.host_read_row(RowAddress{2, 0, 0, 0, RowRef::data(0)}), AddressError);
    CHECK_THROWS_AS(mem.host_read_row(row_at(8, 0, RowRef::data(0))), AddressError);
}

TEST_CASE("migration wiring")
{
    const std::uint32_t C = 8;
    for (std::uint32_t k = 0; k < C / 2; ++k) {
        CHECK(migration_column({MigrationSide::Top, Port::A}, k, C) == 2 * k);
        CHECK(migration_column({MigrationSide::Top, Port::B}, k, C) == 2 * k + 1);
        CHECK(migration_column({MigrationSide::Bottom, Port::A}, k, C) == 2 * k + 1);
        const auto b = migration_column({MigrationSide::Bottom, Port::B}, k, C);
        CHECK(b == (k + 1 == C / 2 ? -1 : static_cast<std::int64_t>(2 * k + 2)));
    }
}

TEST_CASE("hashes change only for the written subarray")
{
    MemoryState mem = build_memory(tiny(8, 8, 4));
    const RowAddress target = row_at(0, 2, RowRef::data(1));
    const auto others = mem.hash_excluding(target);
    const auto whole = mem.hash();
    mem.host_write_row(target, BitRow::from_string("11110000"));
    CHECK(mem.hash_excluding(target) == others);
    CHECK(mem.hash() != whole);
}
