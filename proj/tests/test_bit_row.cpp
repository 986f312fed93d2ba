#include "migshift/bit_row.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using migshift::BitRow;

TEST_CASE("string round trip, column 0 first")
{
    const BitRow r = BitRow::from_string("10110100");
    CHECK(r.size() == 8);
    CHECK(r.get(0));
    CHECK_FALSE(r.get(1));
    CHECK(r.to_string() == "10110100");
    CHECK(r.popcount() == 4);
}

TEST_CASE("bytes fill columns most significant bit first")
{
    const std::uint8_t bytes[] = {0xA5, 0x0F};
    const BitRow r = BitRow::from_bytes(bytes, 16);
    CHECK(r.to_string() == "1010010100001111");
    CHECK(r.to_bytes() == std::vector<std::uint8_t>{0xA5, 0x0F});
}

TEST_CASE("parity extraction and deposit agree with the loop oracle")
{
    std::mt19937_64 rng(11);
    for (std::size_t n : {2u, 8u, 62u, 64u, 66u, 128u, 130u, 1000u}) {
        const auto bits = oracle::random_bits(n, rng);
        const BitRow r = oracle::row_of(bits);
        for (unsigned p : {0u, 1u}) {
            const BitRow half = r.extract_parity(p);
            CHECK(oracle::bits_of(half) == oracle::parity(bits, p));
            BitRow back(n);
            back.deposit_parity(p, half);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(back.get(i) == (i % 2 == p ? bits[i] : false));
        }
    }
}

TEST_CASE("advanced and delayed match index displacement")
{
    std::mt19937_64 rng(3);
    for (std::size_t n : {1u, 7u, 63u, 64u, 65u, 200u}) {
        const auto bits = oracle::random_bits(n, rng);
        const BitRow r = oracle::row_of(bits);
        CHECK(oracle::bits_of(r.delayed()) == oracle::shift_right(bits));
        CHECK(oracle::bits_of(r.advanced()) == oracle::shift_left(bits));
    }
}

TEST_CASE("bitwise operators and majority keep the tail clear")
{
    std::mt19937_64 rng(5);
    const auto a = oracle::random_bits(70, rng);
    const auto b = oracle::random_bits(70, rng);
    const auto c = oracle::random_bits(70, rng);
    const BitRow ra = oracle::row_of(a), rb = oracle::row_of(b), rc = oracle::row_of(c);
    CHECK(oracle::bits_of(BitRow::majority(ra, rb, rc)) == oracle::maj(a, b, c));
    CHECK(oracle::bits_of(~ra) == oracle::complement(a));
    CHECK((~BitRow(70)).popcount() == 70);
    CHECK((ra ^ ra).popcount() == 0);
}

TEST_CASE("size mismatch is rejected")
{
    BitRow a(8), b(9);
    CHECK_THROWS(a &= b);
    CHECK_THROWS(BitRow::from_string("10x1"));
}
