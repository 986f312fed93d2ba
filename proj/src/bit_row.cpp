#include "migshift/bit_row.hpp"

#include <bit>
#include <stdexcept>

namespace migshift {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

// Gathers the 32 bits at even positions of x into the low half.
std::uint64_t compress_even(std::uint64_t x)
{
    x &= 0x5555555555555555ULL;
    x = (x | (x >> 1)) & 0x3333333333333333ULL;
    x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0FULL;
    x = (x | (x >> 4)) & 0x00FF00FF00FF00FFULL;
    x = (x | (x >> 8)) & 0x0000FFFF0000FFFFULL;
    x = (x | (x >> 16)) & 0x00000000FFFFFFFFULL;
    return x;
}

// Spreads the low 32 bits of x onto the even positions.
std::uint64_t expand_even(std::uint64_t x)
{
    x &= 0x00000000FFFFFFFFULL;
    x = (x | (x << 16)) & 0x0000FFFF0000FFFFULL;
    x = (x | (x << 8)) & 0x00FF00FF00FF00FFULL;
    x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0FULL;
    x = (x | (x << 2)) & 0x3333333333333333ULL;
    x = (x | (x << 1)) & 0x5555555555555555ULL;
    return x;
}

} // namespace

BitRow::BitRow(std::size_t bits, bool value)
    : m_size(bits), m_words(words_for(bits), value ? ~0ULL : 0ULL)
{
    clear_tail();
}

BitRow BitRow::from_string(std::string_view bits)
{
    BitRow row(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            row.set(i, true);
        else if (bits[i] != '0')
            throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
    return row;
}

BitRow BitRow::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits)
{
    BitRow row(bits);
    for (std::size_t col = 0; col < bits && col / 8 < bytes.size(); ++col)
        row.set(col, (bytes[col / 8] >> (7 - col % 8)) & 1U);
    return row;
}

BitRow BitRow::random(std::size_t bits, std::mt19937_64& rng)
{
    BitRow row(bits);
    for (auto& w : row.m_words)
        w = rng();
    row.clear_tail();
    return row;
}

bool BitRow::get(std::size_t col) const
{
    if (col >= m_size)
        throw std::out_of_range("column out of range");
    return (m_words[col / kWordBits] >> (col % kWordBits)) & 1ULL;
}

void BitRow::set(std::size_t col, bool value)
{
    if (col >= m_size)
        throw std::out_of_range("column out of range");
    const std::uint64_t mask = 1ULL << (col % kWordBits);
    if (value)
        m_words[col / kWordBits] |= mask;
    else
        m_words[col / kWordBits] &= ~mask;
}

void BitRow::fill(bool value)
{
    for (auto& w : m_words)
        w = value ? ~0ULL : 0ULL;
    clear_tail();
}

std::string BitRow::to_string() const
{
    std::string s(m_size, '0');
    for (std::size_t i = 0; i < m_size; ++i)
        if (get(i))
            s[i] = '1';
    return s;
}

std::vector<std::uint8_t> BitRow::to_bytes() const
{
    std::vector<std::uint8_t> bytes((m_size + 7) / 8, 0);
    for (std::size_t col = 0; col < m_size; ++col)
        if (get(col))
            bytes[col / 8] |= static_cast<std::uint8_t>(1U << (7 - col % 8));
    return bytes;
}

std::size_t BitRow::popcount() const noexcept
{
    std::size_t n = 0;
    for (auto w : m_words)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::uint64_t BitRow::hash() const noexcept
{
    // FNV-1a over the size and the packed words.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFFU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(m_size);
    for (auto w : m_words)
        mix(w);
    return h;
}

BitRow BitRow::extract_parity(unsigned parity) const
{
    BitRow out(m_size / 2);
    for (std::size_t wi = 0; wi < m_words.size(); ++wi) {
        const std::uint64_t half = compress_even(m_words[wi] >> (parity & 1U));
        const std::size_t dst_bit = wi * 32;
        if (dst_bit >= out.m_size)
            break;
        out.m_words[dst_bit / kWordBits] |= half << (dst_bit % kWordBits);
    }
    out.clear_tail();
    return out;
}

void BitRow::deposit_parity(unsigned parity, const BitRow& bits)
{
    if (bits.size() != m_size / 2)
        throw std::invalid_argument("deposit_parity: size mismatch");
    const std::uint64_t keep = (parity & 1U) ? 0x5555555555555555ULL : 0xAAAAAAAAAAAAAAAAULL;
    for (std::size_t wi = 0; wi < m_words.size(); ++wi) {
        const std::size_t src_bit = wi * 32;
        std::uint64_t half = 0;
        if (src_bit < bits.m_size)
            half = (bits.m_words[src_bit / kWordBits] >> (src_bit % kWordBits)) & 0xFFFFFFFFULL;
        m_words[wi] = (m_words[wi] & keep) | (expand_even(half) << (parity & 1U));
    }
    clear_tail();
}

BitRow BitRow::advanced() const
{
    BitRow out(m_size);
    for (std::size_t wi = 0; wi < m_words.size(); ++wi) {
        std::uint64_t w = m_words[wi] >> 1;
        if (wi + 1 < m_words.size())
            w |= m_words[wi + 1] << 63;
        out.m_words[wi] = w;
    }
    out.clear_tail();
    return out;
}

BitRow BitRow::delayed() const
{
    BitRow out(m_size);
    for (std::size_t wi = 0; wi < m_words.size(); ++wi) {
        std::uint64_t w = m_words[wi] << 1;
        if (wi > 0)
            w |= m_words[wi - 1] >> 63;
        out.m_words[wi] = w;
    }
    out.clear_tail();
    return out;
}

BitRow BitRow::operator~() const
{
    BitRow out(*this);
    for (auto& w : out.m_words)
        w = ~w;
    out.clear_tail();
    return out;
}

BitRow& BitRow::operator&=(const BitRow& other)
{
    require_same_size(other);
    for (std::size_t i = 0; i < m_words.size(); ++i)
        m_words[i] &= other.m_words[i];
    return *this;
}

BitRow& BitRow::operator|=(const BitRow& other)
{
    require_same_size(other);
    for (std::size_t i = 0; i < m_words.size(); ++i)
        m_words[i] |= other.m_words[i];
    return *this;
}

BitRow& BitRow::operator^=(const BitRow& other)
{
    require_same_size(other);
    for (std::size_t i = 0; i < m_words.size(); ++i)
        m_words[i] ^= other.m_words[i];
    return *this;
}

BitRow BitRow::majority(const BitRow& a, const BitRow& b, const BitRow& c)
{
    a.require_same_size(b);
    a.require_same_size(c);
    BitRow out(a.m_size);
    for (std::size_t i = 0; i < out.m_words.size(); ++i) {
        const auto x = a.m_words[i], y = b.m_words[i], z = c.m_words[i];
        out.m_words[i] = (x & y) | (y & z) | (x & z);
    }
    return out;
}

void BitRow::clear_tail() noexcept
{
    const std::size_t rem = m_size % kWordBits;
    if (rem != 0 && !m_words.empty())
        m_words.back() &= (1ULL << rem) - 1;
}

void BitRow::require_same_size(const BitRow& other) const
{
    if (other.m_size != m_size)
        throw std::invalid_argument("bit rows differ in width");
}

} // namespace migshift
