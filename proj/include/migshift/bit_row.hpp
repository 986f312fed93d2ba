#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace migshift {

/// Fixed-width bit vector indexed by column. Column 0 is the first
/// character of the string form and the most significant bit of byte 0
/// in the byte form. Storage is packed 64 columns per word; bits past
/// size() are always zero.
class BitRow {
public:
    BitRow() = default;
    explicit BitRow(std::size_t bits, bool value = false);

    static BitRow from_string(std::string_view bits);
    /// Byte k fills columns 8k..8k+7, MSB first.
    static BitRow from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits);
    static BitRow random(std::size_t bits, std::mt19937_64& rng);

    std::size_t size() const noexcept { return m_size; }
    bool get(std::size_t col) const;
    void set(std::size_t col, bool value);
    void fill(bool value);

    std::string to_string() const;
    std::vector<std::uint8_t> to_bytes() const;
    std::span<const std::uint64_t> words() const noexcept { return m_words; }

    std::size_t popcount() const noexcept;
    std::uint64_t hash() const noexcept;

    /// Packs the bits of columns with the given parity (0 = even, 1 = odd)
    /// into a row of size()/2 bits: result[k] = (*this)[2k + parity].
    BitRow extract_parity(unsigned parity) const;
    /// Inverse of extract_parity: (*this)[2k + parity] = bits[k] for every k,
    /// leaving columns of the other parity untouched.
    void deposit_parity(unsigned parity, const BitRow& bits);

    /// result[k] = (*this)[k + 1], highest index filled with 0.
    BitRow advanced() const;
    /// result[k + 1] = (*this)[k], index 0 filled with 0.
    BitRow delayed() const;

    BitRow operator~() const;
    BitRow& operator&=(const BitRow& other);
    BitRow& operator|=(const BitRow& other);
    BitRow& operator^=(const BitRow& other);
    friend BitRow operator&(BitRow a, const BitRow& b) { return a &= b; }
    friend BitRow operator|(BitRow a, const BitRow& b) { return a |= b; }
    friend BitRow operator^(BitRow a, const BitRow& b) { return a ^= b; }
    friend bool operator==(const BitRow&, const BitRow&) = default;

    /// Bitwise three-input majority.
    static BitRow majority(const BitRow& a, const BitRow& b, const BitRow& c);

private:
    void clear_tail() noexcept;
    void require_same_size(const BitRow& other) const;

    std::size_t m_size = 0;
    std::vector<std::uint64_t> m_words;
};

} // namespace migshift
