#pragma once

// Reference models written independently of the library: plain loops over
// std::vector<bool>, schoolbook arithmetic and table-based GF(2^8).

#include "migshift/bit_row.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Bits = std::vector<bool>;

inline Bits bits_of(const migshift::BitRow& r)
{
    Bits b(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        b[i] = r.get(i);
    return b;
}

inline migshift::BitRow row_of(const Bits& b)
{
    migshift::BitRow r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        r.set(i, b[i]);
    return r;
}

inline Bits random_bits(std::size_t n, std::mt19937_64& rng)
{
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i)
        b[i] = (rng() >> 17) & 1U;
    return b;
}

/// dst[i+1] = src[i], dst[0] = 0
inline Bits shift_right(const Bits& src)
{
    Bits dst(src.size(), false);
    for (std::size_t i = 0; i + 1 < src.size(); ++i)
        dst[i + 1] = src[i];
    return dst;
}

/// dst[i] = src[i+1], dst[C-1] = 0
inline Bits shift_left(const Bits& src)
{
    Bits dst(src.size(), false);
    for (std::size_t i = 0; i + 1 < src.size(); ++i)
        dst[i] = src[i + 1];
    return dst;
}

inline Bits parity(const Bits& src, unsigned p)
{
    Bits out;
    for (std::size_t i = p; i < src.size(); i += 2)
        out.push_back(src[i]);
    return out;
}

inline Bits maj(const Bits& a, const Bits& b, const Bits& c)
{
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = (a[i] && b[i]) || (b[i] && c[i]) || (a[i] && c[i]);
    return r;
}

inline Bits complement(const Bits& a)
{
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = !a[i];
    return r;
}

/// GF(2^8) with x^8 + x^4 + x^3 + x + 1, via log/antilog tables over the
/// generator 0x03.
class Gf256 {
public:
    Gf256()
    {
        unsigned x = 1;
        for (unsigned i = 0; i < 255; ++i) {
            m_exp[i] = static_cast<std::uint8_t>(x);
            m_log[x] = static_cast<std::uint8_t>(i);
            unsigned twice = x << 1;
            if (twice & 0x100U)
                twice ^= 0x11BU;
            x = twice ^ x;
        }
    }

    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const
    {
        if (a == 0 || b == 0)
            return 0;
        return m_exp[(m_log[a] + m_log[b]) % 255];
    }

private:
    std::array<std::uint8_t, 256> m_exp{};
    std::array<std::uint8_t, 256> m_log{};
};

/// Voltage deviation after a cell of capacitance cc at v_cell shares
/// charge with a bitline of capacitance cb precharged to v_pre, in mV.
inline double charge_share_mV(double cc, double cb, double v_cell, double v_pre)
{
    const double dv = (v_cell - v_pre) * cc / (cc + cb);
    return (dv < 0 ? -dv : dv) * 1000.0;
}

} // namespace oracle
