#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftag {

/// Binary payload: one symbol per byte, each 0 or 1.
using BitVec = std::vector<std::uint8_t>;

/// Library-wide failure for violated preconditions.
class Error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline bool is_binary(std::span<const std::uint8_t> bits)
{
    for (auto b : bits)
        if (b > 1)
            return false;
    return true;
}

inline std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
    if (a.size() != b.size())
        throw Error("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += (a[i] != b[i]);
    return d;
}

inline BitVec xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
    if (a.size() != b.size())
        throw Error("xor_bits: length mismatch");
    BitVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] ^ b[i];
    return out;
}

/// Gather bits at the given positions.
inline BitVec gather(std::span<const std::uint8_t> bits, std::span<const std::size_t> positions)
{
    BitVec out;
    out.reserve(positions.size());
    for (auto p : positions)
        out.push_back(bits[p]);
    return out;
}

/// MSB-first hex rendering; the final nibble is zero padded.
std::string to_hex(std::span<const std::uint8_t> bits);

/// Inverse of to_hex for a known bit count.
BitVec from_hex(const std::string& hex, std::size_t n_bits);

/// Packs bits MSB-first into 64-bit words, the last word zero padded.
std::vector<std::uint64_t> pack_words(std::span<const std::uint8_t> bits);

} // namespace ftag
