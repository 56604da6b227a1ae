#pragma once

#include "ftag/bitvec.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

/// Keyed position and tag derivation shared by transmitter and receiver.
///
/// Both functions are a deterministic, fully specified, non-cryptographic
/// keyed PRF: inputs are absorbed 64 bits at a time through the SplitMix64
/// finalizer, then a counter-mode SplitMix64 stream is expanded from the
/// resulting seed. Reproducible simulation is the goal; a deployment would
/// put a keyed cryptographic hash behind the same interface.
namespace ftag::keyed {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

__extension__ using uint128 = unsigned __int128;

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

/// Absorbs one word into a running state.
constexpr std::uint64_t absorb(std::uint64_t state, std::uint64_t word)
{
    return mix64(state ^ word) + golden_gamma;
}

/// Counter-mode expansion: word i is mix64(seed + (i + 1) * gamma).
class KeyedStream {
public:
    explicit KeyedStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        state_ += golden_gamma;
        return mix64(state_);
    }

    /// Uniform draw in [0, range) by 128-bit multiply-shift.
    std::uint64_t bounded(std::uint64_t range)
    {
        return static_cast<std::uint64_t>((static_cast<uint128>(next()) * range) >> 64);
    }

private:
    std::uint64_t state_;
};

/// 128-bit pre-shared key.
class SecretKey {
public:
    SecretKey() = default;
    SecretKey(std::uint64_t hi, std::uint64_t lo) : words_{hi, lo} {}

    /// 32 hex digits, most significant first; "0x" prefix accepted.
    static SecretKey from_hex(std::string hex);
    std::string to_hex() const;

    std::uint64_t hi() const { return words_[0]; }
    std::uint64_t lo() const { return words_[1]; }

    /// Copy with bit `bit` (0 = LSB of lo, 127 = MSB of hi) flipped.
    SecretKey with_bit_flipped(unsigned bit) const;

    bool operator==(const SecretKey&) const = default;

private:
    std::array<std::uint64_t, 2> words_{0, 0};
};

/// Sorted, strictly increasing positions into a message of length n (zero based).
struct IndexSet {
    std::vector<std::size_t> indices;
    std::size_t n = 0;

    std::size_t size() const { return indices.size(); }
    /// First `count` entries (the anchor positions).
    std::span<const std::size_t> prefix(std::size_t count) const;
    /// Positions not in the set, ascending.
    std::vector<std::size_t> complement() const;
    bool contains(std::size_t i) const;
    bool operator==(const IndexSet&) const = default;
};

/// Seeds for the two derivations; distinct domain constants keep them separated.
std::uint64_t position_seed(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t n_e);
std::uint64_t tag_seed(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t tag_len);

/// n_e distinct positions from [0, |msg|) by partial Fisher-Yates, returned sorted.
IndexSet gen_pos(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t n_e);

/// tag_len keyed pseudorandom bits.
BitVec gen_tag(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t tag_len);

/// Unkeyed 64-bit digest identifying a message in golden files.
std::uint64_t message_digest(std::span<const std::uint8_t> msg);

/// Golden row: "key_hex msg_hash n_e : i1 i2 ... | tag_hex", tag of length n_e.
std::string format_golden_row(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t n_e);

struct GoldenRow {
    SecretKey key;
    std::uint64_t msg_hash = 0;
    std::size_t n_e = 0;
    std::vector<std::size_t> indices;
    std::string tag_hex;
};

GoldenRow parse_golden_row(const std::string& line);

} // namespace ftag::keyed
