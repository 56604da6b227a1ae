#include "ftag/keyed_index.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ftag::keyed {

namespace {

constexpr std::uint64_t domain_position = 0x47656e506f73ULL; // "GenPos"
constexpr std::uint64_t domain_tag = 0x47656e546167ULL;      // "GenTag"
constexpr std::uint64_t domain_digest = 0x4d7367ULL;         // "Msg"

std::uint64_t absorb_message(std::uint64_t state, std::span<const std::uint8_t> msg)
{
    state = absorb(state, msg.size());
    for (auto w : pack_words(msg))
        state = absorb(state, w);
    return state;
}

std::uint64_t derive(std::uint64_t domain, std::span<const std::uint8_t> msg, const SecretKey& key,
                     std::size_t count)
{
    std::uint64_t s = absorb(domain, key.hi());
    s = absorb(s, key.lo());
    s = absorb_message(s, msg);
    s = absorb(s, count);
    return mix64(s);
}

} // namespace

SecretKey SecretKey::from_hex(std::string hex)
{
    if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0)
        hex = hex.substr(2);
    if (hex.size() != 32)
        throw Error("secret key must be 32 hex digits");
    const BitVec bits = ftag::from_hex(hex, 128);
    const auto words = pack_words(bits);
    return SecretKey(words[0], words[1]);
}

std::string SecretKey::to_hex() const
{
    return fmt::format("{:016x}{:016x}", words_[0], words_[1]);
}

SecretKey SecretKey::with_bit_flipped(unsigned bit) const
{
    if (bit >= 128)
        throw Error("key bit index out of range");
    SecretKey out = *this;
    if (bit < 64)
        out.words_[1] ^= std::uint64_t{1} << bit;
    else
        out.words_[0] ^= std::uint64_t{1} << (bit - 64);
    return out;
}

std::span<const std::size_t> IndexSet::prefix(std::size_t count) const
{
    if (count > indices.size())
        throw Error("index set prefix longer than the set");
    return {indices.data(), count};
}

std::vector<std::size_t> IndexSet::complement() const
{
    std::vector<std::size_t> out;
    out.reserve(n - indices.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < indices.size() && indices[j] == i)
            ++j;
        else
            out.push_back(i);
    }
    return out;
}

bool IndexSet::contains(std::size_t i) const
{
    return std::binary_search(indices.begin(), indices.end(), i);
}

std::uint64_t position_seed(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t n_e)
{
    return derive(domain_position, msg, key, n_e);
}

std::uint64_t tag_seed(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t tag_len)
{
    return derive(domain_tag, msg, key, tag_len);
}

IndexSet gen_pos(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t n_e)
{
    const std::size_t n = msg.size();
    if (n_e < 1 || n_e > n)
        throw Error(fmt::format("gen_pos: cannot select {} positions from {}", n_e, n));
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    KeyedStream stream(position_seed(msg, key, n_e));
    for (std::size_t j = 0; j < n_e; ++j) {
        const auto pick = j + static_cast<std::size_t>(stream.bounded(n - j));
        std::swap(pool[j], pool[pick]);
    }
    IndexSet out;
    out.n = n;
    out.indices.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_e));
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

BitVec gen_tag(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t tag_len)
{
    if (tag_len < 1)
        throw Error("gen_tag: tag length must be at least 1");
    KeyedStream stream(tag_seed(msg, key, tag_len));
    BitVec tag(tag_len);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < tag_len; ++i) {
        if (i % 64 == 0)
            word = stream.next();
        tag[i] = static_cast<std::uint8_t>((word >> (63 - i % 64)) & 1u);
    }
    return tag;
}

std::uint64_t message_digest(std::span<const std::uint8_t> msg)
{
    return mix64(absorb_message(domain_digest, msg));
}

std::string format_golden_row(std::span<const std::uint8_t> msg, const SecretKey& key, std::size_t n_e)
{
    const IndexSet idx = gen_pos(msg, key, n_e);
    std::string row = fmt::format("{} {:016x} {} :", key.to_hex(), message_digest(msg), n_e);
    for (auto i : idx.indices)
        row += fmt::format(" {}", i);
    row += " | " + ftag::to_hex(gen_tag(msg, key, n_e));
    return row;
}

GoldenRow parse_golden_row(const std::string& line)
{
    std::istringstream in(line);
    GoldenRow row;
    std::string key_hex, hash_hex, tok;
    if (!(in >> key_hex >> hash_hex >> row.n_e >> tok) || tok != ":")
        throw Error("malformed keyed golden row: " + line);
    row.key = SecretKey::from_hex(key_hex);
    row.msg_hash = std::stoull(hash_hex, nullptr, 16);
    while (in >> tok && tok != "|")
        row.indices.push_back(std::stoull(tok));
    if (tok != "|" || !(in >> row.tag_hex))
        throw Error("malformed keyed golden row: " + line);
    return row;
}

} // namespace ftag::keyed
