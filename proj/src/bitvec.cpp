#include "ftag/bitvec.hpp"

namespace ftag {

std::string to_hex(std::span<const std::uint8_t> bits)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            nibble <<= 1;
            if (i + j < bits.size())
                nibble |= bits[i + j] & 1u;
        }
        out.push_back(digits[nibble]);
    }
    return out;
}

BitVec from_hex(const std::string& hex, std::size_t n_bits)
{
    if (hex.size() != (n_bits + 3) / 4)
        throw Error("from_hex: digit count does not match bit count");
    BitVec out;
    out.reserve(n_bits);
    for (char c : hex) {
        unsigned v;
        if (c >= '0' && c <= '9')
            v = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f')
            v = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            v = static_cast<unsigned>(c - 'A' + 10);
        else
            throw Error("from_hex: invalid digit");
        for (int j = 3; j >= 0 && out.size() < n_bits; --j)
            out.push_back(static_cast<std::uint8_t>((v >> j) & 1u));
    }
    return out;
}

std::vector<std::uint64_t> pack_words(std::span<const std::uint8_t> bits)
{
    std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] & 1u)
            words[i / 64] |= std::uint64_t{1} << (63 - i % 64);
    return words;
}

} // namespace ftag
