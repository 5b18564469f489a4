#include "cipherpipe/block.hpp"

#include <stdexcept>

namespace cipherpipe {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

void parse_hex(std::string_view hex, std::span<std::uint8_t> out) {
    if (hex.size() != out.size() * 2)
        throw std::invalid_argument("hex string must be exactly " +
                                    std::to_string(out.size() * 2) + " characters, got " +
                                    std::to_string(hex.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex character in \"" + std::string(hex) + "\"");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
}

} // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(kHexDigits[b >> 4]);
        s.push_back(kHexDigits[b & 0xF]);
    }
    return s;
}

std::string to_hex(const Block64& b) { return to_hex(std::span<const std::uint8_t>(b.bytes)); }
std::string to_hex(const MasterKey128& k) { return to_hex(std::span<const std::uint8_t>(k.bytes)); }
std::string to_hex(const SkipjackKey80& k) { return to_hex(std::span<const std::uint8_t>(k.bytes)); }

Block64 block_from_hex(std::string_view hex) {
    Block64 b;
    parse_hex(hex, b.bytes);
    return b;
}

MasterKey128 key_from_hex(std::string_view hex) {
    MasterKey128 k;
    parse_hex(hex, k.bytes);
    return k;
}

SkipjackKey80 skipjack_key_from_hex(std::string_view hex) {
    SkipjackKey80 k;
    parse_hex(hex, k.bytes);
    return k;
}

} // namespace cipherpipe
