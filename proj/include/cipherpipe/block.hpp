#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace cipherpipe {

/// One 64-bit block, the atomic stream element. Canonical form is eight
/// octets in big-endian order; the word views below are defined on top of
/// that order and round-trip losslessly.
struct Block64 {
    std::array<std::uint8_t, 8> bytes{};

    // 16-bit subword i (0 = most significant), big-endian
    std::uint16_t word16(std::size_t i) const {
        return static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
    }
    void set_word16(std::size_t i, std::uint16_t w) {
        bytes[2 * i] = static_cast<std::uint8_t>(w >> 8);
        bytes[2 * i + 1] = static_cast<std::uint8_t>(w);
    }

    // 32-bit word i (0 = most significant), big-endian
    std::uint32_t word32(std::size_t i) const {
        return (static_cast<std::uint32_t>(bytes[4 * i]) << 24) |
               (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 16) |
               (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 8) |
               static_cast<std::uint32_t>(bytes[4 * i + 3]);
    }
    void set_word32(std::size_t i, std::uint32_t w) {
        bytes[4 * i] = static_cast<std::uint8_t>(w >> 24);
        bytes[4 * i + 1] = static_cast<std::uint8_t>(w >> 16);
        bytes[4 * i + 2] = static_cast<std::uint8_t>(w >> 8);
        bytes[4 * i + 3] = static_cast<std::uint8_t>(w);
    }

    std::uint64_t to_u64() const {
        std::uint64_t v = 0;
        for (auto b : bytes)
            v = (v << 8) | b;
        return v;
    }
    static Block64 from_u64(std::uint64_t v) {
        Block64 b;
        for (std::size_t i = 0; i < 8; ++i)
            b.bytes[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
        return b;
    }

    friend bool operator==(const Block64&, const Block64&) = default;
};

/// The 128-bit product-cipher master key.
struct MasterKey128 {
    std::array<std::uint8_t, 16> bytes{};

    friend bool operator==(const MasterKey128&, const MasterKey128&) = default;
};

/// Skipjack cryptovariable: the first 80 bits of the master key.
struct SkipjackKey80 {
    std::array<std::uint8_t, 10> bytes{};

    static SkipjackKey80 from_master(const MasterKey128& key) {
        SkipjackKey80 k;
        for (std::size_t i = 0; i < 10; ++i)
            k.bytes[i] = key.bytes[i];
        return k;
    }

    friend bool operator==(const SkipjackKey80&, const SkipjackKey80&) = default;
};

/// Raiden key: four 32-bit words in master-key byte order. The key state
/// evolves while encrypting a block, so implementations must work on a copy.
struct RaidenKey {
    std::array<std::uint32_t, 4> words{};

    static RaidenKey from_master(const MasterKey128& key) {
        RaidenKey k;
        for (std::size_t i = 0; i < 4; ++i)
            k.words[i] = (static_cast<std::uint32_t>(key.bytes[4 * i]) << 24) |
                         (static_cast<std::uint32_t>(key.bytes[4 * i + 1]) << 16) |
                         (static_cast<std::uint32_t>(key.bytes[4 * i + 2]) << 8) |
                         static_cast<std::uint32_t>(key.bytes[4 * i + 3]);
        return k;
    }

    friend bool operator==(const RaidenKey&, const RaidenKey&) = default;
};

// Fixed-width lowercase hex, no separators: 16 chars for Block64,
// 32 for MasterKey128, 20 for SkipjackKey80.
std::string to_hex(std::span<const std::uint8_t> bytes);
std::string to_hex(const Block64& b);
std::string to_hex(const MasterKey128& k);
std::string to_hex(const SkipjackKey80& k);

// Throw std::invalid_argument on bad length or non-hex characters.
Block64 block_from_hex(std::string_view hex);
MasterKey128 key_from_hex(std::string_view hex);
SkipjackKey80 skipjack_key_from_hex(std::string_view hex);

} // namespace cipherpipe
