#include "cipherpipe/raiden.hpp"

namespace cipherpipe {

namespace {

constexpr std::size_t kRounds = 16;

inline std::uint32_t mix(std::uint32_t sk, std::uint32_t other) {
    return ((sk + other) << 9) ^ ((sk - other) ^ ((sk + other) >> 14));
}

} // namespace

std::array<std::uint32_t, 16> raiden_subkeys(const RaidenKey& key) {
    std::array<std::uint32_t, 4> k = key.words;
    std::array<std::uint32_t, kRounds> subkeys;
    for (std::size_t i = 0; i < kRounds; ++i) {
        const std::uint32_t sk = (k[0] + k[1]) + ((k[2] + k[3]) ^ (k[0] << (k[2] & 0x1F)));
        k[i % 4] = sk;
        subkeys[i] = sk;
    }
    return subkeys;
}

Block64 raiden_encrypt(const Block64& block, const RaidenKey& key) {
    std::uint32_t b0 = block.word32(0);
    std::uint32_t b1 = block.word32(1);
    std::array<std::uint32_t, 4> k = key.words;
    for (std::size_t i = 0; i < kRounds; ++i) {
        const std::uint32_t sk = (k[0] + k[1]) + ((k[2] + k[3]) ^ (k[0] << (k[2] & 0x1F)));
        k[i % 4] = sk;
        b0 += mix(sk, b1);
        b1 += mix(sk, b0);
    }
    Block64 out;
    out.set_word32(0, b0);
    out.set_word32(1, b1);
    return out;
}

Block64 raiden_decrypt(const Block64& block, const RaidenKey& key) {
    std::uint32_t b0 = block.word32(0);
    std::uint32_t b1 = block.word32(1);
    const auto subkeys = raiden_subkeys(key);
    for (std::size_t i = kRounds; i > 0; --i) {
        const std::uint32_t sk = subkeys[i - 1];
        b1 -= mix(sk, b0);
        b0 -= mix(sk, b1);
    }
    Block64 out;
    out.set_word32(0, b0);
    out.set_word32(1, b1);
    return out;
}

} // namespace cipherpipe
