#include "cipherpipe/idea.hpp"

#include <stdexcept>

namespace cipherpipe {

namespace {

constexpr std::size_t kRounds = 8;
constexpr std::size_t kRoundKeys = 6 * kRounds;      // 48
constexpr std::size_t kFullKeys = kRoundKeys + 4;    // 52, with output transform

inline std::uint16_t add16(std::uint16_t a, std::uint16_t b) {
    return static_cast<std::uint16_t>(a + b);
}

inline std::uint16_t neg16(std::uint16_t a) {
    return static_cast<std::uint16_t>(0 - a);
}

// 25-bit-rotation key expansion: 8 words from the key, then 8 more after
// each left rotation of the full 128-bit key.
void expand_key(const MasterKey128& key, std::span<std::uint16_t> out) {
    std::array<std::uint16_t, 8> k;
    for (std::size_t i = 0; i < 8; ++i)
        k[i] = static_cast<std::uint16_t>((key.bytes[2 * i] << 8) | key.bytes[2 * i + 1]);

    std::size_t produced = 0;
    while (produced < out.size()) {
        for (std::size_t i = 0; i < 8 && produced < out.size(); ++i)
            out[produced++] = k[i];
        std::array<std::uint16_t, 8> r;
        for (std::size_t i = 0; i < 8; ++i) {
            // word i of the key rotated left by 25 bits
            const std::uint16_t hi = k[(i + 1) % 8];
            const std::uint16_t lo = k[(i + 2) % 8];
            r[i] = static_cast<std::uint16_t>((hi << 9) | (lo >> 7));
        }
        k = r;
    }
}

// One full round: key mixing, MA box, middle-word swap.
inline void round(std::uint16_t& x1, std::uint16_t& x2, std::uint16_t& x3, std::uint16_t& x4,
                  const std::uint16_t* k) {
    const std::uint16_t a = idea_mul(x1, k[0]);
    const std::uint16_t b = add16(x2, k[1]);
    const std::uint16_t c = add16(x3, k[2]);
    const std::uint16_t d = idea_mul(x4, k[3]);
    const std::uint16_t t0 = idea_mul(static_cast<std::uint16_t>(a ^ c), k[4]);
    const std::uint16_t t1 = idea_mul(add16(static_cast<std::uint16_t>(b ^ d), t0), k[5]);
    const std::uint16_t t2 = add16(t0, t1);
    x1 = a ^ t1;
    x2 = c ^ t1;
    x3 = b ^ t2;
    x4 = d ^ t2;
}

// Inverse of one full round. The MA box inputs survive the round (both
// halves of each pair were XORed with the same value), so it undoes itself;
// k holds the already-inverted mixing keys.
inline void round_inverse(std::uint16_t& x1, std::uint16_t& x2, std::uint16_t& x3,
                          std::uint16_t& x4, const std::uint16_t* k) {
    const std::uint16_t t0 = idea_mul(static_cast<std::uint16_t>(x1 ^ x2), k[4]);
    const std::uint16_t t1 = idea_mul(add16(static_cast<std::uint16_t>(x3 ^ x4), t0), k[5]);
    const std::uint16_t t2 = add16(t0, t1);
    const std::uint16_t a = x1 ^ t1;
    const std::uint16_t c = x2 ^ t1;
    const std::uint16_t b = x3 ^ t2;
    const std::uint16_t d = x4 ^ t2;
    x1 = idea_mul(a, k[0]);
    x2 = add16(b, k[1]);
    x3 = add16(c, k[2]);
    x4 = idea_mul(d, k[3]);
}

// Runs the standard encryption path: 8 rounds plus the output transform.
// Decryption for the 8.5-round variant reuses this with the inverted and
// reordered schedule.
Block64 idea_op_full(const Block64& block, std::span<const std::uint16_t> k) {
    std::uint16_t x1 = block.word16(0), x2 = block.word16(1);
    std::uint16_t x3 = block.word16(2), x4 = block.word16(3);
    for (std::size_t r = 0; r < kRounds; ++r)
        round(x1, x2, x3, x4, &k[6 * r]);
    Block64 out;
    out.set_word16(0, idea_mul(x1, k[48]));
    out.set_word16(1, add16(x3, k[49]));
    out.set_word16(2, add16(x2, k[50]));
    out.set_word16(3, idea_mul(x4, k[51]));
    return out;
}

} // namespace

std::uint16_t idea_mul(std::uint16_t a, std::uint16_t b) {
    const std::uint32_t x = a ? a : 0x10000;
    const std::uint32_t y = b ? b : 0x10000;
    const std::uint32_t p = static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) * y) % 0x10001);
    return static_cast<std::uint16_t>(p);  // 0x10000 wraps to 0
}

std::uint16_t idea_mul_inv(std::uint16_t a) {
    // 65537 is prime: a^(65537-2) = a^-1. All exponent bits are set, so
    // square-and-multiply needs no branches.
    std::uint16_t y = a;
    for (int i = 0; i < 15; ++i) {
        y = idea_mul(y, y);
        y = idea_mul(y, a);
    }
    return y;
}

IdeaKeySchedule IdeaKeySchedule::encryption(const MasterKey128& key, IdeaVariant variant) {
    IdeaKeySchedule ks(CipherDirection::Encrypt, variant);
    ks.count_ = variant == IdeaVariant::Rounds8 ? kRoundKeys : kFullKeys;
    expand_key(key, std::span<std::uint16_t>(ks.subkeys_.data(), ks.count_));
    return ks;
}

IdeaKeySchedule IdeaKeySchedule::decryption(const MasterKey128& key, IdeaVariant variant) {
    const IdeaKeySchedule enc = encryption(key, variant);
    const auto& ek = enc.subkeys_;
    IdeaKeySchedule ks(CipherDirection::Decrypt, variant);
    ks.count_ = enc.count_;
    auto& dk = ks.subkeys_;

    if (variant == IdeaVariant::Rounds8) {
        // Decrypt round j undoes encrypt round 7-j: mixing keys inverted,
        // MA keys unchanged.
        for (std::size_t j = 0; j < kRounds; ++j) {
            const std::uint16_t* e = &ek[6 * (kRounds - 1 - j)];
            dk[6 * j + 0] = idea_mul_inv(e[0]);
            dk[6 * j + 1] = neg16(e[1]);
            dk[6 * j + 2] = neg16(e[2]);
            dk[6 * j + 3] = idea_mul_inv(e[3]);
            dk[6 * j + 4] = e[4];
            dk[6 * j + 5] = e[5];
        }
        return ks;
    }

    // Standard 8.5-round inversion: the decrypt schedule drives the same
    // encrypt path. Middle additive keys swap except at the ends.
    dk[0] = idea_mul_inv(ek[48]);
    dk[1] = neg16(ek[49]);
    dk[2] = neg16(ek[50]);
    dk[3] = idea_mul_inv(ek[51]);
    dk[4] = ek[46];
    dk[5] = ek[47];
    for (std::size_t j = 1; j < kRounds; ++j) {
        const std::uint16_t* e = &ek[6 * (kRounds - j)];
        dk[6 * j + 0] = idea_mul_inv(e[0]);
        dk[6 * j + 1] = neg16(e[2]);
        dk[6 * j + 2] = neg16(e[1]);
        dk[6 * j + 3] = idea_mul_inv(e[3]);
        dk[6 * j + 4] = e[-2];
        dk[6 * j + 5] = e[-1];
    }
    dk[48] = idea_mul_inv(ek[0]);
    dk[49] = neg16(ek[1]);
    dk[50] = neg16(ek[2]);
    dk[51] = idea_mul_inv(ek[3]);
    return ks;
}

Block64 idea_encrypt(const Block64& block, const IdeaKeySchedule& ks) {
    if (ks.direction() != CipherDirection::Encrypt)
        throw std::invalid_argument("idea_encrypt requires an encryption schedule");
    const auto k = ks.subkeys();
    if (ks.variant() == IdeaVariant::Rounds8_5)
        return idea_op_full(block, k);

    std::uint16_t x1 = block.word16(0), x2 = block.word16(1);
    std::uint16_t x3 = block.word16(2), x4 = block.word16(3);
    for (std::size_t r = 0; r < kRounds; ++r)
        round(x1, x2, x3, x4, &k[6 * r]);
    Block64 out;
    out.set_word16(0, x1);
    out.set_word16(1, x2);
    out.set_word16(2, x3);
    out.set_word16(3, x4);
    return out;
}

Block64 idea_decrypt(const Block64& block, const IdeaKeySchedule& ks) {
    if (ks.direction() != CipherDirection::Decrypt)
        throw std::invalid_argument("idea_decrypt requires a decryption schedule");
    const auto k = ks.subkeys();
    if (ks.variant() == IdeaVariant::Rounds8_5)
        return idea_op_full(block, k);

    std::uint16_t x1 = block.word16(0), x2 = block.word16(1);
    std::uint16_t x3 = block.word16(2), x4 = block.word16(3);
    for (std::size_t r = 0; r < kRounds; ++r)
        round_inverse(x1, x2, x3, x4, &k[6 * r]);
    Block64 out;
    out.set_word16(0, x1);
    out.set_word16(1, x2);
    out.set_word16(2, x3);
    out.set_word16(3, x4);
    return out;
}

} // namespace cipherpipe
