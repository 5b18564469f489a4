#include "cipherpipe/skipjack.hpp"

namespace cipherpipe {

namespace {

const std::uint8_t F[256] = {
    0xA3, 0xD7, 0x09, 0x83, 0xF8, 0x48, 0xF6, 0xF4, 0xB3, 0x21, 0x15, 0x78,
    0x99, 0xB1, 0xAF, 0xF9, 0xE7, 0x2D, 0x4D, 0x8A, 0xCE, 0x4C, 0xCA, 0x2E,
    0x52, 0x95, 0xD9, 0x1E, 0x4E, 0x38, 0x44, 0x28, 0x0A, 0xDF, 0x02, 0xA0,
    0x17, 0xF1, 0x60, 0x68, 0x12, 0xB7, 0x7A, 0xC3, 0xE9, 0xFA, 0x3D, 0x53,
    0x96, 0x84, 0x6B, 0xBA, 0xF2, 0x63, 0x9A, 0x19, 0x7C, 0xAE, 0xE5, 0xF5,
    0xF7, 0x16, 0x6A, 0xA2, 0x39, 0xB6, 0x7B, 0x0F, 0xC1, 0x93, 0x81, 0x1B,
    0xEE, 0xB4, 0x1A, 0xEA, 0xD0, 0x91, 0x2F, 0xB8, 0x55, 0xB9, 0xDA, 0x85,
    0x3F, 0x41, 0xBF, 0xE0, 0x5A, 0x58, 0x80, 0x5F, 0x66, 0x0B, 0xD8, 0x90,
    0x35, 0xD5, 0xC0, 0xA7, 0x33, 0x06, 0x65, 0x69, 0x45, 0x00, 0x94, 0x56,
    0x6D, 0x98, 0x9B, 0x76, 0x97, 0xFC, 0xB2, 0xC2, 0xB0, 0xFE, 0xDB, 0x20,
    0xE1, 0xEB, 0xD6, 0xE4, 0xDD, 0x47, 0x4A, 0x1D, 0x42, 0xED, 0x9E, 0x6E,
    0x49, 0x3C, 0xCD, 0x43, 0x27, 0xD2, 0x07, 0xD4, 0xDE, 0xC7, 0x67, 0x18,
    0x89, 0xCB, 0x30, 0x1F, 0x8D, 0xC6, 0x8F, 0xAA, 0xC8, 0x74, 0xDC, 0xC9,
    0x5D, 0x5C, 0x31, 0xA4, 0x70, 0x88, 0x61, 0x2C, 0x9F, 0x0D, 0x2B, 0x87,
    0x50, 0x82, 0x54, 0x64, 0x26, 0x7D, 0x03, 0x40, 0x34, 0x4B, 0x1C, 0x73,
    0xD1, 0xC4, 0xFD, 0x3B, 0xCC, 0xFB, 0x7F, 0xAB, 0xE6, 0x3E, 0x5B, 0xA5,
    0xAD, 0x04, 0x23, 0x9C, 0x14, 0x51, 0x22, 0xF0, 0x29, 0x79, 0x71, 0x7E,
    0xFF, 0x8C, 0x0E, 0xE2, 0x0C, 0xEF, 0xBC, 0x72, 0x75, 0x6F, 0x37, 0xA1,
    0xEC, 0xD3, 0x8E, 0x62, 0x8B, 0x86, 0x10, 0xE8, 0x08, 0x77, 0x11, 0xBE,
    0x92, 0x4F, 0x24, 0xC5, 0x32, 0x36, 0x9D, 0xCF, 0xF3, 0xA6, 0xBB, 0xAC,
    0x5E, 0x6C, 0xA9, 0x13, 0x57, 0x25, 0xB5, 0xE3, 0xBD, 0xA8, 0x3A, 0x01,
    0x05, 0x59, 0x2A, 0x46,
};

inline std::uint8_t cv(const SkipjackKey80& key, std::size_t i) {
    return key.bytes[i % 10];
}

} // namespace

std::uint16_t skipjack_g(std::uint16_t w, std::size_t step, const SkipjackKey80& key) {
    std::uint8_t g1 = static_cast<std::uint8_t>(w >> 8);
    std::uint8_t g2 = static_cast<std::uint8_t>(w);
    g1 = static_cast<std::uint8_t>(F[g2 ^ cv(key, 4 * step + 0)] ^ g1); // g3
    g2 = static_cast<std::uint8_t>(F[g1 ^ cv(key, 4 * step + 1)] ^ g2); // g4
    g1 = static_cast<std::uint8_t>(F[g2 ^ cv(key, 4 * step + 2)] ^ g1); // g5
    g2 = static_cast<std::uint8_t>(F[g1 ^ cv(key, 4 * step + 3)] ^ g2); // g6
    return static_cast<std::uint16_t>((g1 << 8) | g2);
}

std::uint16_t skipjack_g_inv(std::uint16_t w, std::size_t step, const SkipjackKey80& key) {
    std::uint8_t g5 = static_cast<std::uint8_t>(w >> 8);
    std::uint8_t g6 = static_cast<std::uint8_t>(w);
    g6 = static_cast<std::uint8_t>(F[g5 ^ cv(key, 4 * step + 3)] ^ g6); // g4
    g5 = static_cast<std::uint8_t>(F[g6 ^ cv(key, 4 * step + 2)] ^ g5); // g3
    g6 = static_cast<std::uint8_t>(F[g5 ^ cv(key, 4 * step + 1)] ^ g6); // g2
    g5 = static_cast<std::uint8_t>(F[g6 ^ cv(key, 4 * step + 0)] ^ g5); // g1
    return static_cast<std::uint16_t>((g5 << 8) | g6);
}

Block64 skipjack_encrypt(const Block64& block, const SkipjackKey80& key) {
    std::uint16_t w1 = block.word16(0), w2 = block.word16(1);
    std::uint16_t w3 = block.word16(2), w4 = block.word16(3);

    for (std::uint16_t counter = 1; counter <= 32; ++counter) {
        const std::size_t step = counter - 1;
        const std::uint16_t g = skipjack_g(w1, step, key);
        if ((step / 8) % 2 == 0) { // Rule A
            const std::uint16_t n1 = static_cast<std::uint16_t>(g ^ w4 ^ counter);
            w4 = w3;
            w3 = w2;
            w2 = g;
            w1 = n1;
        } else { // Rule B
            const std::uint16_t n3 = static_cast<std::uint16_t>(w1 ^ w2 ^ counter);
            const std::uint16_t n1 = w4;
            w4 = w3;
            w3 = n3;
            w2 = g;
            w1 = n1;
        }
    }

    Block64 out;
    out.set_word16(0, w1);
    out.set_word16(1, w2);
    out.set_word16(2, w3);
    out.set_word16(3, w4);
    return out;
}

Block64 skipjack_decrypt(const Block64& block, const SkipjackKey80& key) {
    std::uint16_t w1 = block.word16(0), w2 = block.word16(1);
    std::uint16_t w3 = block.word16(2), w4 = block.word16(3);

    for (int counter = 32; counter >= 1; --counter) {
        const std::size_t step = static_cast<std::size_t>(counter - 1);
        if ((step / 8) % 2 == 0) { // undo Rule A
            const std::uint16_t p1 = skipjack_g_inv(w2, step, key);
            const std::uint16_t p4 = static_cast<std::uint16_t>(w1 ^ w2 ^ counter);
            w1 = p1;
            w2 = w3;
            w3 = w4;
            w4 = p4;
        } else { // undo Rule B
            const std::uint16_t p1 = skipjack_g_inv(w2, step, key);
            const std::uint16_t p2 = static_cast<std::uint16_t>(w3 ^ p1 ^ counter);
            w3 = w4;
            w4 = w1;
            w1 = p1;
            w2 = p2;
        }
    }

    Block64 out;
    out.set_word16(0, w1);
    out.set_word16(1, w2);
    out.set_word16(2, w3);
    out.set_word16(3, w4);
    return out;
}

} // namespace cipherpipe
