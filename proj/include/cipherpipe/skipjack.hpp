#pragma once

#include <cstdint>

#include "cipherpipe/block.hpp"

namespace cipherpipe {

// 32 rounds per the declassified specification: Rule A x8, Rule B x8,
// Rule A x8, Rule B x8, counter starting at 1.
Block64 skipjack_encrypt(const Block64& block, const SkipjackKey80& key);
Block64 skipjack_decrypt(const Block64& block, const SkipjackKey80& key);

// The 4-stage G permutation and its inverse at a 0-based step index.
// Exposed for the exhaustive involution tests.
std::uint16_t skipjack_g(std::uint16_t w, std::size_t step, const SkipjackKey80& key);
std::uint16_t skipjack_g_inv(std::uint16_t w, std::size_t step, const SkipjackKey80& key);

} // namespace cipherpipe
