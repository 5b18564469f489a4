#pragma once

#include <array>
#include <cstdint>

#include "cipherpipe/block.hpp"

namespace cipherpipe {

// 16 Feistel-style rounds on two 32-bit halves; the evolving key state is
// copied per call, the caller's key is never mutated.
Block64 raiden_encrypt(const Block64& block, const RaidenKey& key);
Block64 raiden_decrypt(const Block64& block, const RaidenKey& key);

/// Forward subkey sequence; decryption applies it in reverse. Exposed so
/// tests can check the schedule symmetry directly.
std::array<std::uint32_t, 16> raiden_subkeys(const RaidenKey& key);

} // namespace cipherpipe
