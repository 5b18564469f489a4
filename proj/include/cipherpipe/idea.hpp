#pragma once

#include <cstdint>
#include <span>

#include "cipherpipe/block.hpp"

namespace cipherpipe {

enum class CipherDirection { Encrypt, Decrypt };

/// Rounds8 is the product-cipher variant: eight full rounds with the final
/// output transformation dropped. Rounds8_5 is the standard cipher, kept so
/// the published test vector can validate the shared round code.
enum class IdeaVariant { Rounds8, Rounds8_5 };

class IdeaKeySchedule {
public:
    static IdeaKeySchedule encryption(const MasterKey128& key,
                                      IdeaVariant variant = IdeaVariant::Rounds8);
    static IdeaKeySchedule decryption(const MasterKey128& key,
                                      IdeaVariant variant = IdeaVariant::Rounds8);

    CipherDirection direction() const { return direction_; }
    IdeaVariant variant() const { return variant_; }
    std::span<const std::uint16_t> subkeys() const { return {subkeys_.data(), count_}; }

private:
    IdeaKeySchedule(CipherDirection d, IdeaVariant v) : direction_(d), variant_(v) {}

    std::array<std::uint16_t, 52> subkeys_{};
    std::size_t count_ = 0;
    CipherDirection direction_;
    IdeaVariant variant_;
};

// Both require a schedule of the matching direction and throw
// std::invalid_argument otherwise.
Block64 idea_encrypt(const Block64& block, const IdeaKeySchedule& ks);
Block64 idea_decrypt(const Block64& block, const IdeaKeySchedule& ks);

// Multiplication mod 2^16+1 with 0 standing for 2^16, and its inverse.
// Exposed for the exhaustive algebra tests.
std::uint16_t idea_mul(std::uint16_t a, std::uint16_t b);
std::uint16_t idea_mul_inv(std::uint16_t a);

} // namespace cipherpipe
