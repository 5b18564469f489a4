#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cipherpipe/block.hpp"
#include "cipherpipe/idea.hpp"
#include "cipherpipe/raiden.hpp"
#include "cipherpipe/skipjack.hpp"

namespace cipherpipe {

enum class CipherId : std::uint8_t { Idea = 0, Skipjack = 1, Raiden = 2 };

inline constexpr std::size_t kCipherCount = 3;

std::string_view to_string(CipherId id);
std::optional<CipherId> cipher_from_string(std::string_view name);

/// Apply `cipher` `iterations` times in a row, one key schedule per stage.
struct StageSpec {
    CipherId cipher;
    std::uint32_t iterations; // >= 1

    friend bool operator==(const StageSpec&, const StageSpec&) = default;
};

using StageList = std::vector<StageSpec>;
using Partitioning = std::vector<StageList>;

/// An ordered cipher composition bound to one master key. Key schedules are
/// derived once at construction and shared read-only afterwards; the whole
/// object is immutable and safe to use from any number of workers.
class ProductCipherSpec {
public:
    ProductCipherSpec(StageList stages, const MasterKey128& key);

    /// (IDEA, 20), (Skipjack, 24), (Raiden, 20).
    static ProductCipherSpec canonical(const MasterKey128& key);

    const StageList& stages() const { return stages_; }
    const MasterKey128& key() const { return key_; }
    std::uint64_t total_iterations() const;
    bool is_canonical() const;

    const IdeaKeySchedule& idea_enc() const { return idea_enc_; }
    const IdeaKeySchedule& idea_dec() const { return idea_dec_; }
    const SkipjackKey80& skipjack_key() const { return skipjack_key_; }
    const RaidenKey& raiden_key() const { return raiden_key_; }

    Block64 apply(Block64 block, const StageSpec& stage) const;
    Block64 apply_inverse(Block64 block, const StageSpec& stage) const;

private:
    StageList stages_;
    MasterKey128 key_;
    IdeaKeySchedule idea_enc_;
    IdeaKeySchedule idea_dec_;
    SkipjackKey80 skipjack_key_;
    RaidenKey raiden_key_;
};

Block64 encrypt_block(Block64 block, const ProductCipherSpec& spec);
Block64 decrypt_block(Block64 block, const ProductCipherSpec& spec);

/// Per-iteration weights used to balance partition groups, indexed by
/// CipherId. Unit weights stand in when no measurement is available.
using CipherWeights = std::array<double, kCipherCount>;

inline constexpr CipherWeights kUnitWeights{1.0, 1.0, 1.0};

/// Split the flattened iteration sequence into n contiguous groups whose
/// weighted costs are as even as possible. Concatenating the groups always
/// reproduces the original sequence. The canonical spec at n = 5 is pinned
/// to the 10/10/12/12/20 split. Throws std::invalid_argument when n is 0 or
/// exceeds the total iteration count.
Partitioning partition(const ProductCipherSpec& spec, std::size_t n_stages,
                       const CipherWeights& weights = kUnitWeights);

} // namespace cipherpipe
