#include "cipherpipe/product_cipher.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cipherpipe {

namespace {

const StageList kCanonicalStages = {
    {CipherId::Idea, 20},
    {CipherId::Skipjack, 24},
    {CipherId::Raiden, 20},
};

// §-less statement of the paper's 5-way split: IDEA halved, Skipjack
// halved, Raiden intact.
const Partitioning kCanonicalFiveWay = {
    {{CipherId::Idea, 10}},
    {{CipherId::Idea, 10}},
    {{CipherId::Skipjack, 12}},
    {{CipherId::Skipjack, 12}},
    {{CipherId::Raiden, 20}},
};

// Append one iteration to a run-length-encoded stage list.
void push_iteration(StageList& list, CipherId cipher) {
    if (!list.empty() && list.back().cipher == cipher)
        ++list.back().iterations;
    else
        list.push_back({cipher, 1});
}

} // namespace

std::string_view to_string(CipherId id) {
    switch (id) {
    case CipherId::Idea: return "idea";
    case CipherId::Skipjack: return "skipjack";
    case CipherId::Raiden: return "raiden";
    }
    return "?";
}

std::optional<CipherId> cipher_from_string(std::string_view name) {
    if (name == "idea")
        return CipherId::Idea;
    if (name == "skipjack")
        return CipherId::Skipjack;
    if (name == "raiden")
        return CipherId::Raiden;
    return std::nullopt;
}

ProductCipherSpec::ProductCipherSpec(StageList stages, const MasterKey128& key)
    : stages_(std::move(stages)),
      key_(key),
      idea_enc_(IdeaKeySchedule::encryption(key)),
      idea_dec_(IdeaKeySchedule::decryption(key)),
      skipjack_key_(SkipjackKey80::from_master(key)),
      raiden_key_(RaidenKey::from_master(key)) {
    for (const auto& s : stages_)
        if (s.iterations == 0)
            throw std::invalid_argument("stage iterations must be >= 1");
}

ProductCipherSpec ProductCipherSpec::canonical(const MasterKey128& key) {
    return ProductCipherSpec(kCanonicalStages, key);
}

std::uint64_t ProductCipherSpec::total_iterations() const {
    std::uint64_t n = 0;
    for (const auto& s : stages_)
        n += s.iterations;
    return n;
}

bool ProductCipherSpec::is_canonical() const { return stages_ == kCanonicalStages; }

Block64 ProductCipherSpec::apply(Block64 block, const StageSpec& stage) const {
    switch (stage.cipher) {
    case CipherId::Idea:
        for (std::uint32_t i = 0; i < stage.iterations; ++i)
            block = idea_encrypt(block, idea_enc_);
        return block;
    case CipherId::Skipjack:
        for (std::uint32_t i = 0; i < stage.iterations; ++i)
            block = skipjack_encrypt(block, skipjack_key_);
        return block;
    case CipherId::Raiden:
        for (std::uint32_t i = 0; i < stage.iterations; ++i)
            block = raiden_encrypt(block, raiden_key_);
        return block;
    }
    throw std::logic_error("unknown cipher id");
}

Block64 ProductCipherSpec::apply_inverse(Block64 block, const StageSpec& stage) const {
    switch (stage.cipher) {
    case CipherId::Idea:
        for (std::uint32_t i = 0; i < stage.iterations; ++i)
            block = idea_decrypt(block, idea_dec_);
        return block;
    case CipherId::Skipjack:
        for (std::uint32_t i = 0; i < stage.iterations; ++i)
            block = skipjack_decrypt(block, skipjack_key_);
        return block;
    case CipherId::Raiden:
        for (std::uint32_t i = 0; i < stage.iterations; ++i)
            block = raiden_decrypt(block, raiden_key_);
        return block;
    }
    throw std::logic_error("unknown cipher id");
}

Block64 encrypt_block(Block64 block, const ProductCipherSpec& spec) {
    for (const auto& stage : spec.stages())
        block = spec.apply(block, stage);
    return block;
}

Block64 decrypt_block(Block64 block, const ProductCipherSpec& spec) {
    const auto& stages = spec.stages();
    for (auto it = stages.rbegin(); it != stages.rend(); ++it)
        block = spec.apply_inverse(block, *it);
    return block;
}

Partitioning partition(const ProductCipherSpec& spec, std::size_t n_stages,
                       const CipherWeights& weights) {
    const std::uint64_t total = spec.total_iterations();
    if (n_stages == 0)
        throw std::invalid_argument("partition: n_stages must be >= 1");
    if (n_stages > total)
        throw std::invalid_argument("partition: n_stages (" + std::to_string(n_stages) +
                                    ") exceeds total iterations (" + std::to_string(total) + ")");

    if (n_stages == 5 && spec.is_canonical())
        return kCanonicalFiveWay;

    // Flatten to one entry per iteration, then split contiguously so the
    // heaviest group is as light as possible (min-max linear partition).
    std::vector<CipherId> items;
    items.reserve(static_cast<std::size_t>(total));
    for (const auto& s : spec.stages())
        for (std::uint32_t i = 0; i < s.iterations; ++i)
            items.push_back(s.cipher);

    const std::size_t t = items.size();
    const std::size_t n = n_stages;
    std::vector<double> prefix(t + 1, 0.0);
    for (std::size_t i = 0; i < t; ++i)
        prefix[i + 1] = prefix[i] + weights[static_cast<std::size_t>(items[i])];

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // dp[j][i]: minimal achievable max group weight for the first i items in
    // j groups; cut[j][i]: start of the j-th group, smallest on ties.
    std::vector<std::vector<double>> dp(n + 1, std::vector<double>(t + 1, kInf));
    std::vector<std::vector<std::size_t>> cut(n + 1, std::vector<std::size_t>(t + 1, 0));
    dp[0][0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = j; i + (n - j) <= t; ++i) {
            for (std::size_t k = j - 1; k < i; ++k) {
                if (dp[j - 1][k] == kInf)
                    continue;
                const double candidate = std::max(dp[j - 1][k], prefix[i] - prefix[k]);
                if (candidate < dp[j][i]) {
                    dp[j][i] = candidate;
                    cut[j][i] = k;
                }
            }
        }
    }

    std::vector<std::size_t> bounds(n + 1, 0);
    bounds[n] = t;
    for (std::size_t j = n; j > 0; --j)
        bounds[j - 1] = cut[j][bounds[j]];

    Partitioning groups(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = bounds[j]; i < bounds[j + 1]; ++i)
            push_iteration(groups[j], items[i]);
    return groups;
}

} // namespace cipherpipe
