#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>

#include "ragleak/corpus.hpp"

namespace ragleak {

/// Output-phase filter: any verbatim word run of length >= min_match_words
/// that also occurs in a KB chunk is replaced by "[REDACTED]". Word runs
/// are whitespace-token runs; inserted tokens (line markers) break them.
class GrepDefense {
public:
    static constexpr std::size_t kDefaultMinMatchWords = 12;

    GrepDefense(const KnowledgeBase& kb, std::size_t min_match_words = kDefaultMinMatchWords);

    /// Idempotent: redacted output contains no KB word runs.
    std::string apply(const std::string& response_text) const;

    std::size_t min_match_words() const { return n_; }

private:
    std::size_t n_;
    std::unordered_set<std::uint64_t> window_hashes_;
};

/// One-shot convenience wrapper around GrepDefense.
std::string grep_defense(const std::string& response_text, const KnowledgeBase& kb,
                         std::size_t min_match_words = GrepDefense::kDefaultMinMatchWords);

}  // namespace ragleak
