#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ragleak/corpus.hpp"
#include "ragleak/embedding.hpp"

namespace ragleak {

/// Character-level Levenshtein distance, unit costs, full DP.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Banded Levenshtein: returns the exact distance when it is <= limit,
/// std::nullopt otherwise. Bit-equal to the full DP whenever it returns.
std::optional<std::size_t> levenshtein_bounded(std::string_view a, std::string_view b,
                                               std::size_t limit);

/// Normalized edit distance: levenshtein(a, b) / max(|a|, |b|).
/// Defined as 0 when both strings are empty. Range [0, 1].
double eed(std::string_view a, std::string_view b);

/// Semantic similarity: cosine of the two embeddings. Range [-1, 1].
double ss(const std::string& a, const std::string& b, const EmbeddingBackend& backend);

struct ChunkMatch {
    std::string kb_chunk_id;
    int candidate_index = -1;  // -1 when no candidate certifies the chunk
    double ss = 0.0;
    double eed = 1.0;          // exact for recovered chunks, a certified lower bound otherwise
    bool recovered = false;
};

struct CrrResult {
    double value = 0.0;
    std::vector<ChunkMatch> matches;
};

/// Chunk recovery rate. Greedy assignment in KB order: each chunk takes the
/// minimum-EED unused candidate; it counts as recovered iff that EED is
/// <= match_eed, in which case the candidate is consumed. When backend is
/// given, ss is filled for recovered chunks.
CrrResult crr(const std::vector<std::string>& extracted, const KnowledgeBase& kb,
              double match_eed, const EmbeddingBackend* backend = nullptr);

namespace detail {

/// Sorted multiset of hashed character q-grams; supports the Ukkonen
/// q-gram lower bound on edit distance.
struct QgramProfile {
    static constexpr std::size_t kQ = 4;
    std::vector<std::uint64_t> grams;
    std::size_t text_length = 0;

    static QgramProfile build(std::string_view text);
};

/// Certified lower bound on levenshtein(a, b) from lengths and q-gram
/// profiles. Never exceeds the true distance.
std::size_t edit_distance_lower_bound(const QgramProfile& a, const QgramProfile& b);

}  // namespace detail

/// Incremental chunk-recovery bookkeeping for campaigns: candidates arrive
/// one at a time; each may certify at most one not-yet-recovered chunk
/// (minimum EED <= match_eed). Exact-equality and certified lower bounds
/// keep per-candidate cost low.
class RecoveryTracker {
public:
    RecoveryTracker(const KnowledgeBase& kb, double match_eed);

    /// Returns the id of the chunk this candidate recovers, if any.
    std::optional<std::string> add_candidate(const std::string& candidate);

    double crr() const;
    std::size_t recovered_count() const { return recovered_count_; }

    /// Per-chunk match records. eed is exact for recovered chunks and a
    /// certified lower bound (capped at 1) otherwise.
    std::vector<ChunkMatch> finalize(const std::vector<std::string>& candidates,
                                     const EmbeddingBackend* backend = nullptr) const;

private:
    const KnowledgeBase* kb_;
    double match_eed_;
    std::unordered_map<std::string_view, std::size_t> chunk_by_text_;
    std::vector<detail::QgramProfile> chunk_profiles_;
    std::vector<bool> recovered_;
    std::vector<int> recovered_by_;
    std::vector<double> recovered_eed_;
    std::size_t candidate_count_ = 0;
    std::size_t recovered_count_ = 0;
};

}  // namespace ragleak
