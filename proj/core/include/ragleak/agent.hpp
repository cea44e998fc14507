#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "ragleak/commands.hpp"
#include "ragleak/corpus.hpp"
#include "ragleak/embedding.hpp"
#include "ragleak/rng.hpp"

namespace ragleak {

/// Short-term FIFO of not-yet-exploited chunks plus a deduplicated
/// insertion-ordered long-term archive keyed by normalized text. Every
/// element ever queued short-term is also archived long-term.
class AgentMemory {
public:
    /// Returns true (and stores into both areas) iff the text is new under
    /// its normalization key.
    bool push_candidate(const std::string& text);

    std::optional<std::string> pop_short();

    const std::vector<std::string>& long_items() const { return long_; }
    std::size_t long_size() const { return long_.size(); }
    std::size_t short_size() const { return short_.size(); }

private:
    std::deque<std::string> short_;
    std::vector<std::string> long_;
    std::unordered_set<std::string> keys_;
};

enum class AnchorOrigin { exploration, overlap_head, overlap_tail, forward, backward };

const char* to_string(AnchorOrigin origin);

struct AnchorQuery {
    std::string text;  // non-empty
    AnchorOrigin origin = AnchorOrigin::exploration;
};

enum class SwitchKind { probability, frequency };

struct SwitchPolicy {
    SwitchKind kind = SwitchKind::frequency;
    double p_explore = 0.1;          // probability kind
    std::size_t explore_every = 10;  // frequency kind

    void validate() const;
};

enum class AgentMode { untargeted, targeted };

struct AgentConfig {
    double tau = 0.6;
    int continuations_forward = 5;
    int continuations_backward = 5;
    std::size_t min_continuation_tokens = 1000;  // counted as whitespace words
    std::size_t assumed_overlap_words = 300;
    SwitchPolicy switch_policy;
    std::size_t attack_times = 200;
    std::size_t exploration_retry_cap = 8;
    double crr_match_eed = 0.1;
    std::uint64_t rng_seed = 0;
    AdversarialCommand command = command_for("optimized_direct_output");
    AgentMode mode = AgentMode::untargeted;
    std::optional<std::string> domain_hint;  // targeted mode
    bool use_overlap_strategy = true;
    bool use_reasoning_strategy = true;
    std::size_t min_candidate_words = 20;  // drops captured prompt boilerplate

    void validate() const;
};

/// Generates the random text the exploration phase filters by similarity.
class RandomTextGenerator {
public:
    virtual ~RandomTextGenerator() = default;
    /// history carries previously rejected candidates, newest last.
    virtual std::string generate(const std::vector<std::string>& history) = 0;
};

/// Seeded sampler drawing fixed-size paragraphs from a word list.
class WordlistSampler final : public RandomTextGenerator {
public:
    WordlistSampler(std::vector<std::string> words, std::uint64_t seed,
                    std::size_t words_per_query = 500);

    std::string generate(const std::vector<std::string>& history) override;

private:
    std::vector<std::string> words_;
    std::size_t words_per_query_;
    Rng rng_;
};

/// Remote-LLM random text using the shipped random-query prompt.
class RemoteRandomText final : public RandomTextGenerator {
public:
    RemoteRandomText(RemoteEndpoint endpoint, std::string domain_hint);
    std::string generate(const std::vector<std::string>& history) override;

private:
    RemoteEndpoint endpoint_;
    std::string domain_;
};

enum class Direction { forward, backward };

/// Produces forward/backward continuations of an extracted chunk.
class ContinuationBackend {
public:
    virtual ~ContinuationBackend() = default;
    virtual std::string continuation(const std::string& chunk_text, Direction direction,
                                     int variant, std::size_t target_words) = 0;
};

/// Upper-bound attacker for testing: reconstructs the source documents
/// from KB word spans and returns the true neighboring window, shifted per
/// variant. A word-dropout rate degrades it into an imperfect reasoner.
class OracleContinuations final : public ContinuationBackend {
public:
    OracleContinuations(const KnowledgeBase& kb, double dropout_rate = 0.0,
                        std::uint64_t seed = 0, std::size_t variant_shift_words = 600);

    std::string continuation(const std::string& chunk_text, Direction direction, int variant,
                             std::size_t target_words) override;

private:
    struct ChunkRef {
        std::size_t doc = 0;
        WordSpan span;
    };
    const ChunkRef* locate(const std::string& chunk_text) const;

    double dropout_rate_;
    std::size_t shift_;
    Rng rng_;
    std::vector<std::vector<std::string>> doc_words_;
    std::vector<std::pair<std::string, ChunkRef>> chunks_;  // normalized text -> location
};

/// Remote-LLM continuations using the untargeted or targeted prompt; one
/// completion per chunk is requested and split on its numbered items.
class RemoteContinuations final : public ContinuationBackend {
public:
    RemoteContinuations(RemoteEndpoint endpoint, AgentMode mode, std::string domain_hint);

    std::string continuation(const std::string& chunk_text, Direction direction, int variant,
                             std::size_t target_words) override;

private:
    RemoteEndpoint endpoint_;
    AgentMode mode_;
    std::string domain_;
    std::string cached_chunk_;
    std::vector<std::string> cached_items_;
};

/// anchor ⊕ command, realized as a newline join with the anchor first so
/// retrieval embeds anchor-dominant text.
std::string compose_query(const AnchorQuery& anchor, const AdversarialCommand& command);

struct ExploreResult {
    AnchorQuery anchor;
    bool cap_exhausted = false;
    std::size_t attempts = 0;
    double max_similarity = -1.0;  // of the returned candidate
};

/// Curiosity-driven exploration: draw random texts until one embeds below
/// tau against everything extracted so far (empty memory accepts
/// immediately); rejected texts feed back into the generator's history.
/// After exploration_retry_cap draws, the lowest-similarity candidate wins
/// and the result is flagged cap_exhausted.
ExploreResult explore(std::span<const EmbeddingVector> long_term_embeddings,
                      RandomTextGenerator& generator, const EmbeddingBackend& embedder,
                      const AgentConfig& cfg);

/// Convenience overload that embeds the memory's long-term items first.
ExploreResult explore(const AgentMemory& memory, RandomTextGenerator& generator,
                      const EmbeddingBackend& embedder, const AgentConfig& cfg);

/// Overlap-segment anchors: the first and last min(n, word count) words of
/// the chunk.
std::vector<AnchorQuery> exploit_overlap(const std::string& chunk_text,
                                         std::size_t assumed_overlap_words);

struct ReasoningResult {
    std::vector<AnchorQuery> anchors;
    bool short_continuation = false;  // some continuation stayed under the word floor
};

/// Forward/backward continuation anchors. Continuations under
/// min_continuation_tokens words are re-requested once, then accepted as-is
/// (flagged); empty ones are dropped.
ReasoningResult exploit_reasoning(const std::string& chunk_text, ContinuationBackend& backend,
                                  const AgentConfig& cfg);

}  // namespace ragleak
