#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragleak/agent.hpp"
#include "ragleak/errors.hpp"
#include "ragleak/extraction.hpp"
#include "ragleak/metrics.hpp"
#include "ragleak/target.hpp"

namespace ragleak {

enum class Phase { exploration, exploitation };

const char* to_string(Phase phase);

struct RoundEvent {
    std::size_t round = 0;  // 0 is the initial exploration round
    Phase phase = Phase::exploration;
    AnchorOrigin origin = AnchorOrigin::exploration;
    std::string anchor_hash;
    std::string query_hash;
    std::string response_hash;
    // One entry per newly stored candidate: the KB chunk id it recovered,
    // or nullopt when it certified nothing.
    std::vector<std::optional<std::string>> new_chunks;
    double crr = 0.0;
    std::vector<std::string> flags;

    std::size_t new_chunk_count() const { return new_chunks.size(); }
};

struct CampaignReport {
    std::vector<std::pair<std::size_t, double>> crr_curve;  // (round, crr), non-decreasing
    double final_crr = 0.0;                                 // last curve value
    std::vector<ChunkMatch> matches;
    std::size_t query_count = 0;
    nlohmann::ordered_json config_echo;
    std::vector<RoundEvent> events;
    bool aborted = false;
    std::string abort_reason;
};

/// Thrown when the target or attack backend fails hard; carries whatever
/// the campaign produced so far.
class CampaignAbort : public Error {
public:
    CampaignAbort(const std::string& what, CampaignReport partial)
        : Error(what), partial_(std::move(partial)) {}
    const CampaignReport& partial() const { return partial_; }

private:
    CampaignReport partial_;
};

/// One attack campaign against one RagApp. Sequential by design: the
/// seeded switch RNG and the memory stores are owned, single-writer state.
/// Run several Campaign instances for concurrent experiments.
class Campaign {
public:
    Campaign(const KnowledgeBase& kb, const VectorIndex& index, RagApp& app,
             RandomTextGenerator& random_text, ContinuationBackend& continuations,
             std::shared_ptr<EmbeddingBackend> attacker_embedder, AgentConfig cfg,
             const std::vector<ExtractionPattern>& patterns = builtin_patterns(),
             const std::vector<PromptTemplate>& templates = builtin_templates());

    /// Round 0: one exploration query before the main loop.
    RoundEvent initial_round();

    /// One main-loop round; requires initial_round() to have run. The
    /// switch policy picks the phase; an empty short-term memory forces
    /// exploration (flagged). Exploitation consumes one anchor per round
    /// from the per-campaign anchor queue so rounds equal issued queries.
    RoundEvent step();

    /// initial_round() + attack_times steps. Backend failures waste the
    /// round; kFailureAbortThreshold consecutive ones abort the campaign
    /// with a partial report attached.
    CampaignReport run(nlohmann::ordered_json config_echo = {});

    const std::vector<RoundEvent>& events() const { return events_; }
    const AgentMemory& memory() const { return memory_; }
    double current_crr() const { return tracker_.crr(); }
    const AgentConfig& config() const { return cfg_; }

    static constexpr int kFailureAbortThreshold = 5;

private:
    RoundEvent execute_round(std::size_t round_no, bool forced_exploration);
    void refill_anchor_queue(std::vector<std::string>& flags);
    CampaignReport build_report(nlohmann::ordered_json config_echo) const;

    const KnowledgeBase* kb_;
    const VectorIndex* index_;
    RagApp* app_;
    RandomTextGenerator* random_text_;
    ContinuationBackend* continuations_;
    std::shared_ptr<EmbeddingBackend> embedder_;
    AgentConfig cfg_;
    const std::vector<ExtractionPattern>* patterns_;
    const std::vector<PromptTemplate>* templates_;

    AgentMemory memory_;
    std::vector<EmbeddingVector> long_embeddings_;
    std::deque<AnchorQuery> anchor_queue_;
    RecoveryTracker tracker_;
    Rng switch_rng_;
    std::vector<RoundEvent> events_;
    std::size_t rounds_run_ = 0;
    bool started_ = false;
    int consecutive_failures_ = 0;
};

/// Convenience wrapper: wire a campaign, run it, return the report.
CampaignReport run_campaign(const KnowledgeBase& kb, const VectorIndex& index, RagApp& app,
                            RandomTextGenerator& random_text, ContinuationBackend& continuations,
                            std::shared_ptr<EmbeddingBackend> attacker_embedder, AgentConfig cfg,
                            nlohmann::ordered_json config_echo = {});

}  // namespace ragleak
