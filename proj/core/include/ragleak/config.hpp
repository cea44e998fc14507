#pragma once

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ragleak/campaign.hpp"
#include "ragleak/kb_io.hpp"

namespace ragleak {

/// Environment variable consulted for remote-backend bearer tokens when a
/// config block does not name another one.
inline constexpr const char* kRemoteTokenEnv = "RAGLEAK_REMOTE_TOKEN";

enum class RandomTextKind { wordlist, remote };
enum class ContinuationKind { oracle, remote };

/// Fully-resolved campaign configuration. Parsed from the JSON config file
/// (strict: unknown keys are rejected), defaults filled in, flags applied
/// on top. The resolved form is echoed into reports.
struct CampaignConfig {
    std::uint64_t seed = 0;

    PromptTemplate prompt_template = template_for("langchain_v1");
    RetrieverConfig retriever;
    EmbeddingBackendSpec target_embedding;
    std::optional<EmbeddingBackendSpec> attacker_embedding;  // defaults to the target's
    GeneratorSpec generator;
    DefenseConfig defenses;
    AgentConfig agent;

    RandomTextKind random_text_kind = RandomTextKind::wordlist;
    std::size_t words_per_query = 500;
    std::string wordlist_path;  // empty = builtin list
    RemoteEndpoint random_text_remote;

    ContinuationKind continuation_kind = ContinuationKind::oracle;
    double continuation_dropout = 0.0;
    std::size_t continuation_shift_words = 600;
    RemoteEndpoint continuation_remote;

    std::string templates_path;  // optional extension files
    std::string patterns_path;
    std::string output_dir = "out";

    /// Re-derives every sub-seed from one top-level seed.
    void apply_seed(std::uint64_t new_seed);
    void apply_rounds(std::size_t rounds);

    /// Sweepable keys: retriever.k, retriever.min_similarity,
    /// switch.explore_every, agent.tau.
    void apply_sweep_value(const std::string& key, const std::string& value);

    /// The resolved configuration as JSON (the report's config echo).
    nlohmann::ordered_json to_json() const;

    void validate() const;
};

CampaignConfig parse_campaign_config(const std::string& json_text);
CampaignConfig load_campaign_config(const std::string& path);
CampaignConfig default_campaign_config();

/// Owns every component a campaign needs, wired and ready to run. Not
/// movable once built (internal references).
struct CampaignHarness {
    KnowledgeBase kb;
    std::shared_ptr<EmbeddingBackend> target_embedder;
    std::shared_ptr<EmbeddingBackend> attacker_embedder;
    std::unique_ptr<VectorIndex> index;
    std::unique_ptr<RagApp> app;
    std::unique_ptr<RandomTextGenerator> random_text;
    std::unique_ptr<ContinuationBackend> continuations;
    std::vector<PromptTemplate> templates;
    std::vector<ExtractionPattern> patterns;
    std::unique_ptr<Campaign> campaign;
    nlohmann::ordered_json config_echo;

    CampaignReport run() { return campaign->run(config_echo); }
};

std::unique_ptr<CampaignHarness> build_harness(const CampaignConfig& config, StoredKb stored);

}  // namespace ragleak
