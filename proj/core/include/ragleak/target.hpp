#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ragleak/defense.hpp"
#include "ragleak/generator.hpp"
#include "ragleak/rag_templates.hpp"
#include "ragleak/retrieval.hpp"

namespace ragleak {

enum class GeneratorKind { simulated, scripted, remote };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::simulated;
    GeneratorBehavior behavior;             // simulated
    std::vector<std::string> trigger_phrases;  // simulated; empty = all builtin command triggers
    std::vector<std::string> transcript;    // scripted (inline)
    std::string transcript_path;            // scripted (file); wins over inline when set
    RemoteEndpoint remote;                  // remote
};

struct DefenseConfig {
    bool grep_filter = false;
    std::size_t min_match_words = GrepDefense::kDefaultMinMatchWords;
};

struct RagAppConfig {
    PromptTemplate prompt_template;
    RetrieverConfig retriever;
    GeneratorSpec generator;
    DefenseConfig defenses;
};

struct RagResponse {
    std::string text;   // present even on refusal
    bool leaked = false;  // diagnostic; meaningful for the simulated backend only
    int round_trip_ms = 0;
};

/// The simulated victim. One instance serves one campaign at a time (the
/// seeded generator is sequential state); distinct instances are
/// independent.
class RagApp {
public:
    RagApp(RagAppConfig config, const KnowledgeBase& kb, const VectorIndex& index);

    /// retrieve -> assemble -> generate -> defenses, in that order.
    /// Defenses only ever touch generator output, never retrieval.
    RagResponse answer(const std::string& query);

    const RagAppConfig& config() const { return config_; }

private:
    RagAppConfig config_;
    const KnowledgeBase* kb_;
    const VectorIndex* index_;
    std::unique_ptr<GeneratorBackend> generator_;
    std::optional<GrepDefense> grep_;
};

std::unique_ptr<GeneratorBackend> make_generator_backend(const GeneratorSpec& spec);

}  // namespace ragleak
