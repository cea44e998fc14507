#include "ragleak/target.hpp"

#include <chrono>

#include "ragleak/commands.hpp"
#include "ragleak/errors.hpp"

namespace ragleak {

std::unique_ptr<GeneratorBackend> make_generator_backend(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorKind::simulated: {
            auto triggers = spec.trigger_phrases.empty() ? builtin_trigger_phrases()
                                                         : spec.trigger_phrases;
            return std::make_unique<SimulatedGenerator>(spec.behavior, std::move(triggers));
        }
        case GeneratorKind::scripted: {
            if (!spec.transcript_path.empty()) {
                return std::make_unique<ScriptedGenerator>(
                    ScriptedGenerator::from_file(spec.transcript_path));
            }
            return std::make_unique<ScriptedGenerator>(spec.transcript);
        }
        case GeneratorKind::remote:
            return std::make_unique<RemoteGenerator>(spec.remote);
    }
    throw ArgumentError("unknown generator backend kind");
}

RagApp::RagApp(RagAppConfig config, const KnowledgeBase& kb, const VectorIndex& index)
    : config_(std::move(config)), kb_(&kb), index_(&index) {
    config_.prompt_template.validate();
    config_.retriever.validate();
    generator_ = make_generator_backend(config_.generator);
    if (config_.defenses.grep_filter) {
        grep_.emplace(kb, config_.defenses.min_match_words);
    }
}

RagResponse RagApp::answer(const std::string& query) {
    const auto started = std::chrono::steady_clock::now();

    const auto hits = retrieve(*index_, query, config_.retriever);
    const auto prompt = assemble_prompt(config_.prompt_template, hits, *kb_, query);
    auto generated = generator_->generate(prompt, query);

    std::string text = std::move(generated.text);
    if (grep_) text = grep_->apply(text);

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    // Deterministic backends report 0 so campaign outputs carry no clock.
    const int ms = config_.generator.kind == GeneratorKind::remote
                       ? static_cast<int>(elapsed.count())
                       : 0;
    return RagResponse{std::move(text), generated.leaked, ms};
}

}  // namespace ragleak
