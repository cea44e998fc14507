#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "ragleak/embedding.hpp"  // RemoteEndpoint
#include "ragleak/rng.hpp"

namespace ragleak {

enum class FormattingMode {
    plain,
    sentence_lines_with_markers,  // one sentence per line, wrapped in "&&" markers
};

/// Deterministic stand-in for the nondeterministic generator of a live RAG
/// stack: injection compliance, output noise and refusals become seeded,
/// controlled variables.
struct GeneratorBehavior {
    double leak_probability = 1.0;
    double noise_char_rate = 0.0;    // per-character case/punctuation perturbation of leaked text
    double refusal_probability = 0.0;
    FormattingMode formatting_mode = FormattingMode::plain;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct GenerationResult {
    std::string text;
    bool leaked = false;
};

class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;
    /// assembled_prompt is the full system prompt (context included);
    /// user_query the raw query as the generator would see it.
    virtual GenerationResult generate(const std::string& assembled_prompt,
                                      const std::string& user_query) = 0;
};

inline constexpr const char* kRefusalMessage = "I cannot help with that.";
inline constexpr const char* kGenericAnswer =
    "Based on the retrieved material, here is a short summary relevant to your request.";

class SimulatedGenerator final : public GeneratorBackend {
public:
    /// trigger_phrases: injection commands recognized as leak attempts
    /// (substring match, case-insensitive).
    SimulatedGenerator(GeneratorBehavior behavior, std::vector<std::string> trigger_phrases);

    GenerationResult generate(const std::string& assembled_prompt,
                              const std::string& user_query) override;

    static std::string apply_sentence_markers(const std::string& text);

private:
    GeneratorBehavior behavior_;
    std::vector<std::string> triggers_lower_;
    Rng rng_;
};

/// Replays a fixed list of responses in order; exhausting the transcript is
/// a backend failure.
class ScriptedGenerator final : public GeneratorBackend {
public:
    explicit ScriptedGenerator(std::vector<std::string> responses);
    static ScriptedGenerator from_file(const std::string& path);  // JSON array of strings

    GenerationResult generate(const std::string& assembled_prompt,
                              const std::string& user_query) override;

private:
    std::deque<std::string> responses_;
};

/// Chat-completion style HTTP client.
/// Wire format: POST <url> with {"messages": [{"role": "system", "content": ...},
/// {"role": "user", "content": ...}]}, response {"text": "..."}.
class RemoteGenerator final : public GeneratorBackend {
public:
    explicit RemoteGenerator(RemoteEndpoint endpoint);

    GenerationResult generate(const std::string& assembled_prompt,
                              const std::string& user_query) override;

private:
    RemoteEndpoint endpoint_;
};

}  // namespace ragleak
