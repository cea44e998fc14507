#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ragleak/rag_templates.hpp"

namespace ragleak {

/// One framework's context-capture regex. Patterns carry their own inline
/// flags ((?si) where the source format uses them); exactly one capture
/// group holds the context region.
struct ExtractionPattern {
    std::string framework;  // matches PromptTemplate::framework
    std::string pattern;

    void validate() const;  // compiles the pattern, checks the capture-group count
};

struct ExtractionOutcome {
    std::vector<std::string> candidates;            // normalized, non-empty, no edge whitespace
    std::optional<std::string> matched_framework;   // absent when nothing matched
    std::string raw_capture;
};

/// Builtin pattern library in precedence order: specific formats (coze,
/// tag-delimited langchain_v4) before the generic "Context:" one, which
/// would otherwise shadow them.
const std::vector<ExtractionPattern>& builtin_patterns();

std::vector<ExtractionPattern> load_patterns_json(const std::string& json_text);
std::vector<ExtractionPattern> load_patterns_file(const std::string& path);
std::string patterns_to_json(const std::vector<ExtractionPattern>& patterns);

/// Inverts the marker-formatting evasion and canonicalizes whitespace:
/// strips "&&" line markers, rejoins line-per-sentence text into prose,
/// collapses whitespace runs, trims. Idempotent.
std::string normalize(const std::string& text);

/// Splits a context capture into chunk candidates: on the template's slice
/// headers when present, otherwise on its context_joiner. Pieces are
/// trimmed; empties dropped.
std::vector<std::string> segment_context(const std::string& capture, const PromptTemplate& tmpl);

/// Tries each pattern in order; the first whose context capture is
/// non-empty wins. The capture is segmented with the matching framework's
/// template, then each piece is normalized. Candidates shorter than
/// min_candidate_words are dropped. No match is a valid outcome, not an
/// error.
ExtractionOutcome extract_chunks(const std::string& response_text,
                                 const std::vector<ExtractionPattern>& patterns = builtin_patterns(),
                                 const std::vector<PromptTemplate>& templates = builtin_templates(),
                                 std::size_t min_candidate_words = 0);

}  // namespace ragleak
