#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ragleak/corpus.hpp"
#include "ragleak/retrieval.hpp"

namespace ragleak {

/// System-prompt layout of a RAG framework. The five builtin entries
/// reproduce the prompt formats popular RAG stacks wrap retrieved chunks
/// with; users can add frameworks through the JSON template file without
/// code changes.
struct PromptTemplate {
    std::string framework;   // "langchain_v1" .. "langchain_v4", "coze", or custom
    std::string text;        // contains {context} and {question} exactly once each
    std::string context_joiner = "\n\n";
    std::optional<std::string> slice_header_pattern;  // e.g. "recall slice {i}:"

    void validate() const;
};

/// The five shipped templates, in extraction-precedence order
/// (specific formats before generic ones).
const std::vector<PromptTemplate>& builtin_templates();

/// Template lookup by framework name among `templates`; throws ArgumentError
/// if absent.
const PromptTemplate& template_for(const std::string& framework,
                                   const std::vector<PromptTemplate>& templates = builtin_templates());

/// Parses a JSON array of {framework, text, joiner, slice_header_pattern}.
std::vector<PromptTemplate> load_templates_json(const std::string& json_text);
std::vector<PromptTemplate> load_templates_file(const std::string& path);
std::string templates_to_json(const std::vector<PromptTemplate>& templates);

/// Substitutes {context} with the hit chunks joined by context_joiner
/// (numbered slice headers prepended when the template has them) and
/// {question} with the raw query. No other rewriting.
std::string assemble_prompt(const PromptTemplate& tmpl, const RetrievalResult& hits,
                            const KnowledgeBase& kb, const std::string& question);

}  // namespace ragleak
