#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ragleak {

/// Prompt templates the attacker's LLM backends use. Placeholders are
/// written as {name}; fill_prompt substitutes every occurrence.

/// Random-query generation ({domain}, {context}).
const std::string& random_query_prompt();

/// Forward/backward continuation request, no domain knowledge ({chunk}).
const std::string& continuation_prompt_untargeted();

/// Continuation request with a domain role ({domain}, {chunk}).
const std::string& continuation_prompt_targeted();

std::string fill_prompt(std::string prompt,
                        const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace ragleak
