#include "ragleak/defense.hpp"

#include <cctype>
#include <vector>

#include "ragleak/hash.hpp"

namespace ragleak {

namespace {

struct Token {
    std::size_t begin;
    std::size_t end;
};

std::vector<Token> tokenize_with_offsets(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) tokens.push_back(Token{start, i});
    }
    return tokens;
}

std::uint64_t window_hash(std::string_view text, const std::vector<Token>& tokens,
                          std::size_t first, std::size_t count) {
    std::uint64_t h = kFnvOffset;
    for (std::size_t k = first; k < first + count; ++k) {
        h = fnv1a64(text.substr(tokens[k].begin, tokens[k].end - tokens[k].begin), h);
        h = fnv1a64_mix(h, 0x1f);
    }
    return h;
}

}  // namespace

GrepDefense::GrepDefense(const KnowledgeBase& kb, std::size_t min_match_words)
    : n_(min_match_words == 0 ? kDefaultMinMatchWords : min_match_words) {
    for (const auto& chunk : kb.chunks) {
        const auto tokens = tokenize_with_offsets(chunk.text);
        if (tokens.size() < n_) continue;
        for (std::size_t i = 0; i + n_ <= tokens.size(); ++i) {
            window_hashes_.insert(window_hash(chunk.text, tokens, i, n_));
        }
    }
}

std::string GrepDefense::apply(const std::string& response_text) const {
    const auto tokens = tokenize_with_offsets(response_text);
    if (tokens.size() < n_ || window_hashes_.empty()) return response_text;

    std::vector<bool> covered(tokens.size(), false);
    for (std::size_t i = 0; i + n_ <= tokens.size(); ++i) {
        if (window_hashes_.count(window_hash(response_text, tokens, i, n_)) != 0) {
            for (std::size_t k = i; k < i + n_; ++k) covered[k] = true;
        }
    }

    std::string out;
    out.reserve(response_text.size());
    std::size_t copied_to = 0;
    std::size_t t = 0;
    while (t < tokens.size()) {
        if (!covered[t]) {
            ++t;
            continue;
        }
        std::size_t last = t;
        while (last + 1 < tokens.size() && covered[last + 1]) ++last;
        out.append(response_text, copied_to, tokens[t].begin - copied_to);
        out += "[REDACTED]";
        copied_to = tokens[last].end;
        t = last + 1;
    }
    out.append(response_text, copied_to, response_text.size() - copied_to);
    return out;
}

std::string grep_defense(const std::string& response_text, const KnowledgeBase& kb,
                         std::size_t min_match_words) {
    return GrepDefense(kb, min_match_words).apply(response_text);
}

}  // namespace ragleak
