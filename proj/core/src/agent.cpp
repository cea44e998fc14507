#include "ragleak/agent.hpp"

#include <algorithm>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <boost/regex.hpp>

#include "ragleak/errors.hpp"
#include "ragleak/extraction.hpp"
#include "ragleak/prompts.hpp"
#include "ragleak/text.hpp"

namespace ragleak {

bool AgentMemory::push_candidate(const std::string& text) {
    auto key = normalize(text);
    if (key.empty()) return false;
    if (!keys_.insert(std::move(key)).second) return false;
    short_.push_back(text);
    long_.push_back(text);
    return true;
}

std::optional<std::string> AgentMemory::pop_short() {
    if (short_.empty()) return std::nullopt;
    std::string out = std::move(short_.front());
    short_.pop_front();
    return out;
}

const char* to_string(AnchorOrigin origin) {
    switch (origin) {
        case AnchorOrigin::exploration: return "exploration";
        case AnchorOrigin::overlap_head: return "overlap_head";
        case AnchorOrigin::overlap_tail: return "overlap_tail";
        case AnchorOrigin::forward: return "forward";
        case AnchorOrigin::backward: return "backward";
    }
    return "unknown";
}

void SwitchPolicy::validate() const {
    if (kind == SwitchKind::probability && (p_explore < 0.0 || p_explore > 1.0)) {
        throw ArgumentError("switch policy: p_explore must lie in [0, 1]");
    }
    if (kind == SwitchKind::frequency && explore_every == 0) {
        throw ArgumentError("switch policy: explore_every must be positive");
    }
}

void AgentConfig::validate() const {
    if (tau < -1.0 || tau > 1.0) throw ArgumentError("agent: tau must lie in [-1, 1]");
    if (continuations_forward < 0 || continuations_backward < 0) {
        throw ArgumentError("agent: continuation counts must be non-negative");
    }
    if (exploration_retry_cap == 0) throw ArgumentError("agent: exploration_retry_cap must be >= 1");
    if (crr_match_eed < 0.0 || crr_match_eed > 1.0) {
        throw ArgumentError("agent: crr_match_eed must lie in [0, 1]");
    }
    if (mode == AgentMode::targeted && (!domain_hint || domain_hint->empty())) {
        throw ArgumentError("agent: targeted mode requires a domain_hint");
    }
    switch_policy.validate();
    command.validate();
}

WordlistSampler::WordlistSampler(std::vector<std::string> words, std::uint64_t seed,
                                 std::size_t words_per_query)
    : words_(std::move(words)), words_per_query_(words_per_query), rng_(seed) {
    if (words_.empty()) throw ArgumentError("WordlistSampler: word list is empty");
    if (words_per_query_ == 0) throw ArgumentError("WordlistSampler: words_per_query must be > 0");
}

std::string WordlistSampler::generate(const std::vector<std::string>&) {
    // Each call draws an independent paragraph; the history only matters
    // for LLM-backed generation.
    std::string out;
    out.reserve(words_per_query_ * 8);
    for (std::size_t i = 0; i < words_per_query_; ++i) {
        if (i > 0) out.push_back(' ');
        out += words_[rng_.below(words_.size())];
    }
    return out;
}

namespace {

std::string post_chat(const RemoteEndpoint& endpoint, const std::string& system_prompt,
                      const std::string& user_content);

}  // namespace

RemoteRandomText::RemoteRandomText(RemoteEndpoint endpoint, std::string domain_hint)
    : endpoint_(std::move(endpoint)), domain_(domain_hint.empty() ? "general" : std::move(domain_hint)) {}

std::string RemoteRandomText::generate(const std::vector<std::string>& history) {
    std::string context;
    // Recent rejections only; the prompt needs contrast, not the archive.
    const std::size_t take = std::min<std::size_t>(history.size(), 3);
    for (std::size_t i = history.size() - take; i < history.size(); ++i) {
        if (!context.empty()) context += " | ";
        context += history[i];
    }
    const auto prompt = fill_prompt(random_query_prompt(),
                                    {{"domain", domain_}, {"context", context}});
    return post_chat(endpoint_, prompt, "Begin!");
}

OracleContinuations::OracleContinuations(const KnowledgeBase& kb, double dropout_rate,
                                         std::uint64_t seed, std::size_t variant_shift_words)
    : dropout_rate_(dropout_rate), shift_(variant_shift_words), rng_(seed) {
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw ArgumentError("oracle continuations: dropout_rate must lie in [0, 1)");
    }
    // Rebuild each document's word sequence from its chunk spans (chunk
    // overlap makes the union cover every word).
    std::vector<std::string> doc_ids;
    for (const auto& chunk : kb.chunks) {
        std::size_t doc_idx;
        auto it = std::find(doc_ids.begin(), doc_ids.end(), chunk.doc_id);
        if (it == doc_ids.end()) {
            doc_idx = doc_ids.size();
            doc_ids.push_back(chunk.doc_id);
            doc_words_.emplace_back();
        } else {
            doc_idx = static_cast<std::size_t>(it - doc_ids.begin());
        }
        auto& words = doc_words_[doc_idx];
        if (words.size() < chunk.word_span.end) words.resize(chunk.word_span.end);
        const auto chunk_words = split_words(chunk.text);
        for (std::size_t i = 0; i < chunk_words.size(); ++i) {
            words[chunk.word_span.start + i] = std::string(chunk_words[i]);
        }
        chunks_.emplace_back(normalize(chunk.text), ChunkRef{doc_idx, chunk.word_span});
    }
}

const OracleContinuations::ChunkRef* OracleContinuations::locate(
    const std::string& chunk_text) const {
    const auto key = normalize(chunk_text);
    for (const auto& [text, ref] : chunks_) {
        if (text == key) return &ref;
    }
    // Noisy candidate: fall back to the chunk sharing the most words.
    const auto words = split_words(key);
    std::unordered_set<std::string_view> cand_words(words.begin(), words.end());
    const ChunkRef* best = nullptr;
    double best_score = 0.3;  // below this the lookup is a guess, return nothing
    for (const auto& [text, ref] : chunks_) {
        const auto chunk_words = split_words(text);
        if (chunk_words.empty()) continue;
        std::size_t hits = 0;
        for (const auto& w : chunk_words) {
            if (cand_words.count(w) != 0) ++hits;
        }
        const double score = static_cast<double>(hits) / static_cast<double>(chunk_words.size());
        if (score > best_score) {
            best_score = score;
            best = &ref;
        }
    }
    return best;
}

std::string OracleContinuations::continuation(const std::string& chunk_text, Direction direction,
                                              int variant, std::size_t target_words) {
    const ChunkRef* ref = locate(chunk_text);
    if (!ref) return {};
    const auto& words = doc_words_[ref->doc];
    const std::size_t doc_len = words.size();
    const std::size_t offset = shift_ * static_cast<std::size_t>(variant);

    std::size_t start = 0, end = 0;
    if (direction == Direction::forward) {
        start = ref->span.end + offset;
        if (start >= doc_len) return {};
        end = std::min(doc_len, start + target_words);
    } else {
        if (ref->span.start <= offset) return {};
        end = ref->span.start - offset;
        start = end > target_words ? end - target_words : 0;
    }

    std::string out;
    out.reserve((end - start) * 8);
    for (std::size_t i = start; i < end; ++i) {
        if (dropout_rate_ > 0.0 && rng_.uniform01() < dropout_rate_) continue;
        if (!out.empty()) out.push_back(' ');
        out += words[i];
    }
    return out;
}

RemoteContinuations::RemoteContinuations(RemoteEndpoint endpoint, AgentMode mode,
                                         std::string domain_hint)
    : endpoint_(std::move(endpoint)), mode_(mode),
      domain_(domain_hint.empty() ? "general" : std::move(domain_hint)) {}

std::string RemoteContinuations::continuation(const std::string& chunk_text, Direction direction,
                                              int variant, std::size_t) {
    if (chunk_text != cached_chunk_) {
        const auto& base = mode_ == AgentMode::targeted ? continuation_prompt_targeted()
                                                        : continuation_prompt_untargeted();
        const auto prompt =
            fill_prompt(base, {{"domain", domain_}, {"chunk", chunk_text}});
        const auto reply = post_chat(endpoint_, prompt, "Begin!");

        // The prompt asks for items numbered 1..10: 5 forward, 5 backward.
        cached_items_.clear();
        static const boost::regex item_re(R"(^\s*\d+\s*[.)]\s*)", boost::regex::perl);
        std::string current;
        std::size_t pos = 0;
        while (pos <= reply.size()) {
            const auto nl = reply.find('\n', pos);
            const std::string line =
                reply.substr(pos, (nl == std::string::npos ? reply.size() : nl) - pos);
            boost::smatch m;
            if (boost::regex_search(line, m, item_re,
                                    boost::regex_constants::match_continuous)) {
                if (!current.empty()) cached_items_.push_back(current);
                current = line.substr(static_cast<std::size_t>(m.length(0)));
            } else if (!current.empty()) {
                current += "\n" + line;
            }
            if (nl == std::string::npos) break;
            pos = nl + 1;
        }
        if (!current.empty()) cached_items_.push_back(current);
        if (cached_items_.empty()) cached_items_.push_back(reply);
        cached_chunk_ = chunk_text;
    }

    const std::size_t half = cached_items_.size() / 2;
    std::size_t idx = static_cast<std::size_t>(variant);
    if (direction == Direction::backward) idx += half;
    if (idx >= cached_items_.size()) idx = cached_items_.size() - 1;
    return cached_items_[idx];
}

std::string compose_query(const AnchorQuery& anchor, const AdversarialCommand& command) {
    if (trim(anchor.text).empty()) throw ArgumentError("compose_query: anchor text is empty");
    command.validate();
    return anchor.text + "\n" + command.text;
}

ExploreResult explore(std::span<const EmbeddingVector> long_term_embeddings,
                      RandomTextGenerator& generator, const EmbeddingBackend& embedder,
                      const AgentConfig& cfg) {
    std::vector<std::string> history;
    ExploreResult best;
    best.max_similarity = 2.0;  // above any cosine

    for (std::size_t attempt = 1; attempt <= cfg.exploration_retry_cap; ++attempt) {
        auto candidate = generator.generate(history);
        if (long_term_embeddings.empty()) {
            return ExploreResult{AnchorQuery{std::move(candidate), AnchorOrigin::exploration},
                                 false, attempt, -1.0};
        }
        const auto vec = embedder.embed(candidate);
        double max_sim = -1.0;
        for (const auto& chunk_vec : long_term_embeddings) {
            max_sim = std::max(max_sim, cosine_similarity(vec, chunk_vec));
        }
        if (max_sim < cfg.tau) {
            return ExploreResult{AnchorQuery{std::move(candidate), AnchorOrigin::exploration},
                                 false, attempt, max_sim};
        }
        if (max_sim < best.max_similarity) {
            best.anchor = AnchorQuery{candidate, AnchorOrigin::exploration};
            best.max_similarity = max_sim;
        }
        history.push_back(std::move(candidate));
    }
    best.cap_exhausted = true;
    best.attempts = cfg.exploration_retry_cap;
    return best;
}

ExploreResult explore(const AgentMemory& memory, RandomTextGenerator& generator,
                      const EmbeddingBackend& embedder, const AgentConfig& cfg) {
    std::vector<EmbeddingVector> embeddings;
    embeddings.reserve(memory.long_size());
    for (const auto& item : memory.long_items()) embeddings.push_back(embedder.embed(item));
    return explore(embeddings, generator, embedder, cfg);
}

std::vector<AnchorQuery> exploit_overlap(const std::string& chunk_text,
                                         std::size_t assumed_overlap_words) {
    const auto words = split_words(chunk_text);
    if (words.empty()) throw ArgumentError("exploit_overlap: chunk text is empty");
    const std::size_t n = std::min(assumed_overlap_words, words.size());
    std::vector<AnchorQuery> anchors;
    anchors.push_back(AnchorQuery{join_words(words, 0, n), AnchorOrigin::overlap_head});
    anchors.push_back(
        AnchorQuery{join_words(words, words.size() - n, words.size()), AnchorOrigin::overlap_tail});
    return anchors;
}

ReasoningResult exploit_reasoning(const std::string& chunk_text, ContinuationBackend& backend,
                                  const AgentConfig& cfg) {
    if (trim(chunk_text).empty()) throw ArgumentError("exploit_reasoning: chunk text is empty");
    ReasoningResult result;
    auto request = [&](Direction dir, int count, AnchorOrigin origin) {
        for (int v = 0; v < count; ++v) {
            auto text = backend.continuation(chunk_text, dir, v, cfg.min_continuation_tokens);
            if (word_count(text) < cfg.min_continuation_tokens) {
                // One re-request, then take whatever came back.
                text = backend.continuation(chunk_text, dir, v, cfg.min_continuation_tokens);
                if (word_count(text) < cfg.min_continuation_tokens) result.short_continuation = true;
            }
            if (trim(text).empty()) continue;  // nothing beyond the document edge
            result.anchors.push_back(AnchorQuery{std::move(text), origin});
        }
    };
    request(Direction::forward, cfg.continuations_forward, AnchorOrigin::forward);
    request(Direction::backward, cfg.continuations_backward, AnchorOrigin::backward);
    return result;
}

namespace {

std::string post_chat(const RemoteEndpoint& endpoint, const std::string& system_prompt,
                      const std::string& user_content) {
    std::string scheme_host = endpoint.url;
    std::string path = "/";
    const auto scheme_end = endpoint.url.find("://");
    if (scheme_end == std::string::npos) {
        throw ArgumentError("remote url has no scheme: " + endpoint.url);
    }
    if (const auto path_start = endpoint.url.find('/', scheme_end + 3);
        path_start != std::string::npos) {
        scheme_host = endpoint.url.substr(0, path_start);
        path = endpoint.url.substr(path_start);
    }

    nlohmann::json body;
    body["messages"] = nlohmann::json::array({
        {{"role", "system"}, {"content", system_prompt}},
        {{"role", "user"}, {"content", user_content}},
    });
    const std::string payload = body.dump();

    int last_status = 0;
    std::string last_error = "connection failed";
    for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
        httplib::Client client(scheme_host);
        client.set_connection_timeout(0, endpoint.timeout_ms * 1000);
        client.set_read_timeout(endpoint.timeout_ms / 1000, (endpoint.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (!endpoint.auth_token.empty()) {
            headers.emplace("Authorization", "Bearer " + endpoint.auth_token);
        }
        auto res = client.Post(path, headers, payload, "application/json");
        if (res && res->status >= 200 && res->status < 300) {
            try {
                return nlohmann::json::parse(res->body).at("text").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw TransportError("attack LLM reply malformed: " + std::string(e.what()),
                                     res->status, attempt);
            }
        }
        if (res) {
            last_status = res->status;
            last_error = "HTTP " + std::to_string(res->status);
            if (res->status >= 400 && res->status < 500) break;
        }
    }
    throw TransportError("attack LLM request failed after retries: " + last_error, last_status,
                         endpoint.max_retries);
}

}  // namespace

}  // namespace ragleak
