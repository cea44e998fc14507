#include "ragleak/retrieval.hpp"

#include <algorithm>
#include <numeric>

#include "ragleak/errors.hpp"
#include "ragleak/text.hpp"

namespace ragleak {

void RetrieverConfig::validate() const {
    if (mode == RetrievalMode::top_k && k == 0) {
        throw ArgumentError("retriever: k must be >= 1");
    }
    if (min_similarity < -1.0 || min_similarity > 1.0) {
        throw ArgumentError("retriever: min_similarity must lie in [-1, 1]");
    }
}

VectorIndex index_build(const KnowledgeBase& kb, std::shared_ptr<EmbeddingBackend> backend) {
    if (kb.chunks.empty()) throw ArgumentError("index_build: knowledge base is empty");
    std::vector<std::pair<std::string, EmbeddingVector>> entries;
    entries.reserve(kb.chunks.size());
    for (const auto& chunk : kb.chunks) {
        try {
            entries.emplace_back(chunk.id, backend->embed(chunk.text));
        } catch (const Error& e) {
            throw InternalError("index_build: embedding failed for chunk " + chunk.id + ": " + e.what());
        }
    }
    return VectorIndex(std::move(entries), std::move(backend));
}

RetrievalResult retrieve(const VectorIndex& index, const std::string& query_text,
                         const RetrieverConfig& cfg) {
    cfg.validate();
    if (trim(query_text).empty()) throw ArgumentError("retrieve: query is empty");

    const auto query_vec = index.backend().embed(query_text);
    const auto& entries = index.entries();

    std::vector<double> scores(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        scores[i] = cosine_similarity(query_vec, entries[i].second);
    }

    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), 0);
    auto by_score_then_kb_order = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    };

    RetrievalResult result;
    result.query_echo = query_text;
    if (cfg.mode == RetrievalMode::top_k) {
        const std::size_t take = std::min(cfg.k, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                          order.end(), by_score_then_kb_order);
        order.resize(take);
    } else {
        std::erase_if(order, [&](std::size_t i) { return scores[i] < cfg.min_similarity; });
        std::sort(order.begin(), order.end(), by_score_then_kb_order);
    }
    result.hits.reserve(order.size());
    for (std::size_t i : order) {
        result.hits.push_back(ScoredHit{entries[i].first, scores[i]});
    }
    return result;
}

}  // namespace ragleak
