#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ragleak/corpus.hpp"
#include "ragleak/embedding.hpp"

namespace ragleak {

enum class RetrievalMode {
    top_k,      // the k highest-similarity chunks
    threshold,  // every chunk with similarity >= min_similarity, unbounded
};

struct RetrieverConfig {
    RetrievalMode mode = RetrievalMode::top_k;
    std::size_t k = 3;
    double min_similarity = 0.0;

    void validate() const;
};

struct ScoredHit {
    std::string chunk_id;
    double score = 0.0;
};

struct RetrievalResult {
    std::vector<ScoredHit> hits;  // score descending, ties by KB order
    std::string query_echo;
};

/// Immutable chunk-embedding index. Entry order equals KB order; the
/// backend used at build time also embeds queries.
class VectorIndex {
public:
    VectorIndex(std::vector<std::pair<std::string, EmbeddingVector>> entries,
                std::shared_ptr<EmbeddingBackend> backend)
        : entries_(std::move(entries)), backend_(std::move(backend)) {}

    const std::vector<std::pair<std::string, EmbeddingVector>>& entries() const { return entries_; }
    const EmbeddingBackend& backend() const { return *backend_; }
    std::shared_ptr<EmbeddingBackend> backend_ptr() const { return backend_; }
    const EmbeddingBackendSpec& backend_spec() const { return backend_->spec(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::pair<std::string, EmbeddingVector>> entries_;
    std::shared_ptr<EmbeddingBackend> backend_;
};

/// Embeds every chunk once. Throws if the KB is empty; an embedding
/// failure aborts the build naming the chunk id.
VectorIndex index_build(const KnowledgeBase& kb, std::shared_ptr<EmbeddingBackend> backend);

/// Linear-scan retrieval under cfg. Deterministic: ties break by KB order.
RetrievalResult retrieve(const VectorIndex& index, const std::string& query_text,
                         const RetrieverConfig& cfg);

}  // namespace ragleak
