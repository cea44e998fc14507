#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ragleak/corpus.hpp"
#include "ragleak/embedding.hpp"
#include "ragleak/retrieval.hpp"

namespace ragleak {

struct StoredKb {
    KnowledgeBase kb;
    std::optional<EmbeddingBackendSpec> embedding_spec;
    std::vector<EmbeddingVector> vectors;  // parallel to kb.chunks when present
};

/// KB JSON document: {params, chunks:[{id, doc_id, index, text,
/// word_span:[start,end]}], embedding?:{backend, vectors}}.
std::string kb_to_json(const KnowledgeBase& kb, const VectorIndex* index = nullptr);
void save_kb(const KnowledgeBase& kb, const std::string& path, const VectorIndex* index = nullptr);

StoredKb load_kb_json(const std::string& json_text);
StoredKb load_kb(const std::string& path);

/// Rebuilds an index from stored vectors when their backend spec matches,
/// re-embedding otherwise.
VectorIndex index_from_stored(const StoredKb& stored, std::shared_ptr<EmbeddingBackend> backend);

}  // namespace ragleak
