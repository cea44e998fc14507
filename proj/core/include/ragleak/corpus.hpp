#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ragleak {

struct Document {
    std::string id;           // file stem, unique within a corpus
    std::string text;         // UTF-8, non-empty after trimming
    std::string source_path;
};

struct ChunkingParams {
    std::size_t max_words = 1500;
    std::size_t overlap_words = 300;
    bool sentence_preserving = false;

    void validate() const;  // throws ArgumentError unless overlap_words < max_words > 0
};

/// Half-open word-index interval into the source document.
struct WordSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - start; }
    bool operator==(const WordSpan&) const = default;
};

struct Chunk {
    std::string id;       // "<doc_id>#<index>"
    std::string doc_id;
    std::size_t index = 0;
    std::string text;     // the span's words joined by single spaces
    WordSpan word_span;
};

struct KnowledgeBase {
    std::vector<Chunk> chunks;  // ordered by (doc_id insertion order, index)
    ChunkingParams params;

    const Chunk* find(const std::string& chunk_id) const;
    std::size_t size() const { return chunks.size(); }
};

/// Loads every regular file in dir_path as one Document, in lexicographic
/// filename order. id = file stem. Throws IngestionError / EncodingError.
std::vector<Document> load_corpus(const std::string& dir_path);

/// Sliding window over the document's words with stride
/// max_words - overlap_words. The last window may be shorter. With
/// sentence_preserving set, window edges retract to sentence boundaries,
/// which can shrink the realized overlap below overlap_words.
std::vector<Chunk> chunk_document(const Document& doc, const ChunkingParams& params);

/// Concatenation of per-document chunk lists, in document order.
KnowledgeBase kb_build(const std::vector<Document>& docs, const ChunkingParams& params);

}  // namespace ragleak
