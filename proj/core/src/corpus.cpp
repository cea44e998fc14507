#include "ragleak/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "ragleak/errors.hpp"
#include "ragleak/text.hpp"

namespace fs = std::filesystem;

namespace ragleak {

void ChunkingParams::validate() const {
    if (max_words == 0) throw ArgumentError("chunking: max_words must be positive");
    if (overlap_words >= max_words) {
        throw ArgumentError("chunking: overlap_words (" + std::to_string(overlap_words) +
                            ") must be smaller than max_words (" + std::to_string(max_words) + ")");
    }
}

const Chunk* KnowledgeBase::find(const std::string& chunk_id) const {
    for (const auto& c : chunks) {
        if (c.id == chunk_id) return &c;
    }
    return nullptr;
}

std::vector<Document> load_corpus(const std::string& dir_path) {
    if (!fs::is_directory(dir_path)) {
        throw IngestionError("corpus directory does not exist: " + dir_path);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir_path)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IngestionError("unreadable file: " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad()) throw IngestionError("read failure: " + path.string());
        std::string text = buf.str();
        if (!is_valid_utf8(text)) {
            throw EncodingError("file is not valid UTF-8: " + path.string());
        }
        if (trim(text).empty()) {
            throw IngestionError("empty document: " + path.string());
        }
        docs.push_back(Document{path.stem().string(), std::move(text), path.string()});
    }
    return docs;
}

namespace {

// First index in [lo, hi] that starts a sentence (the preceding word ends
// one), or npos.
std::size_t first_sentence_start(const std::vector<std::string_view>& words,
                                 std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i <= hi && i <= words.size(); ++i) {
        if (i == 0) return 0;
        if (ends_sentence(words[i - 1])) return i;
    }
    return std::string::npos;
}

// Last index in [lo, hi] such that words[idx - 1] ends a sentence, or npos.
std::size_t last_sentence_end(const std::vector<std::string_view>& words,
                              std::size_t lo, std::size_t hi) {
    for (std::size_t i = std::min(hi, words.size()); i > lo; --i) {
        if (ends_sentence(words[i - 1])) return i;
    }
    return std::string::npos;
}

}  // namespace

std::vector<Chunk> chunk_document(const Document& doc, const ChunkingParams& params) {
    params.validate();
    const auto words = split_words(doc.text);
    const std::size_t n = words.size();
    if (n == 0) throw ArgumentError("chunk_document: document has no words: " + doc.id);

    std::vector<Chunk> chunks;
    std::size_t start = 0;
    std::size_t index = 0;
    while (true) {
        std::size_t end = std::min(start + params.max_words, n);
        const bool final_chunk = (start + params.max_words >= n);
        if (params.sentence_preserving && !final_chunk) {
            // Retract the end to a sentence boundary, keeping the stride positive.
            std::size_t e = last_sentence_end(words, start + params.overlap_words + 1, end);
            if (e != std::string::npos) end = e;
        }
        Chunk chunk;
        chunk.doc_id = doc.id;
        chunk.index = index;
        chunk.id = doc.id + "#" + std::to_string(index);
        chunk.word_span = WordSpan{start, end};
        chunk.text = join_words(words, start, end);
        chunks.push_back(std::move(chunk));
        if (end >= n) break;

        std::size_t next = end - params.overlap_words;
        if (params.sentence_preserving) {
            // Retract the start forward so the overlap begins on a sentence.
            std::size_t s = first_sentence_start(words, next, end);
            if (s != std::string::npos && s <= end) next = s;
        }
        start = next;
        ++index;
    }
    return chunks;
}

KnowledgeBase kb_build(const std::vector<Document>& docs, const ChunkingParams& params) {
    params.validate();
    if (docs.empty()) throw ArgumentError("kb_build: no documents");

    std::unordered_map<std::string, int> seen_ids;
    KnowledgeBase kb;
    kb.params = params;
    for (const auto& doc : docs) {
        if (++seen_ids[doc.id] > 1) {
            throw ArgumentError("kb_build: duplicate document id: " + doc.id);
        }
        auto chunks = chunk_document(doc, params);
        kb.chunks.insert(kb.chunks.end(), std::make_move_iterator(chunks.begin()),
                         std::make_move_iterator(chunks.end()));
    }
    return kb;
}

}  // namespace ragleak
