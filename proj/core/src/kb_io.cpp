#include "ragleak/kb_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ragleak/errors.hpp"

namespace ragleak {

namespace {

nlohmann::ordered_json spec_to_json(const EmbeddingBackendSpec& spec) {
    nlohmann::ordered_json j;
    j["kind"] = spec.kind == EmbeddingKind::remote ? "remote" : "hashed-ngram-builtin";
    j["dimension"] = spec.dimension;
    j["hash_seed"] = spec.hash_seed;
    if (spec.remote) {
        j["remote"] = {{"url", spec.remote->url},
                       {"timeout_ms", spec.remote->timeout_ms},
                       {"max_retries", spec.remote->max_retries}};
    }
    return j;
}

EmbeddingBackendSpec spec_from_json(const nlohmann::json& j) {
    EmbeddingBackendSpec spec;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "remote") {
        spec.kind = EmbeddingKind::remote;
    } else if (kind == "hashed-ngram-builtin") {
        spec.kind = EmbeddingKind::hashed_ngram_builtin;
    } else {
        throw ConfigError("unknown embedding backend kind: " + kind);
    }
    spec.dimension = j.at("dimension").get<std::size_t>();
    if (j.contains("hash_seed")) spec.hash_seed = j["hash_seed"].get<std::uint64_t>();
    if (j.contains("remote")) {
        RemoteEndpoint ep;
        ep.url = j["remote"].at("url").get<std::string>();
        if (j["remote"].contains("timeout_ms")) ep.timeout_ms = j["remote"]["timeout_ms"].get<int>();
        if (j["remote"].contains("max_retries")) {
            ep.max_retries = j["remote"]["max_retries"].get<int>();
        }
        spec.remote = std::move(ep);
    }
    return spec;
}

}  // namespace

std::string kb_to_json(const KnowledgeBase& kb, const VectorIndex* index) {
    nlohmann::ordered_json doc;
    doc["params"] = {{"max_words", kb.params.max_words},
                     {"overlap_words", kb.params.overlap_words},
                     {"sentence_preserving", kb.params.sentence_preserving}};
    auto chunks = nlohmann::ordered_json::array();
    for (const auto& c : kb.chunks) {
        chunks.push_back({{"id", c.id},
                          {"doc_id", c.doc_id},
                          {"index", c.index},
                          {"text", c.text},
                          {"word_span", {c.word_span.start, c.word_span.end}}});
    }
    doc["chunks"] = std::move(chunks);
    if (index) {
        if (index->size() != kb.chunks.size()) {
            throw ArgumentError("kb_to_json: index size does not match the knowledge base");
        }
        nlohmann::ordered_json emb;
        emb["backend"] = spec_to_json(index->backend_spec());
        auto vectors = nlohmann::ordered_json::array();
        for (const auto& [id, vec] : index->entries()) vectors.push_back(vec.values);
        emb["vectors"] = std::move(vectors);
        doc["embedding"] = std::move(emb);
    }
    return doc.dump(2) + "\n";
}

void save_kb(const KnowledgeBase& kb, const std::string& path, const VectorIndex* index) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError("cannot write KB file: " + path);
    out << kb_to_json(kb, index);
    if (!out) throw IngestionError("write failure: " + path);
}

StoredKb load_kb_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("KB file is not valid JSON: ") + e.what());
    }
    StoredKb stored;
    const auto& params = doc.at("params");
    stored.kb.params.max_words = params.at("max_words").get<std::size_t>();
    stored.kb.params.overlap_words = params.at("overlap_words").get<std::size_t>();
    stored.kb.params.sentence_preserving = params.value("sentence_preserving", false);
    stored.kb.params.validate();

    for (const auto& item : doc.at("chunks")) {
        Chunk c;
        c.id = item.at("id").get<std::string>();
        c.doc_id = item.at("doc_id").get<std::string>();
        c.index = item.at("index").get<std::size_t>();
        c.text = item.at("text").get<std::string>();
        const auto& span = item.at("word_span");
        c.word_span = WordSpan{span.at(0).get<std::size_t>(), span.at(1).get<std::size_t>()};
        stored.kb.chunks.push_back(std::move(c));
    }
    if (stored.kb.chunks.empty()) throw ConfigError("KB file contains no chunks");

    if (doc.contains("embedding")) {
        stored.embedding_spec = spec_from_json(doc["embedding"].at("backend"));
        for (const auto& arr : doc["embedding"].at("vectors")) {
            EmbeddingVector v;
            v.values = arr.get<std::vector<double>>();
            v.normalized = true;
            stored.vectors.push_back(std::move(v));
        }
        if (stored.vectors.size() != stored.kb.chunks.size()) {
            throw ConfigError("KB file: vector count does not match chunk count");
        }
    }
    return stored;
}

StoredKb load_kb(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open KB file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_kb_json(buf.str());
}

VectorIndex index_from_stored(const StoredKb& stored, std::shared_ptr<EmbeddingBackend> backend) {
    if (stored.embedding_spec && !stored.vectors.empty() &&
        *stored.embedding_spec == backend->spec()) {
        std::vector<std::pair<std::string, EmbeddingVector>> entries;
        entries.reserve(stored.kb.chunks.size());
        for (std::size_t i = 0; i < stored.kb.chunks.size(); ++i) {
            entries.emplace_back(stored.kb.chunks[i].id, stored.vectors[i]);
        }
        return VectorIndex(std::move(entries), std::move(backend));
    }
    return index_build(stored.kb, std::move(backend));
}

}  // namespace ragleak
