#include "ragleak/embedding.hpp"

#include <algorithm>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ragleak/errors.hpp"
#include "ragleak/hash.hpp"
#include "ragleak/text.hpp"

namespace ragleak {

void EmbeddingBackendSpec::validate() const {
    if (dimension == 0) throw ArgumentError("embedding: dimension must be positive");
    if (kind == EmbeddingKind::remote && (!remote || remote->url.empty())) {
        throw ArgumentError("embedding: remote backend requires an endpoint url");
    }
}

std::vector<EmbeddingVector> EmbeddingBackend::embed_batch(const std::vector<std::string>& texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t));
    return out;
}

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dimension, std::uint64_t hash_seed) {
    spec_.kind = EmbeddingKind::hashed_ngram_builtin;
    spec_.dimension = dimension;
    spec_.hash_seed = hash_seed;
    spec_.validate();
}

HashedNgramEmbedder::HashedNgramEmbedder(const EmbeddingBackendSpec& spec) : spec_(spec) {
    spec_.validate();
}

EmbeddingVector HashedNgramEmbedder::embed(const std::string& text) const {
    if (trim(text).empty()) throw ArgumentError("embed: text is empty");

    const std::string lowered = to_lower(text);
    const auto words = split_words(lowered);
    const std::size_t dim = spec_.dimension;
    std::vector<double> acc(dim, 0.0);

    // Two fixed sub-seeds: one picks the bucket, the other the sign.
    const std::uint64_t bucket_seed = fnv1a64_mix(kFnvOffset, spec_.hash_seed);
    const std::uint64_t sign_seed = fnv1a64_mix(kFnvOffset, ~spec_.hash_seed);
    auto add_feature = [&](std::string_view a, std::string_view b) {
        std::uint64_t hb = fnv1a64(a, bucket_seed);
        std::uint64_t hs = fnv1a64(a, sign_seed);
        if (!b.empty()) {
            hb = fnv1a64_mix(hb, 0x1f);
            hb = fnv1a64(b, hb);
            hs = fnv1a64_mix(hs, 0x1f);
            hs = fnv1a64(b, hs);
        }
        acc[hb % dim] += (hs & 1) ? 1.0 : -1.0;
    };

    for (std::size_t i = 0; i < words.size(); ++i) {
        add_feature(words[i], {});
        if (i + 1 < words.size()) add_feature(words[i], words[i + 1]);
    }

    double norm_sq = 0.0;
    for (double v : acc) norm_sq += v * v;
    EmbeddingVector vec{std::move(acc), false};
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : vec.values) v *= inv;
        vec.normalized = true;
    }
    return vec;
}

namespace {

nlohmann::json post_json_with_retries(const RemoteEndpoint& ep, const std::string& path_url,
                                      const nlohmann::json& body) {
    // Split "http://host:port/path".
    std::string url = path_url;
    std::string scheme_host;
    std::string path = "/";
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ArgumentError("remote url has no scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        scheme_host = url;
    } else {
        scheme_host = url.substr(0, path_start);
        path = url.substr(path_start);
    }

    const std::string payload = body.dump();
    int last_status = 0;
    std::string last_error = "connection failed";
    for (int attempt = 0; attempt <= ep.max_retries; ++attempt) {
        httplib::Client client(scheme_host);
        client.set_connection_timeout(0, ep.timeout_ms * 1000);
        client.set_read_timeout(ep.timeout_ms / 1000, (ep.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (!ep.auth_token.empty()) headers.emplace("Authorization", "Bearer " + ep.auth_token);
        auto res = client.Post(path, headers, payload, "application/json");
        if (res && res->status >= 200 && res->status < 300) {
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw TransportError(std::string("remote returned unparseable JSON: ") + e.what(),
                                     res->status, attempt);
            }
        }
        if (res) {
            last_status = res->status;
            last_error = "HTTP " + std::to_string(res->status);
            if (res->status >= 400 && res->status < 500) break;  // no point retrying client errors
        }
    }
    throw TransportError("remote request to " + url + " failed after retries: " + last_error,
                         last_status, ep.max_retries);
}

}  // namespace

RemoteEmbedder::RemoteEmbedder(const EmbeddingBackendSpec& spec) : spec_(spec) {
    spec_.validate();
    if (spec_.kind != EmbeddingKind::remote) {
        throw ArgumentError("RemoteEmbedder requires kind=remote");
    }
}

EmbeddingVector RemoteEmbedder::embed(const std::string& text) const {
    return embed_batch({text}).at(0);
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) const {
    for (const auto& t : texts) {
        if (trim(t).empty()) throw ArgumentError("embed: text is empty");
    }
    nlohmann::json body;
    body["texts"] = texts;
    auto reply = post_json_with_retries(*spec_.remote, spec_.remote->url, body);
    if (!reply.contains("vectors") || !reply["vectors"].is_array()) {
        throw TransportError("remote embedding reply missing 'vectors'", 200, 0);
    }
    std::vector<EmbeddingVector> out;
    for (const auto& arr : reply["vectors"]) {
        EmbeddingVector v;
        v.values = arr.get<std::vector<double>>();
        if (v.values.size() != spec_.dimension) {
            throw TransportError("remote embedding dimension mismatch: got " +
                                     std::to_string(v.values.size()) + ", expected " +
                                     std::to_string(spec_.dimension),
                                 200, 0);
        }
        out.push_back(std::move(v));
    }
    if (out.size() != texts.size()) {
        throw TransportError("remote embedding count mismatch", 200, 0);
    }
    return out;
}

std::shared_ptr<EmbeddingBackend> make_embedding_backend(const EmbeddingBackendSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case EmbeddingKind::hashed_ngram_builtin:
            return std::make_shared<HashedNgramEmbedder>(spec);
        case EmbeddingKind::remote:
            return std::make_shared<RemoteEmbedder>(spec);
    }
    throw ArgumentError("unknown embedding backend kind");
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw ArgumentError("cosine_similarity: dimension mismatch (" +
                            std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()) + ")");
    }
    if (a.dimension() == 0) throw ArgumentError("cosine_similarity: empty vectors");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) throw ArgumentError("cosine_similarity: zero vector");
    return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace ragleak
