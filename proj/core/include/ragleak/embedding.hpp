#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ragleak {

struct EmbeddingVector {
    std::vector<double> values;
    bool normalized = false;

    std::size_t dimension() const { return values.size(); }
};

enum class EmbeddingKind {
    hashed_ngram_builtin,
    remote,
};

struct RemoteEndpoint {
    std::string url;             // e.g. "http://127.0.0.1:8080/embed"
    std::string auth_token;      // sent as "Authorization: Bearer <token>" when non-empty
    int timeout_ms = 10000;
    int max_retries = 2;

    bool operator==(const RemoteEndpoint&) const = default;
};

struct EmbeddingBackendSpec {
    EmbeddingKind kind = EmbeddingKind::hashed_ngram_builtin;
    std::size_t dimension = 256;
    std::uint64_t hash_seed = 0x5EED;
    std::optional<RemoteEndpoint> remote;

    void validate() const;
    bool operator==(const EmbeddingBackendSpec&) const = default;
};

/// Text-to-vector encoder. Implementations must be safe for concurrent
/// embed() calls unless documented otherwise.
class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual EmbeddingVector embed(const std::string& text) const = 0;
    virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const;
    virtual std::size_t dimension() const = 0;
    virtual const EmbeddingBackendSpec& spec() const = 0;
};

/// Deterministic builtin: lowercase the text, take word unigrams and
/// bigrams, hash each feature to a signed bucket, accumulate counts and
/// L2-normalize. A pure function of (text, dimension, hash_seed).
class HashedNgramEmbedder final : public EmbeddingBackend {
public:
    explicit HashedNgramEmbedder(std::size_t dimension = 256, std::uint64_t hash_seed = 0x5EED);
    explicit HashedNgramEmbedder(const EmbeddingBackendSpec& spec);

    EmbeddingVector embed(const std::string& text) const override;
    std::size_t dimension() const override { return spec_.dimension; }
    const EmbeddingBackendSpec& spec() const override { return spec_; }

private:
    EmbeddingBackendSpec spec_;
};

/// HTTP client for a remote embedding service.
/// Wire format: POST <url> with body {"texts": ["..."]} and response
/// {"vectors": [[...]]}. Retries on transport failure and 5xx.
class RemoteEmbedder final : public EmbeddingBackend {
public:
    explicit RemoteEmbedder(const EmbeddingBackendSpec& spec);

    EmbeddingVector embed(const std::string& text) const override;
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const override;
    std::size_t dimension() const override { return spec_.dimension; }
    const EmbeddingBackendSpec& spec() const override { return spec_; }

private:
    EmbeddingBackendSpec spec_;
};

std::shared_ptr<EmbeddingBackend> make_embedding_backend(const EmbeddingBackendSpec& spec);

/// Eq. of semantic similarity: dot(a,b) / (|a| * |b|), clamped to [-1, 1].
/// Throws ArgumentError on dimension mismatch or a zero vector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace ragleak
