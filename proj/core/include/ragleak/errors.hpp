#pragma once

#include <stdexcept>
#include <string>

namespace ragleak {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument or precondition violation.
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(what) {}
};

/// Corpus ingestion failure (unreadable file, empty document, ...).
class IngestionError : public Error {
public:
    explicit IngestionError(const std::string& what) : Error(what) {}
};

/// Input bytes are not valid UTF-8.
class EncodingError : public IngestionError {
public:
    explicit EncodingError(const std::string& what) : IngestionError(what) {}
};

/// Config file or flag validation failure.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Remote backend failure after the configured number of retries.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int http_status, int retries)
        : Error(what), http_status_(http_status), retries_(retries) {}

    int http_status() const { return http_status_; }
    int retries() const { return retries_; }

private:
    int http_status_ = 0;
    int retries_ = 0;
};

/// Broken internal invariant (e.g., a retrieval hit that resolves to no chunk).
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace ragleak
