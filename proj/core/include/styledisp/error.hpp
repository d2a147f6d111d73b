#pragma once

#include <stdexcept>
#include <string>

namespace styledisp {

// Base of every error raised by the library. Messages are meant for humans
// and name the offending record, field or parameter.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data: manifests, embedding files, annotation files.
class DataError : public Error {
public:
    using Error::Error;
};

// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Run configuration problems (schema, unresolved paths, missing credentials).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Failure reported by a remote provider (chat completion or embeddings).
class ProviderError : public Error {
public:
    enum class Kind { RateLimit, Transient, Fatal };

    ProviderError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const { return kind_; }
    bool retryable() const { return kind_ != Kind::Fatal; }

private:
    Kind kind_;
};

}  // namespace styledisp
