#pragma once

#include <stdexcept>
#include <string>

namespace lmchunk {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Document text is empty or whitespace-only after normalization.
class EmptyDocumentError : public Error {
public:
    using Error::Error;
};

// Remote provider failed (network/HTTP) and the retry budget is exhausted.
class ProviderUnavailable : public Error {
public:
    using Error::Error;
};

// The provider rejected the request for length even after context eviction.
// Callers may respond by shrinking the context further.
class ContextOverflow : public Error {
public:
    using Error::Error;
};

// A remote provider could not score a choice string as a continuation.
class ChoiceTokenizationError : public Error {
public:
    using Error::Error;
};

// Dynamic overlap was requested without a perplexity trace.
class MissingTraceError : public Error {
public:
    using Error::Error;
};

// Sequence too short for the requested n-gram statistic.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace lmchunk
