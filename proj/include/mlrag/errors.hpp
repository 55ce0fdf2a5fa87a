#pragma once

#include <stdexcept>
#include <string>

namespace mlrag {

// Error taxonomy used across the library. The CLI maps each class to a
// distinct process exit code, so throw the most specific one that applies.
//   UsageError    -> bad flags, bad config, caller misuse        (exit 1)
//   DataError     -> malformed corpora, queries, fixtures, caches (exit 2)
//   ProviderError -> embedding/translation/LLM calls that failed  (exit 3)

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ProviderError : public std::runtime_error {
public:
    explicit ProviderError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mlrag
