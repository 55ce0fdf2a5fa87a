#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mlrag/types.hpp"

namespace mlrag {

// Immutable multilingual passage collection, bucketed by language.
// Documents keep file order; ids are unique; empty-text documents are kept
// (they surface in stats and stay queryable by id) but are skipped at
// indexing time because they embed to the zero vector.
class Corpus {
public:
    static Corpus load_jsonl(const std::filesystem::path& path);

    const std::vector<Document>& docs() const { return docs_; }
    const Document* find(std::string_view id) const;

    // Sorted unique language codes present in the corpus.
    const std::vector<std::string>& languages() const { return languages_; }
    bool has_language(std::string_view lang) const;

    // Indices into docs() for one language, in file order. Unknown
    // languages yield an empty bucket.
    const std::vector<std::size_t>& bucket(std::string_view lang) const;

    std::size_t size() const { return docs_.size(); }
    std::size_t empty_text_count() const { return empty_text_; }

    // SHA-256 over the canonical serialization of all documents in file
    // order. Stable identity for index caching.
    const std::string& content_hash() const { return content_hash_; }

private:
    std::vector<Document> docs_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> buckets_;
    std::vector<std::string> languages_;
    std::size_t empty_text_ = 0;
    std::string content_hash_;
};

// Benchmark question set. Validates unique ids, non-empty lang/question,
// and at least one gold per query.
std::vector<QueryItem> load_queries(const std::filesystem::path& path);

} // namespace mlrag
