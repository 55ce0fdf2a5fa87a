#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "mlrag/corpus.hpp"
#include "mlrag/embedding.hpp"
#include "mlrag/index.hpp"

namespace mlrag {

// Which language buckets a retrieval touches, relative to the query
// language: the query's own language, English, both, or every bucket the
// corpus has.
enum class Scope { SL, EN, EN_PLUS_SL, ALL };

Scope parse_scope(std::string_view s);          // "sl" "en" "en+sl" "all"
std::string_view to_string(Scope scope);

// Concrete sorted language list for one query. Requested languages missing
// from the corpus raise DataError naming them; ALL never fails.
std::vector<std::string> resolve_scope(Scope scope, const std::string& query_lang,
                                       const Corpus& corpus);

struct RetrievedDoc {
    std::string doc_id;
    std::string lang;
    double score;
    int rank;  // 1-based position in the result list
};

// Embeds queries, maintains one index per language-scope, and serves
// ranked lookups. Index construction is memoized in memory and, when a
// cache directory is configured, snapshotted on disk keyed by corpus
// content, embedder identity and scope.
class Retriever {
public:
    struct Options {
        std::filesystem::path index_cache_dir;  // empty: in-memory only
    };

    Retriever(const Corpus& corpus, std::shared_ptr<const Embedder> embedder,
              Options options = {});

    std::vector<RetrievedDoc> retrieve(std::string_view query_text,
                                       const std::vector<std::string>& langs,
                                       std::size_t k);

    // Second-pass scoring of an existing result list against the full
    // document text, truncated to k2 with ranks reassigned. With the same
    // embedder as first-pass retrieval this is order-preserving.
    std::vector<RetrievedDoc> rerank(std::string_view query_text,
                                     const std::vector<RetrievedDoc>& hits,
                                     std::size_t k2) const;

    const VectorIndex& index_for(const std::vector<std::string>& langs);

    const Corpus& corpus() const { return corpus_; }
    const Embedder& embedder() const { return *embedder_; }

private:
    std::string scope_key(const std::vector<std::string>& langs) const;
    std::shared_ptr<const VectorIndex> get_or_build(const std::vector<std::string>& langs);

    const Corpus& corpus_;
    std::shared_ptr<const Embedder> embedder_;
    Options options_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const VectorIndex>> indexes_;
};

} // namespace mlrag
