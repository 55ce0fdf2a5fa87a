#include "mlrag/retrieval.hpp"

#include <algorithm>

#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"
#include "mlrag/log.hpp"

namespace mlrag {

Scope parse_scope(std::string_view s) {
    if (s == "sl") return Scope::SL;
    if (s == "en") return Scope::EN;
    if (s == "en+sl") return Scope::EN_PLUS_SL;
    if (s == "all") return Scope::ALL;
    throw UsageError("unknown scope '" + std::string(s) + "' (expected sl, en, en+sl, all)");
}

std::string_view to_string(Scope scope) {
    switch (scope) {
        case Scope::SL: return "sl";
        case Scope::EN: return "en";
        case Scope::EN_PLUS_SL: return "en+sl";
        case Scope::ALL: return "all";
    }
    return "?";
}

std::vector<std::string> resolve_scope(Scope scope, const std::string& query_lang,
                                       const Corpus& corpus) {
    std::vector<std::string> requested;
    switch (scope) {
        case Scope::SL:
            requested = {query_lang};
            break;
        case Scope::EN:
            requested = {"en"};
            break;
        case Scope::EN_PLUS_SL:
            requested = {"en", query_lang};
            break;
        case Scope::ALL:
            return corpus.languages();
    }
    std::sort(requested.begin(), requested.end());
    requested.erase(std::unique(requested.begin(), requested.end()), requested.end());
    std::vector<std::string> missing;
    for (const auto& lang : requested) {
        if (!corpus.has_language(lang)) {
            missing.push_back(lang);
        }
    }
    if (!missing.empty()) {
        std::string msg = "scope '" + std::string(to_string(scope)) +
                          "' needs language bucket(s) absent from corpus:";
        for (const auto& lang : missing) {
            msg += " " + lang;
        }
        throw DataError(msg);
    }
    return requested;
}

Retriever::Retriever(const Corpus& corpus, std::shared_ptr<const Embedder> embedder,
                     Options options)
    : corpus_(corpus), embedder_(std::move(embedder)), options_(std::move(options)) {
    if (!embedder_) {
        throw UsageError("retriever needs an embedder");
    }
}

std::string Retriever::scope_key(const std::vector<std::string>& langs) const {
    std::vector<std::string> sorted = langs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::string key = corpus_.content_hash() + "|" + embedder_->id() + "|" +
                      std::to_string(embedder_->dim());
    for (const auto& lang : sorted) {
        key += "|" + lang;
    }
    return key;
}

std::shared_ptr<const VectorIndex> Retriever::get_or_build(
    const std::vector<std::string>& langs) {
    const std::string key = scope_key(langs);
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = indexes_.find(key); it != indexes_.end()) {
        return it->second;
    }

    std::filesystem::path snapshot;
    if (!options_.index_cache_dir.empty()) {
        snapshot = options_.index_cache_dir / (sha256_hex(key) + ".idx");
        if (std::filesystem::exists(snapshot)) {
            auto idx = std::make_shared<VectorIndex>(VectorIndex::load(snapshot));
            if (idx->embedder_id() != embedder_->id() || idx->dim() != embedder_->dim()) {
                throw DataError(snapshot.string() + ": snapshot embedder mismatch");
            }
            log_debug("index.loaded", {{"path", snapshot.string()},
                                       {"entries", std::to_string(idx->size())}});
            indexes_[key] = idx;
            return idx;
        }
    }

    std::vector<std::string> sorted = langs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    auto idx = std::make_shared<VectorIndex>(embedder_->id(), embedder_->dim(), sorted);
    std::size_t skipped = 0;
    for (const auto& lang : idx->langs()) {
        for (std::size_t doc_i : corpus_.bucket(lang)) {
            const Document& d = corpus_.docs()[doc_i];
            std::vector<double> vec = embedder_->embed(d.text);
            if (is_zero_vector(vec)) {
                ++skipped;
                continue;
            }
            idx->add(d.id, d.lang, std::move(vec));
        }
    }
    log_debug("index.built", {{"langs", std::to_string(idx->langs().size())},
                              {"entries", std::to_string(idx->size())},
                              {"skipped_empty", std::to_string(skipped)}});
    if (!snapshot.empty()) {
        idx->save(snapshot);
    }
    indexes_[key] = idx;
    return idx;
}

const VectorIndex& Retriever::index_for(const std::vector<std::string>& langs) {
    // The shared_ptr stays alive in indexes_; references remain valid for
    // the retriever's lifetime.
    return *get_or_build(langs);
}

std::vector<RetrievedDoc> Retriever::retrieve(std::string_view query_text,
                                              const std::vector<std::string>& langs,
                                              std::size_t k) {
    auto idx = get_or_build(langs);
    const std::vector<double> qvec = embedder_->embed(query_text);
    std::vector<RetrievedDoc> out;
    if (is_zero_vector(qvec)) {
        // Nothing to match against; an empty query retrieves nothing.
        return out;
    }
    const auto hits = idx->search(qvec, k);
    out.reserve(hits.size());
    int rank = 1;
    for (const auto& h : hits) {
        out.push_back(RetrievedDoc{h.doc_id, h.lang, h.score, rank++});
    }
    return out;
}

std::vector<RetrievedDoc> Retriever::rerank(std::string_view query_text,
                                            const std::vector<RetrievedDoc>& hits,
                                            std::size_t k2) const {
    const std::vector<double> qvec = embedder_->embed(query_text);
    std::vector<RetrievedDoc> rescored;
    rescored.reserve(hits.size());
    for (const auto& h : hits) {
        const Document* doc = corpus_.find(h.doc_id);
        if (doc == nullptr) {
            throw DataError("rerank: unknown document id '" + h.doc_id + "'");
        }
        RetrievedDoc r = h;
        r.score = dot(qvec, embedder_->embed(doc->text));
        rescored.push_back(std::move(r));
    }
    std::stable_sort(rescored.begin(), rescored.end(),
                     [](const RetrievedDoc& a, const RetrievedDoc& b) {
                         if (a.score != b.score) {
                             return a.score > b.score;
                         }
                         return a.doc_id < b.doc_id;
                     });
    if (rescored.size() > k2) {
        rescored.resize(k2);
    }
    int rank = 1;
    for (auto& r : rescored) {
        r.rank = rank++;
    }
    return rescored;
}

} // namespace mlrag
