#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mlrag {

// Exact brute-force vector index over document embeddings. Entries keep
// insertion order; search is a full scan with a total ordering of (score
// descending, doc id ascending), which makes result lists deterministic
// and gives top-k lists the prefix property.
class VectorIndex {
public:
    struct Entry {
        std::string doc_id;
        std::string lang;
        std::vector<double> vec;
    };

    struct Hit {
        std::string doc_id;
        std::string lang;
        double score;
    };

    VectorIndex(std::string embedder_id, std::size_t dim, std::vector<std::string> langs);

    // Rejects dimension mismatches and zero vectors; callers filter
    // non-indexable documents before adding.
    void add(std::string doc_id, std::string lang, std::vector<double> vec);

    std::vector<Hit> search(const std::vector<double>& query, std::size_t k) const;

    std::size_t size() const { return entries_.size(); }
    std::size_t dim() const { return dim_; }
    const std::string& embedder_id() const { return embedder_id_; }
    const std::vector<std::string>& langs() const { return langs_; }
    const std::vector<Entry>& entries() const { return entries_; }

    // Versioned binary snapshot. Vectors round-trip bit-exactly, so a
    // reloaded index returns byte-identical search results.
    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

private:
    std::string embedder_id_;
    std::size_t dim_;
    std::vector<std::string> langs_;
    std::vector<Entry> entries_;
};

} // namespace mlrag
