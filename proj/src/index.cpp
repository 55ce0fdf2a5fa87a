#include "mlrag/index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>

#include "mlrag/embedding.hpp"
#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"

namespace mlrag {

namespace {

constexpr char kMagic[7] = {'M', 'L', 'R', 'G', 'I', 'D', 'X'};
constexpr unsigned char kVersion = 1;

// Explicit little-endian packing keeps snapshots portable.
void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

void put_f64(std::string& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

class Reader {
public:
    Reader(const std::string& buf, std::string name)
        : buf_(buf), name_(std::move(name)) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) {
            v = (v << 8) | static_cast<unsigned char>(buf_[pos_ + static_cast<std::size_t>(i)]);
        }
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) {
            v = (v << 8) | static_cast<unsigned char>(buf_[pos_ + static_cast<std::size_t>(i)]);
        }
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string str() {
        const std::uint32_t len = u32();
        need(len);
        std::string s = buf_.substr(pos_, len);
        pos_ += len;
        return s;
    }

    void raw(void* dst, std::size_t n) {
        need(n);
        std::memcpy(dst, buf_.data() + pos_, n);
        pos_ += n;
    }

    bool done() const { return pos_ == buf_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > buf_.size()) {
            throw DataError(name_ + ": truncated index snapshot");
        }
    }

    const std::string& buf_;
    std::string name_;
    std::size_t pos_ = 0;
};

} // namespace

VectorIndex::VectorIndex(std::string embedder_id, std::size_t dim,
                         std::vector<std::string> langs)
    : embedder_id_(std::move(embedder_id)), dim_(dim), langs_(std::move(langs)) {
    if (dim_ == 0) {
        throw UsageError("index dimension must be positive");
    }
    std::sort(langs_.begin(), langs_.end());
    langs_.erase(std::unique(langs_.begin(), langs_.end()), langs_.end());
}

void VectorIndex::add(std::string doc_id, std::string lang, std::vector<double> vec) {
    if (vec.size() != dim_) {
        throw UsageError("vector dimension mismatch for document '" + doc_id + "'");
    }
    if (is_zero_vector(vec)) {
        throw UsageError("zero vector for document '" + doc_id + "' is not indexable");
    }
    entries_.push_back(Entry{std::move(doc_id), std::move(lang), std::move(vec)});
}

std::vector<VectorIndex::Hit> VectorIndex::search(const std::vector<double>& query,
                                                  std::size_t k) const {
    if (query.size() != dim_) {
        throw UsageError("query vector dimension mismatch");
    }
    std::vector<std::size_t> order(entries_.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> scores(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        scores[i] = dot(query, entries_[i].vec);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return entries_[a].doc_id < entries_[b].doc_id;
    });
    const std::size_t n = std::min(k, order.size());
    std::vector<Hit> hits;
    hits.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Entry& e = entries_[order[i]];
        hits.push_back(Hit{e.doc_id, e.lang, scores[order[i]]});
    }
    return hits;
}

void VectorIndex::save(const std::filesystem::path& path) const {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    out.push_back(static_cast<char>(kVersion));
    put_u32(out, static_cast<std::uint32_t>(dim_));
    put_str(out, embedder_id_);
    put_u32(out, static_cast<std::uint32_t>(langs_.size()));
    for (const auto& lang : langs_) {
        put_str(out, lang);
    }
    put_u64(out, entries_.size());
    for (const Entry& e : entries_) {
        put_str(out, e.doc_id);
        put_str(out, e.lang);
        for (double v : e.vec) {
            put_f64(out, v);
        }
    }
    write_file_atomic(path, out);
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    const std::string buf = read_file(path);
    if (buf.size() < sizeof(kMagic) + 1 ||
        std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
        throw DataError(path.string() + ": not an index snapshot");
    }
    if (static_cast<unsigned char>(buf[sizeof(kMagic)]) != kVersion) {
        throw DataError(path.string() + ": unsupported index snapshot version");
    }
    Reader r(buf, path.string());
    char magic[sizeof(kMagic) + 1];
    r.raw(magic, sizeof(kMagic) + 1);
    const std::uint32_t dim = r.u32();
    const std::string embedder_id = r.str();
    const std::uint32_t n_langs = r.u32();
    std::vector<std::string> langs;
    langs.reserve(n_langs);
    for (std::uint32_t i = 0; i < n_langs; ++i) {
        langs.push_back(r.str());
    }
    VectorIndex idx(embedder_id, dim, std::move(langs));
    const std::uint64_t n_entries = r.u64();
    for (std::uint64_t i = 0; i < n_entries; ++i) {
        Entry e;
        e.doc_id = r.str();
        e.lang = r.str();
        e.vec.resize(dim);
        for (std::uint32_t d = 0; d < dim; ++d) {
            e.vec[d] = r.f64();
        }
        idx.entries_.push_back(std::move(e));
    }
    if (!r.done()) {
        throw DataError(path.string() + ": trailing bytes in index snapshot");
    }
    return idx;
}

} // namespace mlrag
