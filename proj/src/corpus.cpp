#include "mlrag/corpus.hpp"

#include <algorithm>

#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"
#include "mlrag/log.hpp"
#include "mlrag/textnorm.hpp"

namespace mlrag {

namespace {

std::string field_or_empty(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return {};
    }
    if (!it->is_string()) {
        throw DataError(std::string("field '") + key + "' must be a string");
    }
    return it->get<std::string>();
}

std::string require_field(const json& j, const char* key, const std::string& where) {
    const std::string v = field_or_empty(j, key);
    if (v.empty()) {
        throw DataError(where + ": missing or empty '" + key + "'");
    }
    return v;
}

} // namespace

Corpus Corpus::load_jsonl(const std::filesystem::path& path) {
    Corpus c;
    std::string hash_input;
    for_each_jsonl(path, [&](std::size_t line_no, const json& j) {
        const std::string where = path.string() + ":" + std::to_string(line_no);
        Document d;
        d.id = require_field(j, "id", where);
        d.lang = require_field(j, "lang", where);
        d.title = field_or_empty(j, "title");
        d.text = field_or_empty(j, "text");
        d.source = field_or_empty(j, "source");
        if (!c.by_id_.emplace(d.id, c.docs_.size()).second) {
            throw DataError(where + ": duplicate document id '" + d.id + "'");
        }
        if (trim(d.text).empty()) {
            ++c.empty_text_;
        }
        json canon = {{"id", d.id}, {"lang", d.lang}, {"title", d.title},
                      {"text", d.text}, {"source", d.source}};
        hash_input += canonical_json(canon);
        hash_input += '\n';
        c.buckets_[d.lang].push_back(c.docs_.size());
        c.docs_.push_back(std::move(d));
    });
    if (c.docs_.empty()) {
        throw DataError(path.string() + ": corpus has no documents");
    }
    for (const auto& [lang, ids] : c.buckets_) {
        c.languages_.push_back(lang);
        if (!known_language(lang)) {
            log_warn("corpus.unknown_language", {{"lang", lang}});
        }
    }
    c.content_hash_ = sha256_hex(hash_input);
    log_info("corpus.loaded", {{"path", path.string()},
                               {"docs", std::to_string(c.docs_.size())},
                               {"languages", std::to_string(c.languages_.size())},
                               {"empty_text", std::to_string(c.empty_text_)}});
    return c;
}

const Document* Corpus::find(std::string_view id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

bool Corpus::has_language(std::string_view lang) const {
    return buckets_.find(lang) != buckets_.end();
}

const std::vector<std::size_t>& Corpus::bucket(std::string_view lang) const {
    static const std::vector<std::size_t> empty;
    auto it = buckets_.find(lang);
    return it == buckets_.end() ? empty : it->second;
}

std::vector<QueryItem> load_queries(const std::filesystem::path& path) {
    std::vector<QueryItem> out;
    std::map<std::string, std::size_t> seen;
    for_each_jsonl(path, [&](std::size_t line_no, const json& j) {
        const std::string where = path.string() + ":" + std::to_string(line_no);
        QueryItem q;
        q.id = require_field(j, "id", where);
        q.lang = require_field(j, "lang", where);
        q.question = require_field(j, "question", where);
        auto it = j.find("golds");
        if (it == j.end() || !it->is_array() || it->empty()) {
            throw DataError(where + ": 'golds' must be a non-empty array");
        }
        for (const auto& g : *it) {
            if (!g.is_string()) {
                throw DataError(where + ": gold answers must be strings");
            }
            q.golds.push_back(g.get<std::string>());
        }
        if (!seen.emplace(q.id, line_no).second) {
            throw DataError(where + ": duplicate query id '" + q.id + "'");
        }
        if (!known_language(q.lang)) {
            log_warn("queries.unknown_language", {{"id", q.id}, {"lang", q.lang}});
        }
        out.push_back(std::move(q));
    });
    if (out.empty()) {
        throw DataError(path.string() + ": query set is empty");
    }
    return out;
}

} // namespace mlrag
