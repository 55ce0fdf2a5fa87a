#include "mlrag/translation.hpp"

#include <map>
#include <memory>

#include "mlrag/errors.hpp"
#include "mlrag/textnorm.hpp"
#include "mlrag/unicode.hpp"

namespace mlrag {

Translator::Translator(ProviderHub& hub, std::string endpoint_id)
    : hub_(hub), endpoint_id_(std::move(endpoint_id)) {
    if (!hub_.has_endpoint(endpoint_id_)) {
        throw UsageError("translator endpoint '" + endpoint_id_ + "' is not registered");
    }
    if (hub_.kind_of(endpoint_id_) != ProviderKind::TRANSLATE) {
        throw UsageError("endpoint '" + endpoint_id_ + "' is not a translate endpoint");
    }
}

TranslationResult Translator::translate(std::string_view text, const std::string& src,
                                        const std::string& tgt) {
    if (src.empty() || tgt.empty()) {
        throw UsageError("translate needs non-empty source and target languages");
    }
    const std::string trimmed = trim(text);
    if (src == tgt || trimmed.empty()) {
        return TranslationResult{std::string(text), src, false};
    }
    const std::string material =
        "translate\x1f" + nfc(trimmed) + "\x1f" + src + "\x1f" + tgt;
    const json request = {{"text", std::string(text)}, {"src", src}, {"tgt", tgt}};
    auto res = hub_.call(endpoint_id_, request, material);
    if (!res.response.is_object() || !res.response.contains("text") ||
        !res.response["text"].is_string()) {
        throw ProviderError("endpoint '" + endpoint_id_ +
                            "': translate response missing 'text'");
    }
    TranslationResult out;
    out.text = res.response["text"].get<std::string>();
    out.detected_src = res.response.value("detected_src", src);
    out.cached = res.cached;
    return out;
}

std::string register_mock_translator(ProviderHub& hub, const std::string& id,
                                     const std::filesystem::path& dictionary_path) {
    // (src, tgt, exact source text) -> translation
    using Key = std::tuple<std::string, std::string, std::string>;
    auto dict = std::make_shared<std::map<Key, std::string>>();

    const std::string raw = read_file(dictionary_path);
    for_each_jsonl(dictionary_path, [&](std::size_t line_no, const json& j) {
        const std::string where =
            dictionary_path.string() + ":" + std::to_string(line_no);
        if (!j.is_object()) {
            throw DataError(where + ": dictionary rows must be objects");
        }
        Key key;
        std::string tgt_text;
        try {
            key = {j.at("src_lang").get<std::string>(), j.at("tgt_lang").get<std::string>(),
                   trim(j.at("src_text").get<std::string>())};
            tgt_text = j.at("tgt_text").get<std::string>();
        } catch (const json::exception& e) {
            throw DataError(where + ": " + e.what());
        }
        (*dict)[std::move(key)] = std::move(tgt_text);
    });

    const std::string fixture_hash = sha256_hex(raw);
    hub.register_mock(id, ProviderKind::TRANSLATE, fixture_hash, [dict](const json& req) {
        std::string text;
        std::string src;
        std::string tgt;
        try {
            text = req.at("text").get<std::string>();
            src = req.at("src").get<std::string>();
            tgt = req.at("tgt").get<std::string>();
        } catch (const json::exception& e) {
            throw ProviderError(std::string("mock translator: bad request: ") + e.what());
        }
        const auto lookup = [&](const std::string& s) -> const std::string* {
            auto it = dict->find({src, tgt, s});
            return it == dict->end() ? nullptr : &it->second;
        };

        std::string out;
        if (const std::string* whole = lookup(trim(text))) {
            out = *whole;
        } else {
            const std::string tag = "⟦mt:" + src + "→" + tgt + "⟧ ";
            bool first = true;
            for (const std::string& sentence : split_sentences(text)) {
                if (!first) {
                    out += " ";
                }
                first = false;
                if (const std::string* hit = lookup(sentence)) {
                    out += *hit;
                } else {
                    out += tag + sentence;
                }
            }
        }
        return json{{"text", out}, {"detected_src", src}};
    });
    return fixture_hash;
}

} // namespace mlrag
