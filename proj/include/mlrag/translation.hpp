#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mlrag/providers.hpp"

namespace mlrag {

struct TranslationResult {
    std::string text;
    std::string detected_src;
    bool cached = false;
};

// Thin wrapper over a translate endpoint. Adds the two behaviors every
// caller wants: identity translations (src == tgt, or empty text) never
// touch the provider, and the cache identity is the NFC-normalized trimmed
// text plus the language pair, so byte-level duplicates of the same
// request deduplicate.
class Translator {
public:
    Translator(ProviderHub& hub, std::string endpoint_id);

    TranslationResult translate(std::string_view text, const std::string& src,
                                const std::string& tgt);

    const std::string& endpoint_id() const { return endpoint_id_; }

private:
    ProviderHub& hub_;
    std::string endpoint_id_;
};

// Registers a dictionary-backed mock translate endpoint. The dictionary is
// JSONL rows {"src_lang", "tgt_lang", "src_text", "tgt_text"}. Lookup is
// exact on the whole trimmed text first, then sentence by sentence;
// sentences not in the dictionary come back tagged
//   ⟦mt:src→tgt⟧ <original sentence>
// which keeps the mock honest about what it cannot translate while
// preserving the original content. Returns the dictionary content hash
// (the endpoint's fixture version).
std::string register_mock_translator(ProviderHub& hub, const std::string& id,
                                     const std::filesystem::path& dictionary_path);

} // namespace mlrag
