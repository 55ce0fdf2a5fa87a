#include "mlrag/types.hpp"

#include <algorithm>

#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"

namespace mlrag {

const std::vector<LanguageInfo>& language_registry() {
    // Sorted by code; lookups below binary-search on that.
    static const std::vector<LanguageInfo> registry = {
        {"ar", "Arabic"},
        {"bn", "Bengali"},
        {"de", "German"},
        {"en", "English"},
        {"es", "Spanish"},
        {"fi", "Finnish"},
        {"fr", "French"},
        {"hi", "Hindi"},
        {"it", "Italian"},
        {"ja", "Japanese"},
        {"ko", "Korean"},
        {"pt", "Portuguese"},
        {"ru", "Russian"},
        {"te", "Telugu"},
        {"th", "Thai"},
        {"vi", "Vietnamese"},
        {"zh", "Chinese"},
    };
    return registry;
}

namespace {

const LanguageInfo* find_language(std::string_view code) {
    const auto& reg = language_registry();
    auto it = std::lower_bound(reg.begin(), reg.end(), code,
                               [](const LanguageInfo& info, std::string_view c) {
                                   return info.code < c;
                               });
    if (it != reg.end() && it->code == code) {
        return &*it;
    }
    return nullptr;
}

} // namespace

bool known_language(std::string_view code) {
    return find_language(code) != nullptr;
}

std::string language_name(std::string_view code) {
    if (const LanguageInfo* info = find_language(code)) {
        return info->name;
    }
    return std::string(code);
}

std::string_view to_string(ResourceClass rc) {
    return rc == ResourceClass::HR ? "HR" : "LR";
}

ResourceClasses::ResourceClasses()
    : hr_{"de", "en", "es", "fr", "ja", "ru", "zh"} {}

ResourceClasses ResourceClasses::from_file(const std::string& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("hr") || !j["hr"].is_array()) {
        throw DataError("resource class file must be {\"hr\": [\"code\", ...]}: " + path);
    }
    ResourceClasses rc;
    rc.hr_.clear();
    for (const auto& v : j["hr"]) {
        if (!v.is_string()) {
            throw DataError("non-string language code in " + path);
        }
        rc.hr_.push_back(v.get<std::string>());
    }
    std::sort(rc.hr_.begin(), rc.hr_.end());
    return rc;
}

ResourceClass ResourceClasses::classify(std::string_view lang) const {
    return std::binary_search(hr_.begin(), hr_.end(), lang) ? ResourceClass::HR
                                                            : ResourceClass::LR;
}

} // namespace mlrag
