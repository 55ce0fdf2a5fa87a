#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mlrag {

// One passage of a multilingual corpus. `lang` is a lowercase ISO 639-1
// code and decides which per-language bucket the document lands in.
struct Document {
    std::string id;
    std::string lang;
    std::string title;
    std::string text;
    std::string source;
};

// One benchmark question. `golds` holds every acceptable answer string;
// matching is substring-based after normalization, so short golds stay
// meaningful.
struct QueryItem {
    std::string id;
    std::string lang;
    std::string question;
    std::vector<std::string> golds;
};

// Languages the toolkit knows about: ISO code plus the English name used
// when a prompt asks for the answer "in <language>".
struct LanguageInfo {
    std::string code;
    std::string name;
};

// Fixed registry, sorted by code. Unknown codes are tolerated in corpora
// (they form their own buckets) but get no display name.
const std::vector<LanguageInfo>& language_registry();
bool known_language(std::string_view code);

// English display name, or the code itself for unknown languages.
std::string language_name(std::string_view code);

enum class ResourceClass { HR, LR };

std::string_view to_string(ResourceClass rc);

// Partition of languages into high- and low-resource groups, used by the
// report rollups. The built-in split can be replaced by a JSON file of the
// form {"hr": ["en", ...]} so experiments can regroup without a rebuild.
class ResourceClasses {
public:
    // Built-in default split.
    ResourceClasses();

    static ResourceClasses from_file(const std::string& path);

    ResourceClass classify(std::string_view lang) const;

private:
    std::vector<std::string> hr_;
};

} // namespace mlrag
