#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlrag {

// Rank-ordered character n-gram profile for one language. Grams are stored
// most-frequent first; the map mirrors the vector for O(1) rank lookups.
struct LangProfile {
    std::string lang;
    std::size_t top = 0;
    std::vector<std::string> grams;
    std::unordered_map<std::string, std::size_t> rank;
};

// Extracts the ranked gram list for a piece of text: match-normalized,
// space-tokenized, each token padded with one space on both sides, then all
// codepoint n-grams for n in [1,4]. Ordering is count desc, gram bytes asc.
std::vector<std::string> ranked_grams(std::string_view text, std::size_t top);

// The cap leaves room for ideographic scripts, where a small profile would
// cover too little of the character inventory.
LangProfile build_profile(const std::string& lang,
                          const std::vector<std::string>& lines,
                          std::size_t top = 1200);

// One header line, then one JSON-encoded gram per line in rank order.
std::string serialize_profile(const LangProfile& profile);
LangProfile parse_profile(std::string_view bytes);

class LangIdentifier {
public:
    struct Options {
        std::size_t min_codepoints = 3;  // shorter text is undecidable
        // Out-of-repertoire scripts score 0.99 and up because nearly every
        // gram draws the max penalty; topic-shifted Chinese tops out near
        // 0.91. The cut sits between those bands.
        double und_distance = 0.95;
    };

    LangIdentifier();
    explicit LangIdentifier(Options opt) : opt_(opt) {}

    void add(LangProfile profile);
    static LangIdentifier load_dir(const std::filesystem::path& dir);
    static LangIdentifier load_dir(const std::filesystem::path& dir, Options opt);

    std::size_t size() const { return profiles_.size(); }

    // Returns the ISO code of the closest profile, or "und" for empty, very
    // short, or out-of-repertoire text. Ties go to the smaller code.
    std::string detect(std::string_view text) const;

    // Normalized out-of-place distance in [0,1] per language, ascending by
    // language code. Exposed so tooling can report calibration data.
    std::vector<std::pair<std::string, double>> distances(
        std::string_view text) const;

private:
    std::vector<LangProfile> profiles_;
    Options opt_;
};

}  // namespace mlrag
