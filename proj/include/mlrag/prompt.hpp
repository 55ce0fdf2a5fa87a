#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mlrag {

// One passage as it will appear in the prompt. `lang` is the language of
// `text` right now; `orig_lang` remembers the bucket the document came
// from (they diverge once evidence is translated).
struct EvidenceItem {
    std::string doc_id;
    std::string lang;
    std::string orig_lang;
    std::string text;
    int rank = 0;
    double score = 0.0;
};

struct PromptSpec {
    std::string question;
    std::string answer_language;  // English display name, e.g. "German"
    std::vector<EvidenceItem> evidence;
    bool annotate_evidence_lang = false;  // prefix each item with "(lang)"
};

// Deterministic, byte-stable rendering. The three section markers
// (#Instructions:, #Reference Evidence:, #Question:) appear exactly once;
// with no evidence the evidence section is simply empty, which doubles as
// the no-retrieval baseline prompt.
std::string render_prompt(const PromptSpec& spec);

struct ParsedAnswer {
    std::string answer;
    bool parse_failed = false;
};

// Markers that introduce a final answer, matched ASCII-case-insensitively;
// the last occurrence wins. With no marker the whole trimmed output is
// returned and flagged.
const std::vector<std::string>& answer_markers();
ParsedAnswer parse_answer(std::string_view llm_output);

// Context-order robustness modes.
enum class Perturbation { ORIGINAL, RANDOM_SHUFFLE, EN_FIRST, EN_LAST };

Perturbation parse_perturbation(std::string_view s);
std::string_view to_string(Perturbation p);

// Reorders evidence in place and renumbers ranks by new position. The
// shuffle is a seeded Fisher-Yates over a fixed-width generator with
// rejection-sampled bounds, so a seed means the same permutation on every
// platform. EN_FIRST / EN_LAST stable-partition on the current language.
void apply_perturbation(std::vector<EvidenceItem>& evidence, Perturbation p,
                        std::uint64_t seed);

} // namespace mlrag
