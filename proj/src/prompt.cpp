#include "mlrag/prompt.hpp"

#include <algorithm>
#include <random>

#include "mlrag/errors.hpp"
#include "mlrag/textnorm.hpp"

namespace mlrag {

std::string render_prompt(const PromptSpec& spec) {
    if (spec.question.empty()) {
        throw UsageError("prompt needs a question");
    }
    if (spec.answer_language.empty()) {
        throw UsageError("prompt needs an answer language name");
    }
    std::string out;
    out += "Please answer the question by following the provided instructions.\n\n";
    out += "#Instructions:\n";
    out += "1. Use the reference evidence to answer the question clearly.\n";
    out += "2. Reply in the format 'Answer: <your final answer>'.\n";
    out += "3. Deliver the final answer in " + spec.answer_language + ".\n\n";
    out += "#Reference Evidence:\n";
    for (std::size_t i = 0; i < spec.evidence.size(); ++i) {
        const EvidenceItem& e = spec.evidence[i];
        out += "[" + std::to_string(i + 1) + "] ";
        if (spec.annotate_evidence_lang) {
            out += "(" + e.lang + ") ";
        }
        out += e.text;
        out += "\n";
    }
    out += "\n#Question: " + spec.question + "\n";
    return out;
}

const std::vector<std::string>& answer_markers() {
    static const std::vector<std::string> markers = {
        "answer:",
        "the answer is:",
        "答案是：",
        "정답은",
    };
    return markers;
}

ParsedAnswer parse_answer(std::string_view llm_output) {
    const std::string lowered = to_lower_ascii(llm_output);
    std::size_t best_pos = std::string::npos;
    std::size_t best_len = 0;
    for (const std::string& marker : answer_markers()) {
        const std::size_t pos = lowered.rfind(to_lower_ascii(marker));
        if (pos == std::string::npos) {
            continue;
        }
        // Prefer the rightmost marker; on a shared start, the longer one.
        if (best_pos == std::string::npos || pos > best_pos ||
            (pos == best_pos && marker.size() > best_len)) {
            best_pos = pos;
            best_len = marker.size();
        }
    }
    if (best_pos == std::string::npos) {
        return ParsedAnswer{trim(llm_output), true};
    }
    return ParsedAnswer{trim(llm_output.substr(best_pos + best_len)), false};
}

Perturbation parse_perturbation(std::string_view s) {
    if (s == "original") return Perturbation::ORIGINAL;
    if (s == "shuffle") return Perturbation::RANDOM_SHUFFLE;
    if (s == "en-first") return Perturbation::EN_FIRST;
    if (s == "en-last") return Perturbation::EN_LAST;
    throw UsageError("unknown perturbation '" + std::string(s) +
                     "' (expected original, shuffle, en-first, en-last)");
}

std::string_view to_string(Perturbation p) {
    switch (p) {
        case Perturbation::ORIGINAL: return "original";
        case Perturbation::RANDOM_SHUFFLE: return "shuffle";
        case Perturbation::EN_FIRST: return "en-first";
        case Perturbation::EN_LAST: return "en-last";
    }
    return "?";
}

namespace {

// Uniform draw from [0, n) by rejection; mt19937_64 output is specified by
// the standard, so this is reproducible across compilers, unlike
// std::uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return x % n;
}

} // namespace

void apply_perturbation(std::vector<EvidenceItem>& evidence, Perturbation p,
                        std::uint64_t seed) {
    switch (p) {
        case Perturbation::ORIGINAL:
            break;
        case Perturbation::RANDOM_SHUFFLE: {
            std::mt19937_64 rng(seed);
            for (std::size_t i = evidence.size(); i > 1; --i) {
                const std::uint64_t j = bounded(rng, i);
                std::swap(evidence[i - 1], evidence[j]);
            }
            break;
        }
        case Perturbation::EN_FIRST:
            std::stable_partition(evidence.begin(), evidence.end(),
                                  [](const EvidenceItem& e) { return e.lang == "en"; });
            break;
        case Perturbation::EN_LAST:
            std::stable_partition(evidence.begin(), evidence.end(),
                                  [](const EvidenceItem& e) { return e.lang != "en"; });
            break;
    }
    int rank = 1;
    for (EvidenceItem& e : evidence) {
        e.rank = rank++;
    }
}

} // namespace mlrag
