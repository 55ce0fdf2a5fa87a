#include "mlrag/metrics.hpp"

#include <algorithm>
#include <map>

#include "mlrag/textnorm.hpp"
#include "mlrag/unicode.hpp"

namespace mlrag {

namespace {

// UTF-8 is self-synchronizing, so byte-level substring search on two
// normalized UTF-8 strings always aligns on codepoint boundaries.
bool contains(const std::string& haystack, const std::string& needle) {
    return !needle.empty() && haystack.find(needle) != std::string::npos;
}

std::map<std::u32string, int> trigram_counts(const std::u32string& cps) {
    std::map<std::u32string, int> counts;
    if (cps.size() >= 3) {
        for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
            ++counts[cps.substr(i, 3)];
        }
    }
    return counts;
}

} // namespace

int flexible_em(std::string_view prediction, const std::vector<std::string>& golds) {
    const std::string pred = normalize_for_match(prediction);
    for (const auto& gold : golds) {
        if (contains(pred, normalize_for_match(gold))) {
            return 1;
        }
    }
    return 0;
}

double char_3gram_recall(std::string_view prediction, const std::vector<std::string>& golds) {
    const std::string pred_norm = normalize_for_match(prediction);
    const std::u32string pred_cps = decode_utf8(pred_norm);
    const std::map<std::u32string, int> pred_counts = trigram_counts(pred_cps);

    double best = 0.0;
    for (const auto& gold : golds) {
        const std::string gold_norm = normalize_for_match(gold);
        const std::u32string gold_cps = decode_utf8(gold_norm);
        double score = 0.0;
        if (gold_cps.size() < 3) {
            // Too short for trigrams; fall back to containment.
            score = contains(pred_norm, gold_norm) ? 1.0 : 0.0;
        } else {
            const std::map<std::u32string, int> gold_counts = trigram_counts(gold_cps);
            long hits = 0;
            long total = 0;
            for (const auto& [gram, count] : gold_counts) {
                total += count;
                auto it = pred_counts.find(gram);
                if (it != pred_counts.end()) {
                    hits += std::min(count, it->second);
                }
            }
            score = static_cast<double>(hits) / static_cast<double>(total);
        }
        best = std::max(best, score);
    }
    return best;
}

} // namespace mlrag
