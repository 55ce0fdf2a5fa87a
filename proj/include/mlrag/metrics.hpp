#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mlrag {

// Flexible exact match: 1 if any normalized gold answer occurs as a
// substring of the normalized prediction, else 0. A gold that normalizes
// to the empty string can never match; an empty gold set scores 0.
int flexible_em(std::string_view prediction, const std::vector<std::string>& golds);

// Character trigram recall. Both sides are normalized (spaces retained),
// decomposed into codepoint trigrams, and scored as the clipped multiset
// overlap divided by the gold trigram count. The best gold wins. Golds
// shorter than three codepoints after normalization fall back to substring
// containment, scoring exactly 0 or 1.
double char_3gram_recall(std::string_view prediction, const std::vector<std::string>& golds);

} // namespace mlrag
