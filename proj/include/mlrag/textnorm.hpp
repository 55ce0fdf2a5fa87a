#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mlrag {

// Canonical normalization applied before any answer comparison:
// NFKC, case folding, punctuation replaced by a space, whitespace runs
// collapsed to single spaces, then trimmed. Word-internal spacing survives,
// which keeps substring matching meaningful for both spaced and unspaced
// scripts.
std::string normalize_for_match(std::string_view text);

// ASCII-only trim / lowercase helpers for protocol-ish strings (ids,
// markers). Not for natural-language text.
std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

// Splits text into sentences on .!? and their fullwidth/Arabic
// counterparts plus newlines. An ASCII terminator only splits when
// followed by whitespace or end of text, so decimals and abbreviations
// stay intact; CJK terminators always split. Segments are trimmed and
// empty ones dropped. Deterministic by construction.
std::vector<std::string> split_sentences(std::string_view text);

} // namespace mlrag
