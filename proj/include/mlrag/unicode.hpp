#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mlrag {

// Thin wrappers over ICU. All functions take and return UTF-8; invalid
// byte sequences are replaced with U+FFFD rather than rejected, so metric
// code never throws on odd model output.

std::string nfc(std::string_view utf8);
std::string nfkc(std::string_view utf8);

// Full Unicode case folding (the language-independent default, so "ß"
// folds to "ss" and dotted capital I decomposes).
std::string casefold(std::string_view utf8);

bool is_punct(char32_t cp);       // any general category P*
bool is_white(char32_t cp);       // Unicode White_Space property

std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view cps);
std::string encode_utf8(char32_t cp);

} // namespace mlrag
