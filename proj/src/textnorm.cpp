#include "mlrag/textnorm.hpp"

#include "mlrag/unicode.hpp"

namespace mlrag {

std::string normalize_for_match(std::string_view text) {
    const std::u32string cps = decode_utf8(casefold(nfkc(text)));
    std::u32string out;
    out.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
        if (is_white(cp) || is_punct(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(U' ');
            pending_space = false;
        }
        out.push_back(cp);
    }
    return encode_utf8(out);
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    const auto is_ascii_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    };
    while (b < e && is_ascii_space(s[b])) ++b;
    while (e > b && is_ascii_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
    const std::u32string cps = decode_utf8(text);
    std::vector<std::string> out;
    std::u32string cur;

    const auto flush = [&]() {
        std::string s = trim(encode_utf8(cur));
        cur.clear();
        if (!s.empty()) {
            out.push_back(std::move(s));
        }
    };

    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i];
        if (cp == U'\n') {
            flush();
            continue;
        }
        cur.push_back(cp);
        const bool hard = (cp == U'。' || cp == U'！' || cp == U'？' ||
                           cp == U'؟');
        const bool soft = (cp == U'.' || cp == U'!' || cp == U'?');
        if (hard) {
            flush();
        } else if (soft) {
            const bool at_end = (i + 1 == cps.size());
            if (at_end || is_white(cps[i + 1])) {
                flush();
            }
        }
    }
    flush();
    return out;
}

} // namespace mlrag
