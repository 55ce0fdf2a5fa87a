#include "mlrag/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utypes.h>

#include <vector>

#include "mlrag/errors.hpp"

namespace mlrag {

namespace {

// UTF-8 -> UTF-16, substituting U+FFFD for ill-formed sequences.
std::vector<UChar> to_utf16(std::string_view utf8) {
    if (utf8.empty()) {
        return {};
    }
    UErrorCode status = U_ZERO_ERROR;
    int32_t len16 = 0;
    u_strFromUTF8WithSub(nullptr, 0, &len16, utf8.data(),
                         static_cast<int32_t>(utf8.size()), 0xFFFD, nullptr, &status);
    if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
        throw DataError("utf8 decode failed");
    }
    status = U_ZERO_ERROR;
    std::vector<UChar> out(static_cast<std::size_t>(len16) + 1);
    u_strFromUTF8WithSub(out.data(), static_cast<int32_t>(out.size()), &len16,
                         utf8.data(), static_cast<int32_t>(utf8.size()), 0xFFFD,
                         nullptr, &status);
    if (U_FAILURE(status)) {
        throw DataError("utf8 decode failed");
    }
    out.resize(static_cast<std::size_t>(len16));
    return out;
}

std::string to_utf8(const UChar* data, int32_t len16) {
    if (len16 == 0) {
        return {};
    }
    UErrorCode status = U_ZERO_ERROR;
    int32_t len8 = 0;
    u_strToUTF8(nullptr, 0, &len8, data, len16, &status);
    if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
        throw DataError("utf8 encode failed");
    }
    status = U_ZERO_ERROR;
    std::string out(static_cast<std::size_t>(len8), '\0');
    u_strToUTF8(out.data(), len8, &len8, data, len16, &status);
    if (U_FAILURE(status)) {
        throw DataError("utf8 encode failed");
    }
    return out;
}

std::string normalize_with(const UNormalizer2* norm, std::string_view utf8) {
    if (utf8.empty()) {
        return {};
    }
    const std::vector<UChar> src = to_utf16(utf8);
    UErrorCode status = U_ZERO_ERROR;
    int32_t need = unorm2_normalize(norm, src.data(), static_cast<int32_t>(src.size()),
                                    nullptr, 0, &status);
    if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
        throw DataError("unicode normalization failed");
    }
    status = U_ZERO_ERROR;
    std::vector<UChar> dst(static_cast<std::size_t>(need) + 1);
    need = unorm2_normalize(norm, src.data(), static_cast<int32_t>(src.size()),
                            dst.data(), static_cast<int32_t>(dst.size()), &status);
    if (U_FAILURE(status)) {
        throw DataError("unicode normalization failed");
    }
    return to_utf8(dst.data(), need);
}

const UNormalizer2* nfc_instance() {
    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* norm = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) {
        throw DataError("ICU NFC unavailable");
    }
    return norm;
}

const UNormalizer2* nfkc_instance() {
    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* norm = unorm2_getNFKCInstance(&status);
    if (U_FAILURE(status)) {
        throw DataError("ICU NFKC unavailable");
    }
    return norm;
}

} // namespace

std::string nfc(std::string_view utf8) {
    return normalize_with(nfc_instance(), utf8);
}

std::string nfkc(std::string_view utf8) {
    return normalize_with(nfkc_instance(), utf8);
}

std::string casefold(std::string_view utf8) {
    if (utf8.empty()) {
        return {};
    }
    const std::vector<UChar> src = to_utf16(utf8);
    UErrorCode status = U_ZERO_ERROR;
    int32_t need = u_strFoldCase(nullptr, 0, src.data(), static_cast<int32_t>(src.size()),
                                 U_FOLD_CASE_DEFAULT, &status);
    if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
        throw DataError("case folding failed");
    }
    status = U_ZERO_ERROR;
    std::vector<UChar> dst(static_cast<std::size_t>(need) + 1);
    need = u_strFoldCase(dst.data(), static_cast<int32_t>(dst.size()), src.data(),
                         static_cast<int32_t>(src.size()), U_FOLD_CASE_DEFAULT, &status);
    if (U_FAILURE(status)) {
        throw DataError("case folding failed");
    }
    return to_utf8(dst.data(), need);
}

bool is_punct(char32_t cp) {
    return u_ispunct(static_cast<UChar32>(cp)) != 0;
}

bool is_white(char32_t cp) {
    return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

std::u32string decode_utf8(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    const auto byte = [&](std::size_t k) {
        return static_cast<unsigned char>(utf8[k]);
    };
    while (i < utf8.size()) {
        const unsigned char b0 = byte(i);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0 && i + 1 < utf8.size() &&
                   (byte(i + 1) & 0xC0) == 0x80) {
            cp = (static_cast<char32_t>(b0 & 0x1F) << 6) |
                 (byte(i + 1) & 0x3F);
            len = 2;
            if (cp < 0x80) cp = 0xFFFD;
        } else if ((b0 & 0xF0) == 0xE0 && i + 2 < utf8.size() &&
                   (byte(i + 1) & 0xC0) == 0x80 && (byte(i + 2) & 0xC0) == 0x80) {
            cp = (static_cast<char32_t>(b0 & 0x0F) << 12) |
                 (static_cast<char32_t>(byte(i + 1) & 0x3F) << 6) |
                 (byte(i + 2) & 0x3F);
            len = 3;
            if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
        } else if ((b0 & 0xF8) == 0xF0 && i + 3 < utf8.size() &&
                   (byte(i + 1) & 0xC0) == 0x80 && (byte(i + 2) & 0xC0) == 0x80 &&
                   (byte(i + 3) & 0xC0) == 0x80) {
            cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
                 (static_cast<char32_t>(byte(i + 1) & 0x3F) << 12) |
                 (static_cast<char32_t>(byte(i + 2) & 0x3F) << 6) |
                 (byte(i + 3) & 0x3F);
            len = 4;
            if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(char32_t cp) {
    std::string out;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        cp = 0xFFFD;
    }
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

std::string encode_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size() * 2);
    for (char32_t cp : cps) {
        out += encode_utf8(cp);
    }
    return out;
}

} // namespace mlrag
