#include "mlrag/langid.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"
#include "mlrag/textnorm.hpp"
#include "mlrag/unicode.hpp"

namespace mlrag {

namespace {

constexpr std::size_t kMaxN = 4;

void count_grams(std::string_view text, std::map<std::string, std::size_t>& counts) {
    const std::u32string cps = decode_utf8(normalize_for_match(text));

    std::u32string token;
    const auto flush = [&]() {
        if (token.empty()) {
            return;
        }
        std::u32string padded;
        padded.reserve(token.size() + 2);
        padded.push_back(U' ');
        padded.append(token);
        padded.push_back(U' ');
        for (std::size_t n = 1; n <= kMaxN; ++n) {
            if (padded.size() < n) {
                break;
            }
            for (std::size_t i = 0; i + n <= padded.size(); ++i) {
                ++counts[encode_utf8(std::u32string_view(padded).substr(i, n))];
            }
        }
        token.clear();
    };

    for (char32_t cp : cps) {
        if (cp == U' ') {
            flush();
        } else {
            token.push_back(cp);
        }
    }
    flush();
}

}  // namespace

std::vector<std::string> ranked_grams(std::string_view text, std::size_t top) {
    std::map<std::string, std::size_t> counts;
    count_grams(text, counts);

    std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    if (items.size() > top) {
        items.resize(top);
    }

    std::vector<std::string> out;
    out.reserve(items.size());
    for (auto& [gram, count] : items) {
        (void)count;
        out.push_back(std::move(gram));
    }
    return out;
}

LangProfile build_profile(const std::string& lang,
                          const std::vector<std::string>& lines,
                          std::size_t top) {
    std::string joined;
    for (const auto& line : lines) {
        joined += line;
        joined += '\n';
    }
    LangProfile p;
    p.lang = lang;
    p.top = top;
    p.grams = ranked_grams(joined, top);
    for (std::size_t i = 0; i < p.grams.size(); ++i) {
        p.rank.emplace(p.grams[i], i);
    }
    return p;
}

std::string serialize_profile(const LangProfile& profile) {
    std::string out = "lidp 1 " + profile.lang + " " + std::to_string(profile.top) + "\n";
    for (const auto& gram : profile.grams) {
        out += json(gram).dump();
        out += '\n';
    }
    return out;
}

LangProfile parse_profile(std::string_view bytes) {
    std::istringstream in{std::string(bytes)};
    std::string header;
    if (!std::getline(in, header)) {
        throw DataError("language profile: empty file");
    }
    std::istringstream hs(header);
    std::string magic, lang;
    int version = 0;
    std::size_t top = 0;
    if (!(hs >> magic >> version >> lang >> top) || magic != "lidp") {
        throw DataError("language profile: bad header '" + header + "'");
    }
    if (version != 1) {
        throw DataError("language profile: unsupported version " + std::to_string(version));
    }

    LangProfile p;
    p.lang = lang;
    p.top = top;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        json g = json::parse(line, nullptr, false);
        if (g.is_discarded() || !g.is_string()) {
            throw DataError("language profile: bad gram line '" + line + "'");
        }
        p.rank.emplace(g.get<std::string>(), p.grams.size());
        p.grams.push_back(g.get<std::string>());
    }
    if (p.grams.size() > p.top) {
        throw DataError("language profile: more grams than the declared cap");
    }
    return p;
}

LangIdentifier::LangIdentifier() : opt_() {}

void LangIdentifier::add(LangProfile profile) {
    profiles_.push_back(std::move(profile));
    std::sort(profiles_.begin(), profiles_.end(),
              [](const LangProfile& a, const LangProfile& b) { return a.lang < b.lang; });
}

LangIdentifier LangIdentifier::load_dir(const std::filesystem::path& dir) {
    return load_dir(dir, Options());
}

LangIdentifier LangIdentifier::load_dir(const std::filesystem::path& dir, Options opt) {
    LangIdentifier id(opt);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".lidp") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        id.add(parse_profile(read_file(f)));
    }
    return id;
}

std::vector<std::pair<std::string, double>> LangIdentifier::distances(
    std::string_view text) const {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(profiles_.size());

    // The query profile is capped like the language profiles so a long text
    // cannot dilute the signal with rare grams.
    std::size_t cap = 1;
    for (const auto& p : profiles_) {
        cap = std::max(cap, p.top);
    }
    const std::vector<std::string> qgrams = ranked_grams(text, cap);

    for (const auto& p : profiles_) {
        if (qgrams.empty() || p.grams.empty()) {
            out.emplace_back(p.lang, 1.0);
            continue;
        }
        const std::size_t penalty = p.top;
        std::size_t total = 0;
        for (std::size_t i = 0; i < qgrams.size(); ++i) {
            const auto it = p.rank.find(qgrams[i]);
            if (it == p.rank.end()) {
                total += penalty;
            } else {
                total += (i > it->second) ? i - it->second : it->second - i;
            }
        }
        out.emplace_back(p.lang, static_cast<double>(total) /
                                     static_cast<double>(qgrams.size() * penalty));
    }
    return out;
}

std::string LangIdentifier::detect(std::string_view text) const {
    if (profiles_.empty()) {
        return "und";
    }
    const std::u32string cps = decode_utf8(normalize_for_match(text));
    std::size_t letters = 0;
    for (char32_t cp : cps) {
        if (cp != U' ') {
            ++letters;
        }
    }
    if (letters < opt_.min_codepoints) {
        return "und";
    }

    std::string best_lang;
    double best = 2.0;
    for (const auto& [lang, dist] : distances(text)) {
        if (dist < best) {
            best = dist;
            best_lang = lang;
        }
    }
    if (best > opt_.und_distance) {
        return "und";
    }
    return best_lang;
}

}  // namespace mlrag
