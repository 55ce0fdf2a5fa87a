// Builds the shipped language profiles from the seed sentence files, and can
// score a labeled jsonl file against a profile directory to check accuracy.
//
//   make_profiles build <seed_dir> <out_dir> [top]
//   make_profiles score <profiles_dir> <labeled.jsonl>

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"
#include "mlrag/langid.hpp"

namespace fs = std::filesystem;
using namespace mlrag;

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : read_file(path)) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') {
                cur.pop_back();
            }
            if (!cur.empty()) {
                lines.push_back(cur);
            }
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) {
        lines.push_back(cur);
    }
    return lines;
}

int cmd_build(const fs::path& seed_dir, const fs::path& out_dir, std::size_t top) {
    std::vector<fs::path> seeds;
    for (const auto& entry : fs::directory_iterator(seed_dir)) {
        if (entry.path().extension() == ".txt") {
            seeds.push_back(entry.path());
        }
    }
    std::sort(seeds.begin(), seeds.end());
    if (seeds.empty()) {
        std::fprintf(stderr, "no .txt seed files in %s\n", seed_dir.string().c_str());
        return 1;
    }
    fs::create_directories(out_dir);
    for (const auto& seed : seeds) {
        const std::string lang = seed.stem().string();
        const LangProfile p = build_profile(lang, read_lines(seed), top);
        const fs::path out = out_dir / (lang + ".lidp");
        write_file_atomic(out, serialize_profile(p));
        std::printf("%s: %zu grams -> %s\n", lang.c_str(), p.grams.size(),
                    out.string().c_str());
    }
    return 0;
}

int cmd_score(const fs::path& profiles_dir, const fs::path& labeled) {
    const LangIdentifier id = LangIdentifier::load_dir(profiles_dir);
    std::size_t total = 0, correct = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_lang;
    double worst_correct = 0.0;
    double best_wrong = 1.0;

    for_each_jsonl(labeled, [&](std::size_t, const json& row) {
        const std::string truth = row.at("lang").get<std::string>();
        const std::string text = row.at("text").get<std::string>();
        const std::string pred = id.detect(text);

        double best = 1.0;
        for (const auto& [lang, dist] : id.distances(text)) {
            (void)lang;
            best = std::min(best, dist);
        }

        ++total;
        ++per_lang[truth].second;
        if (pred == truth) {
            ++correct;
            ++per_lang[truth].first;
            worst_correct = std::max(worst_correct, best);
        } else {
            best_wrong = std::min(best_wrong, best);
            std::printf("MISS %-4s -> %-4s dist=%.3f  %.60s\n", truth.c_str(),
                        pred.c_str(), best, text.c_str());
        }
    });

    for (const auto& [lang, counts] : per_lang) {
        std::printf("%-4s %zu/%zu\n", lang.c_str(), counts.first, counts.second);
    }
    std::printf("accuracy %zu/%zu = %.4f\n", correct, total,
                total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0);
    std::printf("worst correct distance %.4f, best wrong distance %.4f\n",
                worst_correct, best_wrong);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const std::vector<std::string> args(argv + 1, argv + argc);
        if (args.size() >= 3 && args[0] == "build") {
            const std::size_t top = args.size() > 3 ? std::stoul(args[3]) : 1200;
            return cmd_build(args[1], args[2], top);
        }
        if (args.size() == 3 && args[0] == "score") {
            return cmd_score(args[1], args[2]);
        }
        std::fprintf(stderr,
                     "usage: make_profiles build <seed_dir> <out_dir> [top]\n"
                     "       make_profiles score <profiles_dir> <labeled.jsonl>\n");
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
