#include "mlrag/langid.hpp"

#include <doctest.h>

#include <filesystem>
#include <map>
#include <vector>

#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"
#include "test_util.hpp"

using namespace mlrag;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : read_file(path)) {
        if (c == '\n') {
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

LangIdentifier shipped_identifier() {
    return LangIdentifier::load_dir(testutil::repo_root() / "data" / "langid" /
                                    "profiles");
}

}  // namespace

TEST_SUITE("langid") {

TEST_CASE("shipped profiles are byte-identical to a rebuild from the seeds") {
    const fs::path seed_dir = testutil::repo_root() / "data" / "langid" / "seed";
    const fs::path prof_dir = testutil::repo_root() / "data" / "langid" / "profiles";

    std::size_t checked = 0;
    for (const auto& entry : fs::directory_iterator(seed_dir)) {
        if (entry.path().extension() != ".txt") {
            continue;
        }
        const std::string lang = entry.path().stem().string();
        const LangProfile rebuilt = build_profile(lang, read_lines(entry.path()));
        const std::string shipped = read_file(prof_dir / (lang + ".lidp"));
        CAPTURE(lang);
        CHECK(serialize_profile(rebuilt) == shipped);
        ++checked;
    }
    CHECK(checked == 17);
}

TEST_CASE("profile serialization round-trips") {
    const LangProfile p = build_profile("en", {"the cat sat on the mat",
                                               "the dog sat on the rug"});
    const LangProfile q = parse_profile(serialize_profile(p));
    CHECK(q.lang == "en");
    CHECK(q.top == p.top);
    CHECK(q.grams == p.grams);
    CHECK(q.rank.at(" ") == p.rank.at(" "));
}

TEST_CASE("profile parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_profile(""), DataError);
    CHECK_THROWS_AS(parse_profile("nope 1 en 10\n\"a\"\n"), DataError);
    CHECK_THROWS_AS(parse_profile("lidp 2 en 10\n\"a\"\n"), DataError);
    CHECK_THROWS_AS(parse_profile("lidp 1 en 10\nnot-json\n"), DataError);
    CHECK_THROWS_AS(parse_profile("lidp 1 en 1\n\"a\"\n\"b\"\n"), DataError);
}

TEST_CASE("held-out sentences classify at or above the accuracy floor") {
    const LangIdentifier id = shipped_identifier();
    REQUIRE(id.size() == 17);

    std::size_t total = 0;
    std::size_t correct = 0;
    std::map<std::string, std::size_t> misses;
    for_each_jsonl(testutil::fixture("langid_heldout.jsonl"),
                   [&](std::size_t, const json& row) {
                       const auto truth = row.at("lang").get<std::string>();
                       const auto text = row.at("text").get<std::string>();
                       ++total;
                       if (id.detect(text) == truth) {
                           ++correct;
                       } else {
                           ++misses[truth];
                       }
                   });

    REQUIRE(total == 240);
    CAPTURE(misses.size());
    CHECK(static_cast<double>(correct) / static_cast<double>(total) >= 0.95);
}

TEST_CASE("short or empty text is undecidable") {
    const LangIdentifier id = shipped_identifier();
    CHECK(id.detect("") == "und");
    CHECK(id.detect("   ") == "und");
    CHECK(id.detect("ab") == "und");
    CHECK(id.detect("山 水") == "und");  // two letters across two tokens
    CHECK(id.detect("!?...") == "und");  // punctuation normalizes away
}

TEST_CASE("scripts outside the profile set come back as und") {
    const LangIdentifier id = shipped_identifier();
    CHECK(id.detect("Η γρήγορη αλεπού πηδάει πάνω από τον τεμπέλη σκύλο.") == "und");
    CHECK(id.detect("השועל החום המהיר קופץ מעל הכלב העצלן.") == "und");
    CHECK(id.detect("ეს არის ქართული წინადადება შესამოწმებლად.") == "und");
}

TEST_CASE("single sentences land on their language") {
    const LangIdentifier id = shipped_identifier();
    CHECK(id.detect("The kettle is boiling, so the tea will be ready soon.") == "en");
    CHECK(id.detect("Der Schlüssel liegt wie immer unter der Fußmatte.") == "de");
    CHECK(id.detect("El gato duerme encima de la silla del comedor.") == "es");
    CHECK(id.detect("Le boulanger ouvre sa boutique à six heures du matin.") == "fr");
    CHECK(id.detect("Завтра утром мы поедем на дачу на электричке.") == "ru");
    CHECK(id.detect("明天早上我们要坐火车去乡下看望外婆。") == "zh");
    CHECK(id.detect("駅前の喫茶店で友達とコーヒーを飲みました。") == "ja");
    CHECK(id.detect("어제 저녁에 친구와 함께 영화를 보러 갔습니다.") == "ko");
}

TEST_CASE("detection is deterministic") {
    const LangIdentifier id = shipped_identifier();
    const std::string text = "A ponte fica perto da estação velha.";
    const std::string first = id.detect(text);
    for (int i = 0; i < 5; ++i) {
        CHECK(id.detect(text) == first);
    }
}

TEST_CASE("an empty identifier refuses to guess") {
    LangIdentifier id;
    CHECK(id.detect("plenty of text to look at here") == "und");
}

}  // TEST_SUITE
