#include <doctest.h>

#include <fstream>

#include "mlrag/corpus.hpp"
#include "mlrag/errors.hpp"
#include "test_util.hpp"

using namespace mlrag;

namespace {

std::filesystem::path write_jsonl(const std::filesystem::path& dir, const std::string& name,
                                  const std::string& content) {
    const auto path = dir / name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

} // namespace

TEST_SUITE("corpus") {

TEST_CASE("loads buckets and stats from fixture") {
    const Corpus c = Corpus::load_jsonl(testutil::fixture("tiny/corpus.jsonl"));
    CHECK(c.size() == 10);
    CHECK(c.languages() == std::vector<std::string>{"de", "en", "fi", "zh"});
    CHECK(c.bucket("en").size() == 5);
    CHECK(c.bucket("de").size() == 2);
    CHECK(c.bucket("xx").empty());
    CHECK(c.empty_text_count() == 1);
    REQUIRE(c.find("de-002") != nullptr);
    CHECK(c.find("de-002")->title == "München");
    CHECK(c.find("nope") == nullptr);
    CHECK(c.content_hash().size() == 64);
}

TEST_CASE("content hash tracks content, not file cosmetics") {
    const auto dir = testutil::scratch_dir("corpus_hash");
    const auto a = write_jsonl(dir, "a.jsonl",
        "{\"id\": \"x\", \"lang\": \"en\", \"text\": \"hello\"}\n");
    // Same record, different key order, extra blank line.
    const auto b = write_jsonl(dir, "b.jsonl",
        "\n{\"text\": \"hello\", \"lang\": \"en\", \"id\": \"x\"}\n\n");
    const auto c = write_jsonl(dir, "c.jsonl",
        "{\"id\": \"x\", \"lang\": \"en\", \"text\": \"hello!\"}\n");
    CHECK(Corpus::load_jsonl(a).content_hash() == Corpus::load_jsonl(b).content_hash());
    CHECK(Corpus::load_jsonl(a).content_hash() != Corpus::load_jsonl(c).content_hash());
}

TEST_CASE("rejects malformed corpora with location info") {
    const auto dir = testutil::scratch_dir("corpus_bad");
    SUBCASE("duplicate id") {
        const auto p = write_jsonl(dir, "dup.jsonl",
            "{\"id\": \"x\", \"lang\": \"en\", \"text\": \"a\"}\n"
            "{\"id\": \"x\", \"lang\": \"en\", \"text\": \"b\"}\n");
        CHECK_THROWS_WITH_AS(Corpus::load_jsonl(p),
                             doctest::Contains("dup.jsonl:2"), DataError);
    }
    SUBCASE("missing lang") {
        const auto p = write_jsonl(dir, "nolang.jsonl", "{\"id\": \"x\", \"text\": \"a\"}\n");
        CHECK_THROWS_AS(Corpus::load_jsonl(p), DataError);
    }
    SUBCASE("invalid json") {
        const auto p = write_jsonl(dir, "bad.jsonl", "{nope}\n");
        CHECK_THROWS_WITH_AS(Corpus::load_jsonl(p),
                             doctest::Contains("bad.jsonl:1"), DataError);
    }
    SUBCASE("empty file") {
        const auto p = write_jsonl(dir, "empty.jsonl", "");
        CHECK_THROWS_AS(Corpus::load_jsonl(p), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(Corpus::load_jsonl(dir / "absent.jsonl"), DataError);
    }
}

TEST_CASE("query loader validates shape") {
    const auto dir = testutil::scratch_dir("queries");
    SUBCASE("well-formed") {
        const auto p = write_jsonl(dir, "q.jsonl",
            "{\"id\": \"q1\", \"lang\": \"de\", \"question\": \"Wo?\", \"golds\": [\"Berlin\"]}\n");
        const auto qs = load_queries(p);
        REQUIRE(qs.size() == 1);
        CHECK(qs[0].golds == std::vector<std::string>{"Berlin"});
    }
    SUBCASE("empty golds rejected") {
        const auto p = write_jsonl(dir, "q0.jsonl",
            "{\"id\": \"q1\", \"lang\": \"de\", \"question\": \"Wo?\", \"golds\": []}\n");
        CHECK_THROWS_AS(load_queries(p), DataError);
    }
    SUBCASE("duplicate query id rejected") {
        const auto p = write_jsonl(dir, "qd.jsonl",
            "{\"id\": \"q1\", \"lang\": \"de\", \"question\": \"Wo?\", \"golds\": [\"B\"]}\n"
            "{\"id\": \"q1\", \"lang\": \"de\", \"question\": \"Wo?\", \"golds\": [\"B\"]}\n");
        CHECK_THROWS_AS(load_queries(p), DataError);
    }
}

TEST_CASE("resource classes") {
    const ResourceClasses rc;
    CHECK(rc.classify("en") == ResourceClass::HR);
    CHECK(rc.classify("zh") == ResourceClass::HR);
    CHECK(rc.classify("fi") == ResourceClass::LR);
    CHECK(rc.classify("ko") == ResourceClass::LR);
    CHECK(rc.classify("xx") == ResourceClass::LR);

    const auto dir = testutil::scratch_dir("rc");
    const auto p = dir / "rc.json";
    std::ofstream(p) << "{\"hr\": [\"fi\"]}";
    const auto custom = ResourceClasses::from_file(p.string());
    CHECK(custom.classify("fi") == ResourceClass::HR);
    CHECK(custom.classify("en") == ResourceClass::LR);
}

TEST_CASE("language registry") {
    CHECK(known_language("ko"));
    CHECK_FALSE(known_language("xx"));
    CHECK(language_name("fi") == "Finnish");
    CHECK(language_name("te") == "Telugu");
    CHECK(language_name("xx") == "xx");
    CHECK(language_registry().size() == 17);
}

} // TEST_SUITE
