#include <doctest.h>

#include <cmath>

#include "mlrag/io.hpp"
#include "mlrag/metrics.hpp"
#include "test_util.hpp"

using namespace mlrag;

TEST_SUITE("metrics") {

TEST_CASE("frozen oracle table") {
    std::size_t n = 0;
    for_each_jsonl(testutil::fixture("metrics_oracle.jsonl"), [&](std::size_t, const json& j) {
        ++n;
        const std::string pred = j.at("prediction").get<std::string>();
        const std::vector<std::string> golds = j.at("golds").get<std::vector<std::string>>();
        CAPTURE(j.at("id").get<std::string>());
        CAPTURE(j.at("note").get<std::string>());
        CHECK(flexible_em(pred, golds) == j.at("em").get<int>());
        CHECK(std::abs(char_3gram_recall(pred, golds) - j.at("recall3").get<double>()) <= 1e-9);
    });
    CHECK(n >= 50);
}

TEST_CASE("em is substring based, not equality based") {
    CHECK(flexible_em("the capital is Paris, France", {"paris"}) == 1);
    CHECK(flexible_em("pari", {"paris"}) == 0);
}

TEST_CASE("recall bounds") {
    // Property: recall always lands in [0, 1].
    const std::vector<std::string> preds = {"", "a", "abab", "xyz xyz", "北京"};
    const std::vector<std::string> golds = {"", "ab", "abcd", "北京大学"};
    for (const auto& p : preds) {
        for (const auto& g : golds) {
            const double r = char_3gram_recall(p, {g});
            CHECK(r >= 0.0);
            CHECK(r <= 1.0);
        }
    }
}

TEST_CASE("perfect prediction scores 1 on both metrics") {
    const std::vector<std::string> answers = {"Aqua", "new york city", "북한산", "8 9"};
    for (const auto& a : answers) {
        CHECK(flexible_em(a, {a}) == 1);
        CHECK(char_3gram_recall(a, {a}) == doctest::Approx(1.0));
    }
}

} // TEST_SUITE
