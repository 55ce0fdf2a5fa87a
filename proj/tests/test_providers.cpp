#include <doctest.h>

#include <atomic>
#include <fstream>
#include <thread>

#include "mlrag/errors.hpp"
#include "mlrag/providers.hpp"
#include "test_util.hpp"

using namespace mlrag;

namespace {

// Plays back a fixed sequence of HTTP results; repeats the last one.
class ScriptedTransport : public Transport {
public:
    explicit ScriptedTransport(std::vector<Result> script) : script_(std::move(script)) {}

    Result post(const std::string&, const std::string&) override {
        const int i = calls_++;
        const std::size_t idx = std::min(static_cast<std::size_t>(i), script_.size() - 1);
        return script_[idx];
    }

    int calls() const { return calls_.load(); }

private:
    std::vector<Result> script_;
    std::atomic<int> calls_{0};
};

ProviderHub::Options quiet_options(std::filesystem::path cache_dir = {}) {
    ProviderHub::Options opt;
    opt.cache_dir = std::move(cache_dir);
    opt.sleep_fn = [](double) {};
    return opt;
}

json echo_mock(const json& req) {
    return json{{"echo", req}};
}

} // namespace

TEST_SUITE("providers") {

TEST_CASE("mock calls hit the response cache on repeat") {
    const auto dir = testutil::scratch_dir("hub_cache");
    ProviderHub hub(quiet_options(dir));
    std::atomic<int> executions{0};
    hub.register_mock("m", ProviderKind::LLM, "h1", [&](const json& req) {
        ++executions;
        return echo_mock(req);
    });

    const json req = {{"prompt", "hi"}};
    auto first = hub.call("m", req);
    CHECK_FALSE(first.cached);
    auto second = hub.call("m", req);
    CHECK(second.cached);
    CHECK(first.response == second.response);
    CHECK(executions.load() == 1);

    const auto log = hub.log().snapshot();
    REQUIRE(log.size() == 2);
    CHECK(log[0].transport == "mock");
    CHECK(log[0].outcome == "ok");
    CHECK(log[0].attempts == 1);
    CHECK(log[1].transport == "cache");
    CHECK(log[1].cached);
    CHECK(log[0].request_hash == log[1].request_hash);

    SUBCASE("cache survives into a fresh hub") {
        ProviderHub hub2(quiet_options(dir));
        hub2.register_mock("m", ProviderKind::LLM, "h1", echo_mock);
        CHECK(hub2.call("m", req).cached);
    }
    SUBCASE("changed fixture hash invalidates") {
        ProviderHub hub2(quiet_options(dir));
        hub2.register_mock("m", ProviderKind::LLM, "h2", echo_mock);
        CHECK_FALSE(hub2.call("m", req).cached);
    }
    SUBCASE("cache_material overrides request identity") {
        ProviderHub hub2(quiet_options(dir));
        hub2.register_mock("m", ProviderKind::LLM, "h1", echo_mock);
        auto a = hub2.call("m", {{"prompt", "variant one"}}, "shared-material");
        auto b = hub2.call("m", {{"prompt", "variant two"}}, "shared-material");
        CHECK_FALSE(a.cached);
        CHECK(b.cached);
        CHECK(a.response == b.response);
    }
}

TEST_CASE("transient failures retry with deterministic backoff") {
    std::vector<double> delays;
    auto opt = quiet_options();
    opt.retry.base_delay_ms = 100.0;
    opt.retry.max_delay_ms = 2000.0;
    opt.sleep_fn = [&](double ms) { delays.push_back(ms); };
    ProviderHub hub(opt);

    auto transport = std::make_unique<ScriptedTransport>(std::vector<Transport::Result>{
        {503, ""}, {0, ""}, {200, "{\"text\": \"done\"}"}});
    auto* raw = transport.get();
    hub.register_http({"llm", ProviderKind::LLM, "http://unused", "/v1"}, std::move(transport));

    auto res = hub.call("llm", {{"prompt", "x"}});
    CHECK(res.response.at("text") == "done");
    CHECK(raw->calls() == 3);
    REQUIRE(delays.size() == 2);
    // Exponential base with bounded jitter.
    CHECK(delays[0] >= 100.0);
    CHECK(delays[0] < 150.0);
    CHECK(delays[1] >= 200.0);
    CHECK(delays[1] < 300.0);

    const auto log = hub.log().snapshot();
    REQUIRE(log.size() == 1);
    CHECK(log[0].outcome == "retried_ok");
    CHECK(log[0].attempts == 3);
    CHECK(log[0].transport == "http");

    SUBCASE("identical call replays identical delays") {
        std::vector<double> delays2;
        auto opt2 = quiet_options();
        opt2.sleep_fn = [&](double ms) { delays2.push_back(ms); };
        ProviderHub hub2(opt2);
        hub2.register_http({"llm", ProviderKind::LLM, "http://unused", "/v1"},
                           std::make_unique<ScriptedTransport>(std::vector<Transport::Result>{
                               {503, ""}, {0, ""}, {200, "{\"text\": \"done\"}"}}));
        hub2.call("llm", {{"prompt", "x"}});
        CHECK(delays2 == delays);
    }
}

TEST_CASE("non-transient HTTP failures do not retry") {
    ProviderHub hub(quiet_options());
    auto transport = std::make_unique<ScriptedTransport>(
        std::vector<Transport::Result>{{404, "nope"}});
    auto* raw = transport.get();
    hub.register_http({"e", ProviderKind::EMBED, "http://unused", "/v1"}, std::move(transport));

    CHECK_THROWS_WITH_AS(hub.call("e", {{"text", "x"}, {"dim", 8}}),
                         doctest::Contains("404"), ProviderError);
    CHECK(raw->calls() == 1);
    const auto log = hub.log().snapshot();
    REQUIRE(log.size() == 1);
    CHECK(log[0].outcome == "failed");
}

TEST_CASE("exhausted retries fail") {
    auto opt = quiet_options();
    opt.retry.max_attempts = 2;
    ProviderHub hub(opt);
    hub.register_http({"e", ProviderKind::EMBED, "http://unused", "/v1"},
                      std::make_unique<ScriptedTransport>(
                          std::vector<Transport::Result>{{503, ""}}));
    CHECK_THROWS_AS(hub.call("e", {{"text", "x"}}), ProviderError);
    const auto log = hub.log().snapshot();
    REQUIRE(log.size() == 1);
    CHECK(log[0].attempts == 2);
    CHECK(log[0].outcome == "failed");
}

TEST_CASE("malformed response body fails without retry") {
    ProviderHub hub(quiet_options());
    hub.register_http({"e", ProviderKind::EMBED, "http://unused", "/v1"},
                      std::make_unique<ScriptedTransport>(
                          std::vector<Transport::Result>{{200, "not json"}}));
    CHECK_THROWS_WITH_AS(hub.call("e", {{"text", "x"}}),
                         doctest::Contains("JSON"), ProviderError);
}

TEST_CASE("offline mode") {
    const auto dir = testutil::scratch_dir("hub_offline");
    const json req = {{"prompt", "q"}};

    // Prefill the cache online.
    {
        ProviderHub hub(quiet_options(dir));
        hub.register_http({"llm", ProviderKind::LLM, "http://unused", "/v1"},
                          std::make_unique<ScriptedTransport>(std::vector<Transport::Result>{
                              {200, "{\"text\": \"warm\"}"}}));
        hub.call("llm", req);
    }

    auto opt = quiet_options(dir);
    opt.offline = true;
    ProviderHub hub(opt);
    auto transport = std::make_unique<ScriptedTransport>(
        std::vector<Transport::Result>{{200, "{\"text\": \"never\"}"}});
    auto* raw = transport.get();
    hub.register_http({"llm", ProviderKind::LLM, "http://unused", "/v1"}, std::move(transport));
    hub.register_mock("mk", ProviderKind::LLM, "h", echo_mock);

    SUBCASE("cache hits are served") {
        auto res = hub.call("llm", req);
        CHECK(res.cached);
        CHECK(res.response.at("text") == "warm");
        CHECK(raw->calls() == 0);
    }
    SUBCASE("cache misses refuse to touch the network") {
        CHECK_THROWS_WITH_AS(hub.call("llm", {{"prompt", "cold"}}),
                             doctest::Contains("offline"), ProviderError);
        CHECK(raw->calls() == 0);
    }
    SUBCASE("mock endpoints still work offline") {
        CHECK_FALSE(hub.call("mk", req).cached);
    }
}

TEST_CASE("LRU eviction keeps recently used entries") {
    const auto dir = testutil::scratch_dir("hub_lru");
    auto opt = quiet_options(dir);
    // Each cached response here is 9 bytes; cap to two entries.
    opt.cache_max_bytes = 20;
    ProviderHub hub(opt);
    std::atomic<int> executions{0};
    hub.register_mock("m", ProviderKind::LLM, "h", [&](const json& req) {
        ++executions;
        return json{{"r", req.at("q")}};
    });

    hub.call("m", {{"q", "a"}});
    hub.call("m", {{"q", "b"}});
    hub.call("m", {{"q", "a"}});  // refresh a
    hub.call("m", {{"q", "c"}});  // evicts b
    executions = 0;
    CHECK(hub.call("m", {{"q", "a"}}).cached);
    CHECK(hub.call("m", {{"q", "c"}}).cached);
    CHECK_FALSE(hub.call("m", {{"q", "b"}}).cached);
    CHECK(executions.load() == 1);
}

TEST_CASE("concurrent identical calls coalesce onto one execution") {
    ProviderHub hub(quiet_options());
    std::atomic<int> executions{0};
    hub.register_mock("m", ProviderKind::LLM, "h", [&](const json& req) {
        ++executions;
        std::this_thread::sleep_for(std::chrono::milliseconds(30));
        return echo_mock(req);
    });

    const json req = {{"prompt", "same"}};
    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int i = 0; i < 4; ++i) {
        threads.emplace_back([&] {
            if (hub.call("m", req).response.contains("echo")) {
                ++ok;
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    CHECK(ok.load() == 4);
    CHECK(executions.load() == 1);
    CHECK(hub.log().total() == 4);
    CHECK(hub.log().cache_hits() == 3);
}

TEST_CASE("unknown endpoint is a usage error") {
    ProviderHub hub(quiet_options());
    CHECK_THROWS_AS(hub.call("nope", {{"x", 1}}), UsageError);
}

TEST_CASE("endpoint registry parsing") {
    const auto dir = testutil::scratch_dir("registry");
    SUBCASE("well-formed") {
        const auto p = dir / "providers.json";
        std::ofstream(p) << R"({"endpoints": [
            {"id": "emb1", "kind": "embed", "base_url": "http://h:1", "path": "/embed"},
            {"id": "mt1", "kind": "translate", "base_url": "http://h:2", "path": "/mt"}
        ]})";
        const auto eps = load_endpoint_registry(p);
        REQUIRE(eps.size() == 2);
        CHECK(eps[0].id == "emb1");
        CHECK(eps[1].kind == ProviderKind::TRANSLATE);
    }
    SUBCASE("bad kind") {
        const auto p = dir / "bad.json";
        std::ofstream(p) << R"({"endpoints": [{"id": "x", "kind": "guess", "base_url": "u", "path": "/p"}]})";
        CHECK_THROWS_AS(load_endpoint_registry(p), DataError);
    }
    SUBCASE("wrong shape") {
        const auto p = dir / "shape.json";
        std::ofstream(p) << R"(["nope"])";
        CHECK_THROWS_AS(load_endpoint_registry(p), DataError);
    }
}

TEST_CASE("call log jsonl output") {
    const auto dir = testutil::scratch_dir("calllog");
    ProviderHub hub(quiet_options());
    hub.register_mock("m", ProviderKind::LLM, "h", echo_mock);
    hub.call("m", {{"p", 1}});
    hub.call("m", {{"p", 1}});
    const auto path = dir / "call_log.jsonl";
    hub.log().write_jsonl(path);

    std::size_t lines = 0;
    for_each_jsonl(path, [&](std::size_t, const json& j) {
        ++lines;
        CHECK(j.contains("endpoint_id"));
        CHECK(j.contains("request_hash"));
        CHECK(j.contains("cached"));
        CHECK(j.contains("outcome"));
        CHECK(j.contains("attempts"));
        CHECK(j.contains("transport"));
        CHECK(j.contains("latency_ms"));
    });
    CHECK(lines == 2);
}

} // TEST_SUITE
