#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mlrag/io.hpp"

namespace mlrag {

// Every embedding, translation and generation request funnels through one
// gate (ProviderHub::call) that handles response caching, retries with
// deterministic jitter, offline enforcement and call accounting. Wire
// schemas, all JSON over POST for HTTP endpoints:
//   embed:     {"text": s, "dim": n}                  -> {"values": [f64...]}
//   translate: {"text": s, "src": code, "tgt": code}  -> {"text": s, "detected_src": code}
//   llm:       {"prompt": s, "temperature": f, "max_tokens": n} -> {"text": s}
// Mock endpoints implement the same schemas in-process.

enum class ProviderKind { EMBED, TRANSLATE, LLM };

std::string_view to_string(ProviderKind kind);
ProviderKind parse_provider_kind(std::string_view s);

struct CallRecord {
    std::string endpoint_id;
    std::string request_hash;
    bool cached = false;
    double latency_ms = 0.0;
    std::string outcome;    // ok | retried_ok | failed
    int attempts = 0;
    std::string transport;  // mock | cache | http
};

// Thread-safe append-only account of provider traffic. Not part of any
// hashed artifact: latencies make it inherently non-deterministic.
class CallLog {
public:
    void append(CallRecord rec);
    std::vector<CallRecord> snapshot() const;
    void clear();

    std::size_t total() const;
    std::size_t cache_hits() const;
    std::size_t network_calls() const;  // transport == "http"

    void write_jsonl(const std::filesystem::path& path) const;

private:
    mutable std::mutex mutex_;
    std::vector<CallRecord> records_;
};

// Content-addressed response store. With a directory it persists entries
// as <key>.json and evicts least-recently-used files over the byte cap;
// without one it degrades to a plain in-memory map.
class ResponseCache {
public:
    ResponseCache(std::filesystem::path dir, std::uint64_t max_bytes);

    std::optional<json> get(const std::string& key);
    void put(const std::string& key, const json& response);

    std::size_t entry_count() const;

private:
    void evict_locked();

    std::filesystem::path dir_;
    std::uint64_t max_bytes_;
    mutable std::mutex mutex_;
    std::map<std::string, json> mem_;
};

// One HTTP attempt. Status 0 means the attempt never produced a response
// (connect failure, timeout); the retry policy treats that as transient.
class Transport {
public:
    struct Result {
        int status = 0;
        std::string body;
    };

    virtual ~Transport() = default;
    virtual Result post(const std::string& path, const std::string& json_body) = 0;
};

std::unique_ptr<Transport> make_http_transport(const std::string& base_url);

struct HttpEndpoint {
    std::string id;
    ProviderKind kind;
    std::string base_url;
    std::string path;
};

// Loads {"endpoints": [{"id", "kind", "base_url", "path"}...]}.
std::vector<HttpEndpoint> load_endpoint_registry(const std::filesystem::path& path);

struct RetryPolicy {
    int max_attempts = 3;
    double base_delay_ms = 100.0;
    double max_delay_ms = 2000.0;
};

class ProviderHub {
public:
    struct Options {
        std::filesystem::path cache_dir;  // empty: in-memory cache only
        std::uint64_t cache_max_bytes = 256ull << 20;
        bool offline = false;
        int per_endpoint_concurrency = 4;
        RetryPolicy retry;
        // Injectable for tests; defaults to a real sleep.
        std::function<void(double /*ms*/)> sleep_fn;
    };

    explicit ProviderHub(Options options);

    // `transport` defaults to a real HTTP client; tests inject fakes.
    void register_http(HttpEndpoint endpoint, std::unique_ptr<Transport> transport = nullptr);

    // `fixture_hash` versions the mock's behavior in cache keys, so a
    // changed fixture can never be served stale responses.
    void register_mock(std::string id, ProviderKind kind, std::string fixture_hash,
                       std::function<json(const json&)> fn);

    bool has_endpoint(const std::string& id) const;
    ProviderKind kind_of(const std::string& id) const;

    struct CallResult {
        json response;
        bool cached = false;
    };

    // `cache_material`, when non-empty, replaces the canonical request as
    // the cached identity of this call (the endpoint identity is always
    // mixed in). Concurrent identical calls coalesce onto one execution.
    CallResult call(const std::string& endpoint_id, const json& request,
                    const std::string& cache_material = "");

    CallLog& log() { return log_; }
    const Options& options() const { return options_; }

private:
    struct Endpoint {
        ProviderKind kind;
        bool is_mock = false;
        std::string fixture_hash;
        std::function<json(const json&)> fn;
        std::string http_path;
        std::shared_ptr<Transport> transport;
        std::shared_ptr<void> slots;  // counting semaphore, type-erased
    };

    json execute(const std::string& endpoint_id, const Endpoint& ep, const json& request,
                 const std::string& key, double started_ms);
    double backoff_delay_ms(const std::string& key, int attempt) const;

    Options options_;
    ResponseCache cache_;
    CallLog log_;
    mutable std::mutex mutex_;
    std::map<std::string, Endpoint> endpoints_;
    std::map<std::string, std::shared_future<json>> in_flight_;
};

} // namespace mlrag
