#include "mlrag/providers.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include "mlrag/errors.hpp"
#include "mlrag/log.hpp"

namespace mlrag {

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

using Semaphore = std::counting_semaphore<4096>;

// RAII slot in an endpoint's concurrency budget.
class SlotGuard {
public:
    explicit SlotGuard(Semaphore* sem) : sem_(sem) {
        if (sem_) {
            sem_->acquire();
        }
    }
    ~SlotGuard() {
        if (sem_) {
            sem_->release();
        }
    }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

private:
    Semaphore* sem_;
};

} // namespace

std::string_view to_string(ProviderKind kind) {
    switch (kind) {
        case ProviderKind::EMBED: return "embed";
        case ProviderKind::TRANSLATE: return "translate";
        case ProviderKind::LLM: return "llm";
    }
    return "?";
}

ProviderKind parse_provider_kind(std::string_view s) {
    if (s == "embed") return ProviderKind::EMBED;
    if (s == "translate") return ProviderKind::TRANSLATE;
    if (s == "llm") return ProviderKind::LLM;
    throw DataError("unknown provider kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// CallLog

void CallLog::append(CallRecord rec) {
    std::lock_guard<std::mutex> lock(mutex_);
    records_.push_back(std::move(rec));
}

std::vector<CallRecord> CallLog::snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return records_;
}

void CallLog::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    records_.clear();
}

std::size_t CallLog::total() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return records_.size();
}

std::size_t CallLog::cache_hits() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(),
                      [](const CallRecord& r) { return r.cached; }));
}

std::size_t CallLog::network_calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(),
                      [](const CallRecord& r) { return r.transport == "http"; }));
}

void CallLog::write_jsonl(const std::filesystem::path& path) const {
    std::string out;
    for (const CallRecord& r : snapshot()) {
        json j = {{"endpoint_id", r.endpoint_id}, {"request_hash", r.request_hash},
                  {"cached", r.cached},           {"latency_ms", r.latency_ms},
                  {"outcome", r.outcome},         {"attempts", r.attempts},
                  {"transport", r.transport}};
        out += canonical_json(j);
        out += '\n';
    }
    write_file_atomic(path, out);
}

// ---------------------------------------------------------------------------
// ResponseCache

ResponseCache::ResponseCache(std::filesystem::path dir, std::uint64_t max_bytes)
    : dir_(std::move(dir)), max_bytes_(max_bytes) {
    if (!dir_.empty()) {
        std::filesystem::create_directories(dir_);
    }
}

std::optional<json> ResponseCache::get(const std::string& key) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (dir_.empty()) {
        auto it = mem_.find(key);
        if (it == mem_.end()) {
            return std::nullopt;
        }
        return it->second;
    }
    const std::filesystem::path p = dir_ / (key + ".json");
    std::error_code ec;
    if (!std::filesystem::exists(p, ec)) {
        return std::nullopt;
    }
    json j;
    try {
        j = json::parse(read_file(p), nullptr, false);
    } catch (const DataError&) {
        return std::nullopt;
    }
    if (j.is_discarded()) {
        // Corrupt entry: drop it and report a miss.
        std::filesystem::remove(p, ec);
        return std::nullopt;
    }
    // Refresh recency for LRU eviction.
    std::filesystem::last_write_time(p, std::filesystem::file_time_type::clock::now(), ec);
    return j;
}

void ResponseCache::put(const std::string& key, const json& response) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (dir_.empty()) {
        mem_[key] = response;
        return;
    }
    write_file_atomic(dir_ / (key + ".json"), canonical_json(response));
    evict_locked();
}

void ResponseCache::evict_locked() {
    struct FileInfo {
        std::filesystem::path path;
        std::uint64_t size;
        std::filesystem::file_time_type mtime;
    };
    std::vector<FileInfo> files;
    std::uint64_t total = 0;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir_, ec)) {
        if (!e.is_regular_file(ec)) {
            continue;
        }
        const std::uint64_t size = e.file_size(ec);
        files.push_back(FileInfo{e.path(), size, e.last_write_time(ec)});
        total += size;
    }
    if (total <= max_bytes_) {
        return;
    }
    std::sort(files.begin(), files.end(), [](const FileInfo& a, const FileInfo& b) {
        if (a.mtime != b.mtime) {
            return a.mtime < b.mtime;
        }
        return a.path < b.path;
    });
    for (const FileInfo& f : files) {
        if (total <= max_bytes_) {
            break;
        }
        std::filesystem::remove(f.path, ec);
        total -= f.size;
        log_debug("cache.evict", {{"path", f.path.filename().string()}});
    }
}

std::size_t ResponseCache::entry_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (dir_.empty()) {
        return mem_.size();
    }
    std::size_t n = 0;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir_, ec)) {
        if (e.is_regular_file(ec)) {
            ++n;
        }
    }
    return n;
}

// ---------------------------------------------------------------------------
// HTTP transport

namespace {

class HttpTransport : public Transport {
public:
    explicit HttpTransport(const std::string& base_url) : client_(base_url) {
        client_.set_connection_timeout(10, 0);
        client_.set_read_timeout(10, 0);
        if (const char* token = std::getenv("MLRAG_PROVIDER_TOKEN")) {
            client_.set_bearer_token_auth(token);
        }
    }

    Result post(const std::string& path, const std::string& json_body) override {
        // httplib clients are not documented thread-safe; serialize.
        std::lock_guard<std::mutex> lock(mutex_);
        auto res = client_.Post(path, json_body, "application/json");
        if (!res) {
            return Result{0, {}};
        }
        return Result{res->status, res->body};
    }

private:
    std::mutex mutex_;
    httplib::Client client_;
};

} // namespace

std::unique_ptr<Transport> make_http_transport(const std::string& base_url) {
    return std::make_unique<HttpTransport>(base_url);
}

std::vector<HttpEndpoint> load_endpoint_registry(const std::filesystem::path& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("endpoints") ||
        !j["endpoints"].is_array()) {
        throw DataError(path.string() + ": endpoint registry must be {\"endpoints\": [...]}");
    }
    std::vector<HttpEndpoint> out;
    for (const auto& e : j["endpoints"]) {
        HttpEndpoint ep;
        try {
            ep.id = e.at("id").get<std::string>();
            ep.kind = parse_provider_kind(e.at("kind").get<std::string>());
            ep.base_url = e.at("base_url").get<std::string>();
            ep.path = e.at("path").get<std::string>();
        } catch (const json::exception& ex) {
            throw DataError(path.string() + ": bad endpoint entry: " + ex.what());
        }
        if (ep.id.empty() || ep.base_url.empty() || ep.path.empty()) {
            throw DataError(path.string() + ": endpoint fields must be non-empty");
        }
        out.push_back(std::move(ep));
    }
    return out;
}

// ---------------------------------------------------------------------------
// ProviderHub

ProviderHub::ProviderHub(Options options)
    : options_(std::move(options)),
      cache_(options_.cache_dir, options_.cache_max_bytes) {
    if (!options_.sleep_fn) {
        options_.sleep_fn = [](double ms) {
            std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
        };
    }
}

void ProviderHub::register_http(HttpEndpoint endpoint, std::unique_ptr<Transport> transport) {
    std::lock_guard<std::mutex> lock(mutex_);
    Endpoint ep;
    ep.kind = endpoint.kind;
    ep.is_mock = false;
    ep.http_path = endpoint.path;
    ep.transport = transport ? std::shared_ptr<Transport>(std::move(transport))
                             : std::shared_ptr<Transport>(make_http_transport(endpoint.base_url));
    ep.slots = std::make_shared<Semaphore>(options_.per_endpoint_concurrency);
    if (!endpoints_.emplace(endpoint.id, std::move(ep)).second) {
        throw UsageError("endpoint '" + endpoint.id + "' registered twice");
    }
}

void ProviderHub::register_mock(std::string id, ProviderKind kind, std::string fixture_hash,
                                std::function<json(const json&)> fn) {
    std::lock_guard<std::mutex> lock(mutex_);
    Endpoint ep;
    ep.kind = kind;
    ep.is_mock = true;
    ep.fixture_hash = std::move(fixture_hash);
    ep.fn = std::move(fn);
    ep.slots = std::make_shared<Semaphore>(options_.per_endpoint_concurrency);
    if (!endpoints_.emplace(id, std::move(ep)).second) {
        throw UsageError("endpoint '" + id + "' registered twice");
    }
}

bool ProviderHub::has_endpoint(const std::string& id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    return endpoints_.count(id) > 0;
}

ProviderKind ProviderHub::kind_of(const std::string& id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = endpoints_.find(id);
    if (it == endpoints_.end()) {
        throw UsageError("unknown provider endpoint '" + id + "'");
    }
    return it->second.kind;
}

double ProviderHub::backoff_delay_ms(const std::string& key, int attempt) const {
    double delay = options_.retry.base_delay_ms;
    for (int i = 1; i < attempt; ++i) {
        delay *= 2.0;
    }
    delay = std::min(delay, options_.retry.max_delay_ms);
    // Jitter in [1.0, 1.5), derived from the call identity so retry timing
    // is reproducible.
    const std::uint64_t h = fnv1a64(key + "#" + std::to_string(attempt));
    const double frac = static_cast<double>(h >> 11) / 9007199254740992.0;  // [0,1)
    return delay * (1.0 + 0.5 * frac);
}

json ProviderHub::execute(const std::string& endpoint_id, const Endpoint& ep,
                          const json& request, const std::string& key, double started_ms) {
    const auto fail = [&](int attempts, const std::string& why) -> ProviderError {
        log_.append(CallRecord{endpoint_id, key, false, now_ms() - started_ms, "failed",
                               attempts, ep.is_mock ? "mock" : "http"});
        log_error("provider.failed", {{"endpoint", endpoint_id}, {"reason", why}});
        return ProviderError("endpoint '" + endpoint_id + "': " + why);
    };

    if (ep.is_mock) {
        json response;
        try {
            response = ep.fn(request);
        } catch (const ProviderError& e) {
            throw fail(1, e.what());
        }
        log_.append(CallRecord{endpoint_id, key, false, now_ms() - started_ms, "ok", 1, "mock"});
        return response;
    }

    const std::string body = canonical_json(request);
    for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
        const Transport::Result res = ep.transport->post(ep.http_path, body);
        if (res.status == 200) {
            json response = json::parse(res.body, nullptr, false);
            if (response.is_discarded()) {
                throw fail(attempt, "response is not valid JSON");
            }
            log_.append(CallRecord{endpoint_id, key, false, now_ms() - started_ms,
                                   attempt > 1 ? "retried_ok" : "ok", attempt, "http"});
            return response;
        }
        const bool transient = res.status == 0 || res.status == 408 || res.status == 429 ||
                               (res.status >= 500 && res.status < 600);
        if (!transient) {
            throw fail(attempt, "HTTP status " + std::to_string(res.status));
        }
        if (attempt == options_.retry.max_attempts) {
            throw fail(attempt, "exhausted retries (last status " +
                                    std::to_string(res.status) + ")");
        }
        const double delay = backoff_delay_ms(key, attempt);
        log_warn("provider.retry", {{"endpoint", endpoint_id},
                                    {"attempt", std::to_string(attempt)},
                                    {"status", std::to_string(res.status)},
                                    {"delay_ms", std::to_string(delay)}});
        options_.sleep_fn(delay);
    }
    throw fail(options_.retry.max_attempts, "unreachable");
}

ProviderHub::CallResult ProviderHub::call(const std::string& endpoint_id, const json& request,
                                          const std::string& cache_material) {
    const double started = now_ms();

    Endpoint ep;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = endpoints_.find(endpoint_id);
        if (it == endpoints_.end()) {
            throw UsageError("unknown provider endpoint '" + endpoint_id + "'");
        }
        ep = it->second;
    }

    const std::string identity =
        ep.is_mock ? endpoint_id + ":" + ep.fixture_hash : endpoint_id;
    const std::string material =
        cache_material.empty() ? canonical_json(request) : cache_material;
    const std::string key = sha256_hex(identity + "\x1f" + material);

    // Cache lookup and in-flight registration happen under one lock so
    // concurrent identical requests coalesce instead of racing.
    std::shared_future<json> fut;
    bool owner = false;
    std::promise<json> promise;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (auto it = in_flight_.find(key); it != in_flight_.end()) {
            fut = it->second;
        } else {
            if (auto hit = cache_.get(key)) {
                log_.append(CallRecord{endpoint_id, key, true, now_ms() - started, "ok", 0,
                                       "cache"});
                return CallResult{std::move(*hit), true};
            }
            owner = true;
            fut = promise.get_future().share();
            in_flight_.emplace(key, fut);
        }
    }

    if (!owner) {
        // Another thread is already producing this response.
        try {
            json response = fut.get();
            log_.append(CallRecord{endpoint_id, key, true, now_ms() - started, "ok", 0,
                                   "cache"});
            return CallResult{std::move(response), true};
        } catch (...) {
            log_.append(CallRecord{endpoint_id, key, true, now_ms() - started, "failed", 0,
                                   "cache"});
            throw;
        }
    }

    const auto finish = [&]() {
        std::lock_guard<std::mutex> lock(mutex_);
        in_flight_.erase(key);
    };

    if (!ep.is_mock && options_.offline) {
        const ProviderError err("offline mode: cache miss for endpoint '" + endpoint_id + "'");
        log_.append(CallRecord{endpoint_id, key, false, now_ms() - started, "failed", 0,
                               "http"});
        promise.set_exception(std::make_exception_ptr(err));
        finish();
        throw err;
    }

    try {
        SlotGuard slot(static_cast<Semaphore*>(ep.slots.get()));
        json response = execute(endpoint_id, ep, request, key, started);
        cache_.put(key, response);
        promise.set_value(response);
        finish();
        return CallResult{std::move(response), false};
    } catch (...) {
        promise.set_exception(std::current_exception());
        finish();
        throw;
    }
}

} // namespace mlrag
