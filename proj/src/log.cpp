#include "mlrag/log.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <string>

namespace mlrag {

namespace {

std::atomic<LogLevel> g_level{LogLevel::Info};
std::mutex g_mutex;

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::Debug: return "DEBUG";
        case LogLevel::Info:  return "INFO";
        case LogLevel::Warn:  return "WARN";
        case LogLevel::Error: return "ERROR";
        default:              return "?";
    }
}

// Values containing spaces, quotes or '=' get quoted so lines stay
// splittable on whitespace.
std::string render_value(const std::string& v) {
    bool needs_quote = v.empty();
    for (char c : v) {
        if (c == ' ' || c == '"' || c == '=' || c == '\n' || c == '\t') {
            needs_quote = true;
            break;
        }
    }
    if (!needs_quote) {
        return v;
    }
    std::string out = "\"";
    for (char c : v) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace

void set_log_level(LogLevel level) {
    g_level.store(level, std::memory_order_relaxed);
}

LogLevel log_level() {
    return g_level.load(std::memory_order_relaxed);
}

void log(LogLevel level, std::string_view event, std::initializer_list<LogField> fields) {
    if (static_cast<int>(level) < static_cast<int>(log_level())) {
        return;
    }
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char ts[32];
    std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", &tm);

    std::string line = std::string(ts) + " " + level_tag(level) + " " + std::string(event);
    for (const auto& [key, value] : fields) {
        line += " ";
        line += key;
        line += "=";
        line += render_value(value);
    }
    line += "\n";

    std::lock_guard<std::mutex> lock(g_mutex);
    std::fputs(line.c_str(), stderr);
}

} // namespace mlrag
