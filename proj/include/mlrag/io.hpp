#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace mlrag {

using json = nlohmann::json;

// Hex-encoded SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

// FNV-1a 64-bit. Stable across platforms; used wherever a cheap
// deterministic hash of a byte string is needed.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Whole-file read. Throws DataError if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temp file and atomic rename, so readers never see a
// partially written file. Creates parent directories as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Calls `fn(line_no, line)` for every line of a JSONL file, skipping blank
// lines. `line` arrives parsed; parse failures raise DataError naming the
// file and line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const json&)>& fn);

// Serializes `j` with sorted keys and no trailing newline. All persisted
// JSON goes through this so byte-level comparisons are meaningful.
std::string canonical_json(const json& j);

} // namespace mlrag
