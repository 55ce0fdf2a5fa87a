#include "mlrag/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <openssl/evp.h>

#include "mlrag/errors.hpp"

namespace mlrag {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr)) {
        throw DataError("sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw DataError("read failed: " + path.string());
    }
    return std::move(ss).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    const fs::path dir = path.parent_path();
    if (!dir.empty()) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) {
            throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
        }
    }
    // Temp name is derived from the content hash so concurrent writers of
    // identical content cannot corrupt each other.
    const fs::path tmp =
        path.string() + ".tmp." + sha256_hex(content).substr(0, 12);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot open for write: " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw DataError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("rename failed for " + path.string() + ": " + ec.message());
    }
}

void for_each_jsonl(const fs::path& path,
                    const std::function<void(std::size_t, const json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        bool blank = true;
        for (char c : line) {
            if (c != ' ' && c != '\t') {
                blank = false;
                break;
            }
        }
        if (blank) {
            continue;
        }
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": invalid JSON line");
        }
        fn(line_no, j);
    }
}

std::string canonical_json(const json& j) {
    // nlohmann::json already stores object keys sorted; dump() is therefore
    // canonical as long as all writers go through this helper.
    return j.dump();
}

} // namespace mlrag
