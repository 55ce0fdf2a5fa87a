#include "mlrag/embedding.hpp"

#include <cassert>
#include <cmath>

#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"
#include "mlrag/providers.hpp"
#include "mlrag/textnorm.hpp"
#include "mlrag/unicode.hpp"

namespace mlrag {

NgramEmbedder::NgramEmbedder(std::size_t dim) : dim_(dim) {
    if (dim_ < 8) {
        throw UsageError("embedding dimension must be at least 8");
    }
}

std::string NgramEmbedder::id() const {
    return "ngram23-v1-d" + std::to_string(dim_);
}

std::vector<double> NgramEmbedder::embed(std::string_view text) const {
    std::vector<double> vec(dim_, 0.0);
    const std::string norm = normalize_for_match(text);
    if (norm.empty()) {
        return vec;
    }
    const std::u32string padded = U" " + decode_utf8(norm) + U" ";
    for (std::size_t n = 2; n <= 3; ++n) {
        if (padded.size() < n) {
            continue;
        }
        for (std::size_t i = 0; i + n <= padded.size(); ++i) {
            const std::string gram = encode_utf8(std::u32string_view(padded).substr(i, n));
            vec[fnv1a64(gram) % dim_] += 1.0;
        }
    }
    double sum_sq = 0.0;
    for (double v : vec) {
        sum_sq += v * v;
    }
    // Padding guarantees at least one bigram for non-empty normalized text.
    assert(sum_sq > 0.0);
    const double inv = 1.0 / std::sqrt(sum_sq);
    for (double& v : vec) {
        v *= inv;
    }
    return vec;
}

RemoteEmbedder::RemoteEmbedder(ProviderHub& hub, std::string endpoint_id, std::size_t dim)
    : hub_(&hub), endpoint_id_(std::move(endpoint_id)), dim_(dim) {
    if (dim_ < 8) {
        throw UsageError("embedding dimension must be at least 8");
    }
}

std::string RemoteEmbedder::id() const {
    return endpoint_id_ + "-d" + std::to_string(dim_);
}

std::vector<double> RemoteEmbedder::embed(std::string_view text) const {
    nlohmann::json req{{"text", std::string(text)}, {"dim", dim_}};
    const auto result = hub_->call(endpoint_id_, req);
    const auto it = result.response.find("values");
    if (it == result.response.end() || !it->is_array()) {
        throw ProviderError("embed endpoint " + endpoint_id_ + " returned no values array");
    }
    std::vector<double> vec;
    vec.reserve(it->size());
    for (const auto& x : *it) {
        if (!x.is_number()) {
            throw ProviderError("embed endpoint " + endpoint_id_ + " returned a non-numeric value");
        }
        vec.push_back(x.get<double>());
    }
    if (vec.size() != dim_) {
        throw ProviderError("embed endpoint " + endpoint_id_ + " returned " +
                            std::to_string(vec.size()) + " values, expected " +
                            std::to_string(dim_));
    }
    return vec;
}

bool is_zero_vector(const std::vector<double>& v) {
    for (double x : v) {
        if (x != 0.0) {
            return false;
        }
    }
    return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

} // namespace mlrag
