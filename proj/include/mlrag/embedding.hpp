#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mlrag {

// Text embedding interface. Vectors are L2-normalized doubles; text that
// normalizes to nothing embeds to the all-zero vector, which marks it
// non-indexable. `id()` feeds cache keys, so it must change whenever the
// embedding function changes.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::string id() const = 0;
    virtual std::size_t dim() const = 0;
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

// Deterministic hashed character n-gram embedder (n = 2 and 3 over the
// normalized, space-padded text; FNV-1a of each gram's UTF-8 bytes picks
// the bucket). Needs no model files and behaves identically on every
// platform. The space padding guarantees non-empty normalized text always
// produces at least one gram, so only empty text maps to zero.
class NgramEmbedder : public Embedder {
public:
    explicit NgramEmbedder(std::size_t dim = 512);

    std::string id() const override;
    std::size_t dim() const override { return dim_; }
    std::vector<double> embed(std::string_view text) const override;

private:
    std::size_t dim_;
};

// Embedder backed by a provider endpoint speaking the embed wire schema
// ({"text","dim"} in, {"values"} out). Responses flow through the hub, so
// they are cached, retried and call-logged like any other provider traffic.
class ProviderHub;
class RemoteEmbedder : public Embedder {
public:
    RemoteEmbedder(ProviderHub& hub, std::string endpoint_id, std::size_t dim);

    std::string id() const override;
    std::size_t dim() const override { return dim_; }
    std::vector<double> embed(std::string_view text) const override;

private:
    ProviderHub* hub_;
    std::string endpoint_id_;
    std::size_t dim_;
};

bool is_zero_vector(const std::vector<double>& v);

// Plain left-to-right dot product. Every scoring path uses this one
// function so results are bit-identical everywhere.
double dot(const std::vector<double>& a, const std::vector<double>& b);

} // namespace mlrag
