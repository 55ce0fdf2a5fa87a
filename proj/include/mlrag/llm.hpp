#pragma once

#include <filesystem>
#include <string>

#include "mlrag/providers.hpp"

namespace mlrag {

// Generation endpoint wrapper. Requests are pinned to temperature 0 and a
// fixed token budget so identical prompts are identical requests.
class LlmClient {
public:
    LlmClient(ProviderHub& hub, std::string endpoint_id);

    struct Completion {
        std::string text;
        bool cached = false;
    };

    Completion complete(const std::string& prompt);

    const std::string& endpoint_id() const { return endpoint_id_; }

private:
    ProviderHub& hub_;
    std::string endpoint_id_;
};

// Registers an extractive mock LLM built from a query set. The mock parses
// its own prompt: it reads the question from the #Question: section, looks
// up that question's gold answers, and scans the reference evidence for
// the first sentence containing one. Evidence passages are scanned in a
// canonical order (lexicographic by passage text), never in presentation
// order, so reordering the prompt evidence cannot change the output.
// Replies "Answer: <sentence>", "Answer: unknown" when no passage helps,
// and a markerless refusal for questions absent from the fixture. Returns
// the fixture content hash.
std::string register_mock_llm(ProviderHub& hub, const std::string& id,
                              const std::filesystem::path& queries_path);

} // namespace mlrag
