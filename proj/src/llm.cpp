#include "mlrag/llm.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "mlrag/corpus.hpp"
#include "mlrag/errors.hpp"
#include "mlrag/metrics.hpp"
#include "mlrag/textnorm.hpp"

namespace mlrag {

LlmClient::LlmClient(ProviderHub& hub, std::string endpoint_id)
    : hub_(hub), endpoint_id_(std::move(endpoint_id)) {
    if (!hub_.has_endpoint(endpoint_id_)) {
        throw UsageError("llm endpoint '" + endpoint_id_ + "' is not registered");
    }
    if (hub_.kind_of(endpoint_id_) != ProviderKind::LLM) {
        throw UsageError("endpoint '" + endpoint_id_ + "' is not an llm endpoint");
    }
}

LlmClient::Completion LlmClient::complete(const std::string& prompt) {
    if (prompt.empty()) {
        throw UsageError("cannot complete an empty prompt");
    }
    const json request = {{"prompt", prompt}, {"temperature", 0.0}, {"max_tokens", 2048}};
    auto res = hub_.call(endpoint_id_, request);
    if (!res.response.is_object() || !res.response.contains("text") ||
        !res.response["text"].is_string()) {
        throw ProviderError("endpoint '" + endpoint_id_ + "': llm response missing 'text'");
    }
    return Completion{res.response["text"].get<std::string>(), res.cached};
}

namespace {

struct PromptView {
    std::string question;
    std::vector<std::string> evidence;
};

// Parses the prompt format produced by render_prompt. Lines of the
// evidence section look like "[3] text" or "[3] (de) text"; continuation
// lines (rare, only if a passage contains newlines) attach to the current
// item.
PromptView parse_prompt(const std::string& prompt) {
    PromptView out;
    const std::string ev_marker = "#Reference Evidence:\n";
    const std::string q_marker = "#Question: ";
    const std::size_t ev_pos = prompt.find(ev_marker);
    const std::size_t q_pos = prompt.rfind(q_marker);
    if (q_pos == std::string::npos) {
        throw ProviderError("mock llm: prompt has no #Question section");
    }
    out.question = trim(prompt.substr(q_pos + q_marker.size()));

    if (ev_pos == std::string::npos || ev_pos > q_pos) {
        throw ProviderError("mock llm: prompt has no #Reference Evidence section");
    }
    std::size_t pos = ev_pos + ev_marker.size();
    std::string current;
    const auto flush = [&]() {
        if (!current.empty()) {
            out.evidence.push_back(current);
            current.clear();
        }
    };
    while (pos < q_pos) {
        std::size_t eol = prompt.find('\n', pos);
        if (eol == std::string::npos || eol > q_pos) {
            eol = q_pos;
        }
        std::string line = prompt.substr(pos, eol - pos);
        pos = eol + 1;
        if (trim(line).empty()) {
            continue;
        }
        if (line.size() >= 3 && line[0] == '[') {
            const std::size_t close = line.find("] ");
            if (close != std::string::npos && close <= 12) {
                flush();
                std::string body = line.substr(close + 2);
                // Optional "(lang) " annotation.
                if (body.size() > 3 && body[0] == '(') {
                    const std::size_t paren = body.find(") ");
                    if (paren != std::string::npos && paren <= 8) {
                        body = body.substr(paren + 2);
                    }
                }
                current = body;
                continue;
            }
        }
        if (!current.empty()) {
            current += "\n" + line;
        }
    }
    flush();
    return out;
}

} // namespace

std::string register_mock_llm(ProviderHub& hub, const std::string& id,
                              const std::filesystem::path& queries_path) {
    auto golds_by_question =
        std::make_shared<std::map<std::string, std::vector<std::string>>>();
    for (const QueryItem& q : load_queries(queries_path)) {
        (*golds_by_question)[q.question] = q.golds;
    }
    const std::string fixture_hash = sha256_hex(read_file(queries_path));

    hub.register_mock(id, ProviderKind::LLM, fixture_hash, [golds_by_question](const json& req) {
        std::string prompt;
        try {
            prompt = req.at("prompt").get<std::string>();
        } catch (const json::exception& e) {
            throw ProviderError(std::string("mock llm: bad request: ") + e.what());
        }
        const PromptView view = parse_prompt(prompt);

        const auto it = golds_by_question->find(view.question);
        if (it == golds_by_question->end()) {
            // Unknown question: refuse, deliberately without the answer
            // marker, to exercise parse failure handling downstream.
            return json{{"text", "I cannot find this in the provided evidence."}};
        }
        const std::vector<std::string>& golds = it->second;

        // Canonical scan order, independent of prompt presentation order.
        std::vector<std::string> passages = view.evidence;
        std::sort(passages.begin(), passages.end());
        for (const std::string& passage : passages) {
            for (const std::string& sentence : split_sentences(passage)) {
                if (flexible_em(sentence, golds) == 1) {
                    return json{{"text", "Answer: " + sentence}};
                }
            }
        }
        return json{{"text", "Answer: unknown"}};
    });
    return fixture_hash;
}

} // namespace mlrag
