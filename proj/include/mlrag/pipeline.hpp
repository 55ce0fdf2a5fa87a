#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mlrag/llm.hpp"
#include "mlrag/prompt.hpp"
#include "mlrag/retrieval.hpp"
#include "mlrag/translation.hpp"

namespace mlrag {

// The four retrieval-augmented answering modes:
//   MONO   retrieve in the query's language only
//   TRAG   translate the query to English, retrieve in English
//   MULTI  retrieve across English plus the query language (or wider)
//   CROSS  like MULTI, then translate the selected evidence to English
enum class Strategy { MONO, TRAG, MULTI, CROSS };

Strategy parse_strategy(std::string_view s);  // mono | trag | multi | cross
std::string_view to_string(Strategy s);
Scope default_scope(Strategy s);

struct PipelineConfig {
    Strategy strategy = Strategy::MONO;
    std::optional<Scope> scope;  // overrides the strategy default
    std::size_t k_retrieve = 50;
    std::size_t k_context = 5;
    Perturbation perturb = Perturbation::ORIGINAL;
    std::uint64_t seed = 1;
    std::string trag_prompt_lang = "sl";  // question shown to the model: sl | en
    bool annotate_evidence_lang = false;
};

// Everything observable about one query's trip through a strategy.
struct QueryRun {
    std::string query_id;
    std::string query_lang;
    std::string question;
    Strategy strategy = Strategy::MONO;
    std::vector<std::string> scope_langs;
    std::string translated_query;          // TRAG only, else empty
    std::vector<RetrievedDoc> retrieved;   // first-stage top k_retrieve
    std::vector<EvidenceItem> evidence;    // final prompt order
    std::string prompt;
    std::string raw_output;
    std::string parsed_answer;
    bool parse_failed = false;
    bool short_context = false;            // bucket had fewer than k_context docs
    int em = 0;
    double recall3 = 0.0;
    std::string pred_lang;                 // empty when no detector wired
    int lang_correct = 0;
    bool used_cached_responses = false;    // any provider call served from cache
};

// Text a document contributes to prompts and to evidence translation.
std::string evidence_text(const Document& d);

class Pipeline {
public:
    struct Deps {
        Retriever* retriever = nullptr;
        LlmClient* llm = nullptr;
        Translator* translator = nullptr;  // required by TRAG and CROSS
        std::function<std::string(std::string_view)> detect_lang;  // optional
    };

    explicit Pipeline(Deps deps);

    QueryRun run_query(const QueryItem& query, const PipelineConfig& config);

private:
    Deps deps_;
};

} // namespace mlrag
