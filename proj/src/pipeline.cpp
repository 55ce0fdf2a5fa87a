#include "mlrag/pipeline.hpp"

#include "mlrag/errors.hpp"
#include "mlrag/metrics.hpp"
#include "mlrag/types.hpp"

namespace mlrag {

Strategy parse_strategy(std::string_view s) {
    if (s == "mono") return Strategy::MONO;
    if (s == "trag") return Strategy::TRAG;
    if (s == "multi") return Strategy::MULTI;
    if (s == "cross") return Strategy::CROSS;
    throw UsageError("unknown strategy '" + std::string(s) +
                     "' (expected mono, trag, multi, cross)");
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::MONO: return "mono";
        case Strategy::TRAG: return "trag";
        case Strategy::MULTI: return "multi";
        case Strategy::CROSS: return "cross";
    }
    return "?";
}

Scope default_scope(Strategy s) {
    switch (s) {
        case Strategy::MONO: return Scope::SL;
        case Strategy::TRAG: return Scope::EN;
        case Strategy::MULTI: return Scope::EN_PLUS_SL;
        case Strategy::CROSS: return Scope::EN_PLUS_SL;
    }
    return Scope::SL;
}

std::string evidence_text(const Document& d) {
    if (d.title.empty()) {
        return d.text;
    }
    return d.title + ". " + d.text;
}

Pipeline::Pipeline(Deps deps) : deps_(std::move(deps)) {
    if (deps_.retriever == nullptr || deps_.llm == nullptr) {
        throw UsageError("pipeline needs a retriever and an llm client");
    }
}

QueryRun Pipeline::run_query(const QueryItem& query, const PipelineConfig& config) {
    if (config.k_context > config.k_retrieve) {
        throw UsageError("k_context cannot exceed k_retrieve");
    }
    if (config.trag_prompt_lang != "sl" && config.trag_prompt_lang != "en") {
        throw UsageError("trag_prompt_lang must be 'sl' or 'en'");
    }
    const bool needs_translator =
        config.strategy == Strategy::TRAG || config.strategy == Strategy::CROSS;
    if (needs_translator && deps_.translator == nullptr) {
        throw UsageError(std::string("strategy '") +
                         std::string(to_string(config.strategy)) +
                         "' needs a translator");
    }

    QueryRun run;
    run.query_id = query.id;
    run.query_lang = query.lang;
    run.question = query.question;
    run.strategy = config.strategy;

    const Corpus& corpus = deps_.retriever->corpus();
    const Scope scope = config.scope.value_or(default_scope(config.strategy));
    run.scope_langs = resolve_scope(scope, query.lang, corpus);

    // Retrieval query text. TRAG searches with the English rendering of
    // the question; other strategies search with the question as asked.
    std::string search_text = query.question;
    if (config.strategy == Strategy::TRAG) {
        auto tr = deps_.translator->translate(query.question, query.lang, "en");
        run.translated_query = tr.text;
        run.used_cached_responses |= tr.cached;
        search_text = run.translated_query;
    }

    run.retrieved = deps_.retriever->retrieve(search_text, run.scope_langs,
                                              config.k_retrieve);

    const std::size_t n_context = std::min(config.k_context, run.retrieved.size());
    run.short_context = n_context < config.k_context;
    for (std::size_t i = 0; i < n_context; ++i) {
        const RetrievedDoc& r = run.retrieved[i];
        const Document* doc = corpus.find(r.doc_id);
        if (doc == nullptr) {
            throw DataError("retrieved unknown document id '" + r.doc_id + "'");
        }
        EvidenceItem e;
        e.doc_id = r.doc_id;
        e.lang = doc->lang;
        e.orig_lang = doc->lang;
        e.text = evidence_text(*doc);
        e.rank = r.rank;
        e.score = r.score;
        run.evidence.push_back(std::move(e));
    }

    if (config.strategy == Strategy::CROSS) {
        for (EvidenceItem& e : run.evidence) {
            if (e.lang == "en") {
                continue;
            }
            auto tr = deps_.translator->translate(e.text, e.lang, "en");
            run.used_cached_responses |= tr.cached;
            e.text = tr.text;
            e.lang = "en";
        }
    }

    // Reordering happens after evidence reaches its final text and
    // language, so EN_FIRST / EN_LAST see post-translation languages.
    apply_perturbation(run.evidence, config.perturb, config.seed);

    PromptSpec spec;
    spec.question = (config.strategy == Strategy::TRAG && config.trag_prompt_lang == "en")
                        ? run.translated_query
                        : query.question;
    spec.answer_language = language_name(query.lang);
    spec.evidence = run.evidence;
    spec.annotate_evidence_lang = config.annotate_evidence_lang;
    run.prompt = render_prompt(spec);

    auto completion = deps_.llm->complete(run.prompt);
    run.used_cached_responses |= completion.cached;
    run.raw_output = completion.text;

    const ParsedAnswer parsed = parse_answer(run.raw_output);
    run.parsed_answer = parsed.answer;
    run.parse_failed = parsed.parse_failed;

    run.em = flexible_em(run.parsed_answer, query.golds);
    run.recall3 = char_3gram_recall(run.parsed_answer, query.golds);
    if (deps_.detect_lang) {
        run.pred_lang = deps_.detect_lang(run.parsed_answer);
        run.lang_correct = run.pred_lang == query.lang ? 1 : 0;
    }
    return run;
}

} // namespace mlrag
