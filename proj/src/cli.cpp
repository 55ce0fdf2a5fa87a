#include "mlrag/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string_view>

#include "mlrag/corpus.hpp"
#include "mlrag/embedding.hpp"
#include "mlrag/errors.hpp"
#include "mlrag/evaluation.hpp"
#include "mlrag/experiments.hpp"
#include "mlrag/io.hpp"
#include "mlrag/langid.hpp"
#include "mlrag/llm.hpp"
#include "mlrag/log.hpp"
#include "mlrag/pipeline.hpp"
#include "mlrag/prompt.hpp"
#include "mlrag/providers.hpp"
#include "mlrag/retrieval.hpp"
#include "mlrag/translation.hpp"
#include "mlrag/types.hpp"

namespace mlrag {

namespace {

namespace fs = std::filesystem;

// Every option any subcommand uses, with run defaults baked in. Config-file
// values land here too, after flags, so flags always win.
struct CliOptions {
    std::string corpus;
    std::string queries;
    std::string dictionary;
    std::string output;
    std::string embedder = "reference";
    std::string translator = "mock";
    std::string llm = "mock";
    std::string endpoints;
    std::string translation_cache;
    std::string index_cache;
    std::string data_dir = "data";
    std::string hr_langs;
    std::string langid_profiles;
    std::string strategy = "mono";
    std::string scope;
    std::string perturb = "original";
    std::string trag_prompt_lang = "sl";
    std::string log_level = "info";
    std::string config;
    std::string records;
    std::string baseline;
    std::string langs;
    std::string strategies = "mono,trag,multi,cross";
    std::string seeds = "1";
    std::uint64_t seed = 1;
    std::size_t dim = 512;
    std::size_t k_retrieve = 50;
    std::size_t k_context = 5;
    std::size_t mix_depth = 5;
    std::size_t concurrency = 4;
    bool offline = false;
    bool annotate_evidence_lang = false;
    bool csv = false;
};

LogLevel parse_log_level(const std::string& s) {
    if (s == "debug") return LogLevel::Debug;
    if (s == "info") return LogLevel::Info;
    if (s == "warn") return LogLevel::Warn;
    if (s == "error") return LogLevel::Error;
    if (s == "off") return LogLevel::Off;
    throw UsageError("unknown log level '" + s + "' (debug|info|warn|error|off)");
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text + ",") {
        if (c != ',') {
            item += c;
            continue;
        }
        const auto a = item.find_first_not_of(" \t");
        if (a != std::string::npos) {
            const auto b = item.find_last_not_of(" \t");
            out.push_back(item.substr(a, b - a + 1));
        }
        item.clear();
    }
    return out;
}

std::uint64_t config_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config key '" + key + "' needs an unsigned integer, got '" +
                         value + "'");
    }
}

bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw UsageError("config key '" + key + "' needs true or false, got '" + value + "'");
}

// Applies config-file values underneath already-parsed flags. A key maps to
// the flag of the same name with underscores as dashes; if that flag was
// given on the command line the file value is ignored.
void apply_config(const CLI::App& sub, CliOptions& o,
                  const std::map<std::string, std::string>& cfg) {
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>>
        setters = {
            {"corpus", [&](const std::string&, const std::string& v) { o.corpus = v; }},
            {"queries", [&](const std::string&, const std::string& v) { o.queries = v; }},
            {"dictionary", [&](const std::string&, const std::string& v) { o.dictionary = v; }},
            {"output", [&](const std::string&, const std::string& v) { o.output = v; }},
            {"embedder", [&](const std::string&, const std::string& v) { o.embedder = v; }},
            {"translator", [&](const std::string&, const std::string& v) { o.translator = v; }},
            {"llm", [&](const std::string&, const std::string& v) { o.llm = v; }},
            {"endpoints", [&](const std::string&, const std::string& v) { o.endpoints = v; }},
            {"translation_cache",
             [&](const std::string&, const std::string& v) { o.translation_cache = v; }},
            {"index_cache", [&](const std::string&, const std::string& v) { o.index_cache = v; }},
            {"data_dir", [&](const std::string&, const std::string& v) { o.data_dir = v; }},
            {"hr_langs", [&](const std::string&, const std::string& v) { o.hr_langs = v; }},
            {"langid_profiles",
             [&](const std::string&, const std::string& v) { o.langid_profiles = v; }},
            {"strategy", [&](const std::string&, const std::string& v) { o.strategy = v; }},
            {"scope", [&](const std::string&, const std::string& v) { o.scope = v; }},
            {"perturb", [&](const std::string&, const std::string& v) { o.perturb = v; }},
            {"trag_prompt_lang",
             [&](const std::string&, const std::string& v) { o.trag_prompt_lang = v; }},
            {"strategies", [&](const std::string&, const std::string& v) { o.strategies = v; }},
            {"seeds", [&](const std::string&, const std::string& v) { o.seeds = v; }},
            {"seed", [&](const std::string& k, const std::string& v) { o.seed = config_u64(k, v); }},
            {"dim",
             [&](const std::string& k, const std::string& v) {
                 o.dim = static_cast<std::size_t>(config_u64(k, v));
             }},
            {"k_retrieve",
             [&](const std::string& k, const std::string& v) {
                 o.k_retrieve = static_cast<std::size_t>(config_u64(k, v));
             }},
            {"k_context",
             [&](const std::string& k, const std::string& v) {
                 o.k_context = static_cast<std::size_t>(config_u64(k, v));
             }},
            {"mix_depth",
             [&](const std::string& k, const std::string& v) {
                 o.mix_depth = static_cast<std::size_t>(config_u64(k, v));
             }},
            {"concurrency",
             [&](const std::string& k, const std::string& v) {
                 o.concurrency = static_cast<std::size_t>(config_u64(k, v));
             }},
            {"offline",
             [&](const std::string& k, const std::string& v) { o.offline = config_bool(k, v); }},
            {"annotate_evidence_lang",
             [&](const std::string& k, const std::string& v) {
                 o.annotate_evidence_lang = config_bool(k, v);
             }},
        };

    for (const auto& [key, value] : cfg) {
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw UsageError("unknown config key '" + key + "'");
        }
        std::string flag = "--" + key;
        for (char& c : flag) {
            if (c == '_') c = '-';
        }
        const CLI::Option* opt = sub.get_option_no_throw(flag);
        if (opt != nullptr && opt->count() > 0) {
            continue;  // the explicit flag wins
        }
        it->second(key, value);
    }
}

// Holds everything a run needs; member order matters because later members
// reference earlier ones.
struct CliStack {
    Corpus corpus;
    ProviderHub hub;
    std::shared_ptr<const Embedder> embedder;
    std::optional<Retriever> retriever;
    std::optional<Translator> translator;
    std::optional<LlmClient> llm;
    std::optional<LangIdentifier> langid;
    std::optional<Pipeline> pipeline;

    CliStack(Corpus c, ProviderHub::Options hopt)
        : corpus(std::move(c)), hub(std::move(hopt)) {}
};

ProviderHub::Options hub_options(const CliOptions& o) {
    ProviderHub::Options hopt;
    std::string cache = o.translation_cache;
    if (cache.empty()) {
        if (const char* env = std::getenv("MLRAG_CACHE_DIR")) {
            cache = env;
        }
    }
    hopt.cache_dir = cache;
    hopt.offline = o.offline;
    hopt.per_endpoint_concurrency = static_cast<int>(o.concurrency == 0 ? 1 : o.concurrency);
    return hopt;
}

bool is_http_ref(const std::string& value) { return value.rfind("http:", 0) == 0; }

// Registers the referenced http endpoint on the hub and returns its id.
std::string register_http_ref(CliStack& stack, const CliOptions& o,
                              const std::string& value, ProviderKind want) {
    const std::string id = value.substr(5);
    if (id.empty()) {
        throw UsageError("empty endpoint id in '" + value + "'");
    }
    if (o.endpoints.empty()) {
        throw UsageError("provider '" + value + "' needs --endpoints <registry.json>");
    }
    for (const HttpEndpoint& ep : load_endpoint_registry(o.endpoints)) {
        if (ep.id != id) {
            continue;
        }
        if (ep.kind != want) {
            throw UsageError("endpoint '" + id + "' is a " +
                             std::string(to_string(ep.kind)) + " provider, wanted " +
                             std::string(to_string(want)));
        }
        if (!stack.hub.has_endpoint(id)) {
            stack.hub.register_http(ep);
        }
        return id;
    }
    throw UsageError("endpoint '" + id + "' not found in " + o.endpoints);
}

// Optional parts differ by subcommand: `index` needs no llm and no pipeline.
struct StackParts {
    bool llm = true;
    bool pipeline = true;
};

std::unique_ptr<CliStack> build_stack(const CliOptions& o, StackParts parts) {
    if (o.corpus.empty()) {
        throw UsageError("--corpus is required");
    }
    auto stack = std::make_unique<CliStack>(Corpus::load_jsonl(o.corpus), hub_options(o));

    if (o.embedder == "reference") {
        stack->embedder = std::make_shared<NgramEmbedder>(o.dim);
    } else if (is_http_ref(o.embedder)) {
        const std::string id = register_http_ref(*stack, o, o.embedder, ProviderKind::EMBED);
        stack->embedder = std::make_shared<RemoteEmbedder>(stack->hub, id, o.dim);
    } else {
        throw UsageError("--embedder must be reference or http:<endpoint-id>");
    }

    Retriever::Options ropt;
    ropt.index_cache_dir = o.index_cache;
    stack->retriever.emplace(stack->corpus, stack->embedder, ropt);

    if (o.translator == "mock") {
        // Without a dictionary there is no translator; strategies that need
        // one fail with a usage error instead of translating nonsense.
        if (!o.dictionary.empty()) {
            register_mock_translator(stack->hub, "mt", o.dictionary);
            stack->translator.emplace(stack->hub, "mt");
        }
    } else if (is_http_ref(o.translator)) {
        const std::string id =
            register_http_ref(*stack, o, o.translator, ProviderKind::TRANSLATE);
        stack->translator.emplace(stack->hub, id);
    } else {
        throw UsageError("--translator must be mock or http:<endpoint-id>");
    }

    if (parts.llm) {
        if (o.llm == "mock") {
            if (o.queries.empty()) {
                throw UsageError("the mock llm derives its behavior from --queries");
            }
            register_mock_llm(stack->hub, "llm", o.queries);
            stack->llm.emplace(stack->hub, "llm");
        } else if (is_http_ref(o.llm)) {
            const std::string id = register_http_ref(*stack, o, o.llm, ProviderKind::LLM);
            stack->llm.emplace(stack->hub, id);
        } else {
            throw UsageError("--llm must be mock or http:<endpoint-id>");
        }
    }

    std::string profiles = o.langid_profiles;
    if (profiles.empty()) {
        const fs::path shipped = fs::path(o.data_dir) / "langid" / "profiles";
        if (fs::is_directory(shipped)) {
            profiles = shipped.string();
        }
    }
    if (!profiles.empty()) {
        stack->langid.emplace(LangIdentifier::load_dir(profiles));
    }

    if (parts.pipeline) {
        Pipeline::Deps deps;
        deps.retriever = &*stack->retriever;
        deps.llm = stack->llm ? &*stack->llm : nullptr;
        deps.translator = stack->translator ? &*stack->translator : nullptr;
        if (stack->langid) {
            const LangIdentifier* lid = &*stack->langid;
            deps.detect_lang = [lid](std::string_view text) { return lid->detect(text); };
        }
        stack->pipeline.emplace(deps);
    }
    return stack;
}

PipelineConfig pipeline_config(const CliOptions& o) {
    PipelineConfig cfg;
    cfg.strategy = parse_strategy(o.strategy);
    if (!o.scope.empty()) {
        cfg.scope = parse_scope(o.scope);
    }
    cfg.k_retrieve = o.k_retrieve;
    cfg.k_context = o.k_context;
    cfg.perturb = parse_perturbation(o.perturb);
    cfg.seed = o.seed;
    cfg.trag_prompt_lang = o.trag_prompt_lang;
    cfg.annotate_evidence_lang = o.annotate_evidence_lang;
    return cfg;
}

ResourceClasses resource_classes(const CliOptions& o) {
    return o.hr_langs.empty() ? ResourceClasses() : ResourceClasses::from_file(o.hr_langs);
}

// The input side of the effective configuration, echoed into run_meta.json.
json stack_meta(const CliOptions& o, const CliStack& stack) {
    json m;
    m["corpus"] = o.corpus;
    m["corpus_hash"] = stack.corpus.content_hash();
    m["queries"] = o.queries;
    m["embedder"] = stack.embedder->id();
    m["translator"] = stack.translator ? o.translator : std::string("none");
    m["llm"] = o.llm;
    m["offline"] = o.offline;
    m["concurrency"] = o.concurrency;
    return m;
}

int cmd_ingest(const CliOptions& o) {
    if (o.corpus.empty()) {
        throw UsageError("--corpus is required");
    }
    const Corpus corpus = Corpus::load_jsonl(o.corpus);
    for (const std::string& lang : split_csv(o.langs)) {
        if (!corpus.has_language(lang)) {
            throw DataError("corpus " + o.corpus + " lacks expected language bucket: " + lang);
        }
    }
    json langs = json::object();
    for (const std::string& lang : corpus.languages()) {
        langs[lang] = corpus.bucket(lang).size();
    }
    json stats;
    stats["docs"] = corpus.size();
    stats["languages"] = langs;
    stats["empty_text"] = corpus.empty_text_count();
    stats["content_hash"] = corpus.content_hash();
    std::cout << canonical_json(stats) << "\n";
    return 0;
}

int cmd_index(const CliOptions& o) {
    if (o.index_cache.empty()) {
        throw UsageError("--index-cache is required");
    }
    StackParts parts;
    parts.llm = false;
    parts.pipeline = false;
    const auto stack = build_stack(o, parts);

    std::vector<std::string> langs =
        o.langs.empty() ? stack->corpus.languages() : split_csv(o.langs);
    for (const std::string& lang : langs) {
        if (!stack->corpus.has_language(lang)) {
            throw DataError("corpus " + o.corpus + " lacks language bucket: " + lang);
        }
    }

    // Warm every index a strategy sweep touches: each single-language
    // bucket, plus the en+lang pair buckets the mixed scopes use.
    std::vector<std::vector<std::string>> scopes;
    for (const std::string& lang : langs) {
        scopes.push_back({lang});
    }
    if (stack->corpus.has_language("en")) {
        for (const std::string& lang : langs) {
            if (lang != "en") {
                std::vector<std::string> pair = {"en", lang};
                std::sort(pair.begin(), pair.end());
                scopes.push_back(std::move(pair));
            }
        }
    }

    json built = json::array();
    for (const auto& scope : scopes) {
        const VectorIndex& idx = stack->retriever->index_for(scope);
        json entry;
        entry["langs"] = scope;
        entry["docs"] = idx.size();
        built.push_back(std::move(entry));
    }
    json out;
    out["cache_dir"] = o.index_cache;
    out["dim"] = stack->embedder->dim();
    out["indexes"] = built;
    std::cout << canonical_json(out) << "\n";
    return 0;
}

int cmd_run(const CLI::App& sub, CliOptions& o) {
    if (!o.config.empty()) {
        apply_config(sub, o, load_config_file(o.config));
    }
    if (o.queries.empty()) {
        throw UsageError("--queries is required");
    }
    if (o.output.empty()) {
        throw UsageError("--output is required");
    }
    const auto stack = build_stack(o, StackParts());
    const auto queries = load_queries(o.queries);

    ExperimentSpec spec;
    spec.pipeline = pipeline_config(o);
    spec.mix_depth = o.mix_depth;
    spec.concurrency = o.concurrency;
    const ResourceClasses classes = resource_classes(o);

    const ExperimentResult result = run_experiment(*stack->pipeline, queries, spec, classes);

    json meta = stack_meta(o, *stack);
    meta.update(experiment_meta(spec));
    write_run_artifacts(o.output, result, meta);
    stack->hub.log().write_jsonl(fs::path(o.output) / "call_log.jsonl");
    log_info("run.done", {{"output", o.output},
                          {"queries", std::to_string(queries.size())}});
    std::cout << format_report_text(result.summary);
    return 0;
}

int cmd_report(const CliOptions& o) {
    if (o.records.empty()) {
        throw UsageError("--records is required");
    }
    const ResourceClasses classes = resource_classes(o);
    const Summary summary = summarize(read_records_jsonl(o.records), classes, o.mix_depth);
    if (o.csv) {
        std::cout << format_report_csv(summary);
        return 0;
    }
    if (!o.baseline.empty()) {
        const Summary base = summarize(read_records_jsonl(o.baseline), classes, o.mix_depth);
        std::cout << format_report_text(summary, &base);
        return 0;
    }
    std::cout << format_report_text(summary);
    return 0;
}

int cmd_sweep(const CLI::App& sub, CliOptions& o) {
    if (!o.config.empty()) {
        apply_config(sub, o, load_config_file(o.config));
    }
    if (o.queries.empty()) {
        throw UsageError("--queries is required");
    }
    if (o.output.empty()) {
        throw UsageError("--output is required");
    }
    const auto stack = build_stack(o, StackParts());
    const auto queries = load_queries(o.queries);

    SweepSpec sweep;
    for (const std::string& name : split_csv(o.strategies)) {
        sweep.strategies.push_back(parse_strategy(name));
    }
    for (const std::string& s : split_csv(o.seeds)) {
        sweep.seeds.push_back(config_u64("seeds", s));
    }
    if (sweep.strategies.empty() || sweep.seeds.empty()) {
        throw UsageError("--strategies and --seeds must each name at least one value");
    }
    sweep.base.pipeline = pipeline_config(o);
    sweep.base.mix_depth = o.mix_depth;
    sweep.base.concurrency = o.concurrency;
    sweep.out_dir = o.output;
    sweep.meta_base = stack_meta(o, *stack);

    const fs::path manifest = run_sweep(*stack->pipeline, queries, sweep,
                                        resource_classes(o), &stack->hub);
    std::cout << manifest.string() << "\n";
    return 0;
}

void add_stack_flags(CLI::App& sub, CliOptions& o) {
    sub.add_option("--corpus", o.corpus, "corpus jsonl path");
    sub.add_option("--embedder", o.embedder, "reference | http:<endpoint-id>");
    sub.add_option("--dim", o.dim, "embedding dimension");
    sub.add_option("--endpoints", o.endpoints, "provider endpoint registry json");
    sub.add_option("--translation-cache", o.translation_cache,
                   "provider response cache dir (caches every provider kind); "
                   "MLRAG_CACHE_DIR applies when unset");
    sub.add_option("--index-cache", o.index_cache, "vector index snapshot dir");
    sub.add_option("--data-dir", o.data_dir,
                   "root for shipped data (language profiles)");
    sub.add_flag("--offline", o.offline,
                 "forbid network calls; http cache misses become errors");
    sub.add_option("--concurrency", o.concurrency, "query worker threads");
}

void add_pipeline_flags(CLI::App& sub, CliOptions& o) {
    sub.add_option("--queries", o.queries, "query set jsonl path");
    sub.add_option("--dictionary", o.dictionary, "mock translator dictionary jsonl");
    sub.add_option("--translator", o.translator, "mock | http:<endpoint-id>");
    sub.add_option("--llm", o.llm, "mock | http:<endpoint-id>");
    sub.add_option("--scope", o.scope, "sl | en | en+sl | all (default per strategy)");
    sub.add_option("--k-retrieve", o.k_retrieve, "first-stage depth");
    sub.add_option("--k-context", o.k_context, "passages in the prompt");
    sub.add_option("--perturb", o.perturb,
                   "original | shuffle | en-first | en-last");
    sub.add_option("--seed", o.seed, "run seed; all randomness derives from it");
    sub.add_option("--trag-prompt-lang", o.trag_prompt_lang,
                   "language of the prompt question under trag (sl | en)");
    sub.add_flag("--annotate-evidence-lang", o.annotate_evidence_lang,
                 "tag each prompt passage with its language");
    sub.add_option("--mix-depth", o.mix_depth,
                   "slots counted for the retrieved language mix");
    sub.add_option("--hr-langs", o.hr_langs, "resource class file {\"hr\": [codes]}");
    sub.add_option("--langid-profiles", o.langid_profiles,
                   "language profile dir for answer language checks");
    sub.add_option("--output", o.output, "artifact directory");
    sub.add_option("--config", o.config, "flat key=value config file; flags override");
}

}  // namespace

std::map<std::string, std::string> load_config_file(const fs::path& path) {
    const std::string text = read_file(path);
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) {
            continue;
        }
        const auto b = line.find_last_not_of(" \t\r");
        line = line.substr(a, b - a + 1);

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) +
                             ": expected key = value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto ka = key.find_first_not_of(" \t");
        const auto kb = key.find_last_not_of(" \t");
        key = ka == std::string::npos ? "" : key.substr(ka, kb - ka + 1);
        const auto va = value.find_first_not_of(" \t");
        const auto vb = value.find_last_not_of(" \t");
        value = va == std::string::npos ? "" : value.substr(va, vb - va + 1);
        if (key.empty()) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": empty key");
        }
        if (!out.emplace(key, value).second) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) +
                             ": duplicate key '" + key + "'");
        }
    }
    return out;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"multilingual retrieval-augmented generation workbench"};
    app.require_subcommand(1);

    CliOptions o;
    app.add_option("--log-level", o.log_level, "debug | info | warn | error | off");
    // Lets `mlrag run --log-level debug ...` resolve --log-level at the top
    // level even though it appears after the subcommand.
    app.fallthrough();

    CLI::App* ingest = app.add_subcommand("ingest", "validate a corpus, print bucket stats");
    ingest->add_option("--corpus", o.corpus, "corpus jsonl path");
    ingest->add_option("--langs", o.langs, "language buckets that must exist (csv)");

    CLI::App* index = app.add_subcommand("index", "prebuild vector index snapshots");
    add_stack_flags(*index, o);
    index->add_option("--langs", o.langs, "languages to index (csv; default: all)");

    CLI::App* run = app.add_subcommand("run", "run one strategy over a query set");
    add_stack_flags(*run, o);
    add_pipeline_flags(*run, o);
    run->add_option("--strategy", o.strategy, "mono | trag | multi | cross");

    CLI::App* report = app.add_subcommand("report", "summarize a records file");
    report->add_option("--records", o.records, "records jsonl path");
    report->add_option("--baseline", o.baseline, "baseline records for delta columns");
    report->add_option("--hr-langs", o.hr_langs, "resource class file {\"hr\": [codes]}");
    report->add_option("--mix-depth", o.mix_depth, "language mix depth");
    report->add_flag("--csv", o.csv, "emit csv instead of the text table");

    CLI::App* sweep = app.add_subcommand("sweep", "strategy x seed grid with a manifest");
    add_stack_flags(*sweep, o);
    add_pipeline_flags(*sweep, o);
    sweep->add_option("--strategies", o.strategies, "strategies to sweep (csv)");
    sweep->add_option("--seeds", o.seeds, "seeds to sweep (csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 prints usage or help itself; fold every parse failure into
        // the usage exit code, keeping --help at 0.
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        set_log_level(parse_log_level(o.log_level));
        if (ingest->parsed()) return cmd_ingest(o);
        if (index->parsed()) return cmd_index(o);
        if (run->parsed()) return cmd_run(*run, o);
        if (report->parsed()) return cmd_report(o);
        return cmd_sweep(*sweep, o);
    } catch (const UsageError& e) {
        log_error("cli.usage", {{"error", e.what()}});
        return 1;
    } catch (const DataError& e) {
        log_error("cli.data", {{"error", e.what()}});
        return 2;
    } catch (const ProviderError& e) {
        log_error("cli.provider", {{"error", e.what()}});
        return 3;
    } catch (const std::exception& e) {
        log_error("cli.internal", {{"error", e.what()}});
        return 2;
    }
}

}  // namespace mlrag
