#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mlrag/io.hpp"
#include "mlrag/pipeline.hpp"
#include "mlrag/types.hpp"

namespace mlrag {

// One finished query under one strategy, reduced to what reports and
// reproducibility checks need. Timings, cache hits and the shuffle seed stay
// out on purpose: repeated runs of the same configuration must serialize to
// identical bytes.
struct EvalRecord {
    std::string query_id;
    std::string lang;
    std::string strategy;
    std::string perturbation;
    std::string question;
    std::string translated_query;
    std::string answer;
    std::string pred_lang;
    int em = 0;
    double recall3 = 0.0;
    int lang_correct = 0;
    bool parse_failed = false;
    bool short_context = false;

    struct DocRef {
        std::string doc_id;
        std::string lang;
        std::string orig_lang;  // evidence only; empty in retrieved
    };
    std::vector<DocRef> retrieved;  // first-stage ranking order
    std::vector<DocRef> evidence;   // order the prompt presented
};

EvalRecord make_record(const QueryItem& query, const QueryRun& run,
                       const PipelineConfig& config);

json record_to_json(const EvalRecord& r);
EvalRecord record_from_json(const json& j);

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<EvalRecord>& records);
std::vector<EvalRecord> read_records_jsonl(const std::filesystem::path& path);

// Mean metrics over a bag of queries. Values are fractions in [0,1]; the
// report layer scales to percentages.
struct MetricRow {
    std::size_t n = 0;
    double em = 0.0;
    double recall3 = 0.0;
    double lang_match = 0.0;
};

// Share of retrieved slots per language bucket, in percent. English hits
// count as En even when the query is English; SL is the query's own
// non-English language; everything else lands in Other.
struct LanguageMix {
    std::size_t slots = 0;
    double en = 0.0;
    double sl = 0.0;
    double other = 0.0;
};

struct Summary {
    std::map<std::string, MetricRow> per_lang;
    MetricRow hr;   // unweighted mean over high-resource language rows
    MetricRow lr;   // unweighted mean over the rest
    MetricRow avg;  // unweighted mean over every language row
    std::map<std::string, LanguageMix> mix_per_lang;
    LanguageMix mix_all;
    std::size_t mix_depth = 5;
};

// Records are expected to belong to one (strategy, perturbation) slice;
// the caller filters before aggregating. Rollup rows count languages in n,
// per-language rows count queries.
Summary summarize(const std::vector<EvalRecord>& records,
                  const ResourceClasses& classes, std::size_t mix_depth = 5);

// One decimal, half away from zero.
double round1(double x);

// Difference of two percentage values as a report table would print them:
// both sides are rounded to one decimal before subtracting.
double delta_points(double current_pct, double baseline_pct);

struct DeltaRow {
    double em = 0.0;
    double recall3 = 0.0;
    double lang_match = 0.0;
};

// Keys are language codes plus "hr", "lr" and "avg". Languages present on
// only one side are skipped.
std::map<std::string, DeltaRow> summary_deltas(const Summary& current,
                                               const Summary& baseline);

std::string format_report_csv(const Summary& s);
std::string format_report_text(const Summary& s,
                               const Summary* baseline = nullptr);

}  // namespace mlrag
