#include "mlrag/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mlrag/errors.hpp"

namespace mlrag {

namespace {

json docref_to_json(const EvalRecord::DocRef& d, bool with_orig) {
    json j;
    j["doc_id"] = d.doc_id;
    j["lang"] = d.lang;
    if (with_orig) {
        j["orig_lang"] = d.orig_lang;
    }
    return j;
}

EvalRecord::DocRef docref_from_json(const json& j) {
    EvalRecord::DocRef d;
    d.doc_id = j.at("doc_id").get<std::string>();
    d.lang = j.at("lang").get<std::string>();
    if (j.contains("orig_lang")) {
        d.orig_lang = j.at("orig_lang").get<std::string>();
    }
    return d;
}

std::string pct(double fraction_or_pct, bool is_fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f",
                  is_fraction ? fraction_or_pct * 100.0 : fraction_or_pct);
    return buf;
}

}  // namespace

EvalRecord make_record(const QueryItem& query, const QueryRun& run,
                       const PipelineConfig& config) {
    EvalRecord r;
    r.query_id = query.id;
    r.lang = query.lang;
    r.strategy = std::string(to_string(run.strategy));
    r.perturbation = std::string(to_string(config.perturb));
    r.question = run.question;
    r.translated_query = run.translated_query;
    r.answer = run.parsed_answer;
    r.pred_lang = run.pred_lang;
    r.em = run.em;
    r.recall3 = run.recall3;
    r.lang_correct = run.lang_correct;
    r.parse_failed = run.parse_failed;
    r.short_context = run.short_context;
    for (const auto& hit : run.retrieved) {
        r.retrieved.push_back({hit.doc_id, hit.lang, ""});
    }
    for (const auto& e : run.evidence) {
        r.evidence.push_back({e.doc_id, e.lang, e.orig_lang});
    }
    return r;
}

json record_to_json(const EvalRecord& r) {
    json j;
    j["query_id"] = r.query_id;
    j["lang"] = r.lang;
    j["strategy"] = r.strategy;
    j["perturbation"] = r.perturbation;
    j["question"] = r.question;
    j["translated_query"] = r.translated_query;
    j["answer"] = r.answer;
    j["pred_lang"] = r.pred_lang;
    j["em"] = r.em;
    j["recall3"] = r.recall3;
    j["lang_correct"] = r.lang_correct;
    j["parse_failed"] = r.parse_failed;
    j["short_context"] = r.short_context;
    j["retrieved"] = json::array();
    for (const auto& d : r.retrieved) {
        j["retrieved"].push_back(docref_to_json(d, false));
    }
    j["evidence"] = json::array();
    for (const auto& d : r.evidence) {
        j["evidence"].push_back(docref_to_json(d, true));
    }
    return j;
}

EvalRecord record_from_json(const json& j) {
    EvalRecord r;
    try {
        r.query_id = j.at("query_id").get<std::string>();
        r.lang = j.at("lang").get<std::string>();
        r.strategy = j.at("strategy").get<std::string>();
        r.perturbation = j.at("perturbation").get<std::string>();
        r.question = j.at("question").get<std::string>();
        r.translated_query = j.at("translated_query").get<std::string>();
        r.answer = j.at("answer").get<std::string>();
        r.pred_lang = j.at("pred_lang").get<std::string>();
        r.em = j.at("em").get<int>();
        r.recall3 = j.at("recall3").get<double>();
        r.lang_correct = j.at("lang_correct").get<int>();
        r.parse_failed = j.at("parse_failed").get<bool>();
        r.short_context = j.at("short_context").get<bool>();
        for (const auto& d : j.at("retrieved")) {
            r.retrieved.push_back(docref_from_json(d));
        }
        for (const auto& d : j.at("evidence")) {
            r.evidence.push_back(docref_from_json(d));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("bad eval record: ") + e.what());
    }
    return r;
}

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<EvalRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += canonical_json(record_to_json(r));
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<EvalRecord> read_records_jsonl(const std::filesystem::path& path) {
    std::vector<EvalRecord> records;
    for_each_jsonl(path, [&](std::size_t, const json& row) {
        records.push_back(record_from_json(row));
    });
    return records;
}

Summary summarize(const std::vector<EvalRecord>& records,
                  const ResourceClasses& classes, std::size_t mix_depth) {
    struct Acc {
        std::size_t n = 0;
        double em = 0, recall3 = 0, lang = 0;
        std::size_t mix_slots = 0, mix_en = 0, mix_sl = 0, mix_other = 0;
    };
    std::map<std::string, Acc> by_lang;

    for (const auto& r : records) {
        Acc& a = by_lang[r.lang];
        ++a.n;
        a.em += r.em;
        a.recall3 += r.recall3;
        a.lang += r.lang_correct;
        const std::size_t depth = std::min(mix_depth, r.retrieved.size());
        for (std::size_t i = 0; i < depth; ++i) {
            ++a.mix_slots;
            if (r.retrieved[i].lang == "en") {
                ++a.mix_en;
            } else if (r.retrieved[i].lang == r.lang) {
                ++a.mix_sl;
            } else {
                ++a.mix_other;
            }
        }
    }

    Summary s;
    s.mix_depth = mix_depth;
    Acc hr_acc, lr_acc, avg_acc;
    std::size_t all_slots = 0, all_en = 0, all_sl = 0, all_other = 0;

    for (const auto& [lang, a] : by_lang) {
        MetricRow row;
        row.n = a.n;
        row.em = a.em / static_cast<double>(a.n);
        row.recall3 = a.recall3 / static_cast<double>(a.n);
        row.lang_match = a.lang / static_cast<double>(a.n);
        s.per_lang.emplace(lang, row);

        Acc& roll = classes.classify(lang) == ResourceClass::HR ? hr_acc : lr_acc;
        for (Acc* t : {&roll, &avg_acc}) {
            ++t->n;
            t->em += row.em;
            t->recall3 += row.recall3;
            t->lang += row.lang_match;
        }

        LanguageMix mix;
        mix.slots = a.mix_slots;
        if (a.mix_slots > 0) {
            mix.en = 100.0 * static_cast<double>(a.mix_en) / static_cast<double>(a.mix_slots);
            mix.sl = 100.0 * static_cast<double>(a.mix_sl) / static_cast<double>(a.mix_slots);
            mix.other = 100.0 * static_cast<double>(a.mix_other) / static_cast<double>(a.mix_slots);
        }
        s.mix_per_lang.emplace(lang, mix);
        all_slots += a.mix_slots;
        all_en += a.mix_en;
        all_sl += a.mix_sl;
        all_other += a.mix_other;
    }

    const auto roll_row = [](const Acc& a) {
        MetricRow row;
        row.n = a.n;
        if (a.n > 0) {
            row.em = a.em / static_cast<double>(a.n);
            row.recall3 = a.recall3 / static_cast<double>(a.n);
            row.lang_match = a.lang / static_cast<double>(a.n);
        }
        return row;
    };
    s.hr = roll_row(hr_acc);
    s.lr = roll_row(lr_acc);
    s.avg = roll_row(avg_acc);

    s.mix_all.slots = all_slots;
    if (all_slots > 0) {
        s.mix_all.en = 100.0 * static_cast<double>(all_en) / static_cast<double>(all_slots);
        s.mix_all.sl = 100.0 * static_cast<double>(all_sl) / static_cast<double>(all_slots);
        s.mix_all.other = 100.0 * static_cast<double>(all_other) / static_cast<double>(all_slots);
    }
    return s;
}

double round1(double x) {
    return std::round(x * 10.0) / 10.0;
}

double delta_points(double current_pct, double baseline_pct) {
    return round1(round1(current_pct) - round1(baseline_pct));
}

std::map<std::string, DeltaRow> summary_deltas(const Summary& current,
                                               const Summary& baseline) {
    std::map<std::string, DeltaRow> out;
    const auto diff = [](const MetricRow& c, const MetricRow& b) {
        DeltaRow d;
        d.em = delta_points(c.em * 100.0, b.em * 100.0);
        d.recall3 = delta_points(c.recall3 * 100.0, b.recall3 * 100.0);
        d.lang_match = delta_points(c.lang_match * 100.0, b.lang_match * 100.0);
        return d;
    };
    for (const auto& [lang, row] : current.per_lang) {
        const auto it = baseline.per_lang.find(lang);
        if (it != baseline.per_lang.end()) {
            out.emplace(lang, diff(row, it->second));
        }
    }
    out.emplace("hr", diff(current.hr, baseline.hr));
    out.emplace("lr", diff(current.lr, baseline.lr));
    out.emplace("avg", diff(current.avg, baseline.avg));
    return out;
}

std::string format_report_csv(const Summary& s) {
    std::string out = "row,n,em,recall3,lang_match,mix_en,mix_sl,mix_other\n";
    const auto line = [&](const std::string& name, const MetricRow& row,
                          const LanguageMix* mix) {
        out += name + "," + std::to_string(row.n);
        out += "," + pct(row.em, true);
        out += "," + pct(row.recall3, true);
        out += "," + pct(row.lang_match, true);
        if (mix != nullptr && mix->slots > 0) {
            out += "," + pct(mix->en, false) + "," + pct(mix->sl, false) +
                   "," + pct(mix->other, false);
        } else {
            out += ",,,";
        }
        out += '\n';
    };
    for (const auto& [lang, row] : s.per_lang) {
        const auto it = s.mix_per_lang.find(lang);
        line(lang, row, it == s.mix_per_lang.end() ? nullptr : &it->second);
    }
    line("hr", s.hr, nullptr);
    line("lr", s.lr, nullptr);
    line("avg", s.avg, &s.mix_all);
    return out;
}

std::string format_report_text(const Summary& s, const Summary* baseline) {
    std::map<std::string, DeltaRow> deltas;
    if (baseline != nullptr) {
        deltas = summary_deltas(s, *baseline);
    }

    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-6s %6s %7s %9s %11s", "row", "n", "em",
                  "recall3", "lang_match");
    out << buf;
    if (baseline != nullptr) {
        out << "   delta_em";
    }
    out << '\n';

    const auto line = [&](const std::string& name, const MetricRow& row) {
        std::snprintf(buf, sizeof(buf), "%-6s %6zu %7s %9s %11s", name.c_str(),
                      row.n, pct(row.em, true).c_str(),
                      pct(row.recall3, true).c_str(),
                      pct(row.lang_match, true).c_str());
        out << buf;
        const auto it = deltas.find(name);
        if (baseline != nullptr && it != deltas.end()) {
            std::snprintf(buf, sizeof(buf), "   %+.1f", it->second.em);
            out << buf;
        }
        out << '\n';
    };

    for (const auto& [lang, row] : s.per_lang) {
        line(lang, row);
    }
    line("hr", s.hr);
    line("lr", s.lr);
    line("avg", s.avg);

    if (s.mix_all.slots > 0) {
        std::snprintf(buf, sizeof(buf),
                      "retrieved mix @%zu: en %.1f%%  sl %.1f%%  other %.1f%%",
                      s.mix_depth, s.mix_all.en, s.mix_all.sl, s.mix_all.other);
        out << buf << '\n';
    }
    return out.str();
}

}  // namespace mlrag
