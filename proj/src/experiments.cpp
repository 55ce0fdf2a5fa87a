#include "mlrag/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "mlrag/log.hpp"

namespace mlrag {

namespace fs = std::filesystem;

ExperimentResult run_experiment(Pipeline& pipeline,
                                const std::vector<QueryItem>& queries,
                                const ExperimentSpec& spec,
                                const ResourceClasses& classes) {
    ExperimentResult result;
    result.records.resize(queries.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const std::size_t workers =
        std::max<std::size_t>(1, std::min(spec.concurrency, queries.size()));
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= queries.size()) {
                        return;
                    }
                    try {
                        const QueryRun run = pipeline.run_query(queries[i], spec.pipeline);
                        result.records[i] = make_record(queries[i], run, spec.pipeline);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next.store(queries.size());
                        return;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::sort(result.records.begin(), result.records.end(),
              [](const EvalRecord& a, const EvalRecord& b) {
                  return a.query_id < b.query_id;
              });
    result.summary = summarize(result.records, classes, spec.mix_depth);
    return result;
}

json experiment_meta(const ExperimentSpec& spec) {
    json meta;
    meta["strategy"] = std::string(to_string(spec.pipeline.strategy));
    if (spec.pipeline.scope.has_value()) {
        meta["scope"] = std::string(to_string(*spec.pipeline.scope));
    } else {
        meta["scope"] = std::string(to_string(default_scope(spec.pipeline.strategy)));
    }
    meta["k_retrieve"] = spec.pipeline.k_retrieve;
    meta["k_context"] = spec.pipeline.k_context;
    meta["perturbation"] = std::string(to_string(spec.pipeline.perturb));
    meta["seed"] = spec.pipeline.seed;
    meta["trag_prompt_lang"] = spec.pipeline.trag_prompt_lang;
    meta["annotate_evidence_lang"] = spec.pipeline.annotate_evidence_lang;
    meta["mix_depth"] = spec.mix_depth;
    return meta;
}

void write_run_artifacts(const fs::path& dir, const ExperimentResult& result,
                         const json& meta) {
    fs::create_directories(dir);
    write_records_jsonl(dir / "records.jsonl", result.records);
    write_file_atomic(dir / "report.csv", format_report_csv(result.summary));
    write_file_atomic(dir / "report.txt", format_report_text(result.summary));
    write_file_atomic(dir / "run_meta.json", canonical_json(meta) + "\n");
}

fs::path run_sweep(Pipeline& pipeline, const std::vector<QueryItem>& queries,
                   const SweepSpec& spec, const ResourceClasses& classes,
                   ProviderHub* hub) {
    fs::create_directories(spec.out_dir);
    std::string manifest;

    {
        json head;
        head["type"] = "sweep";
        head["perturbation"] = std::string(to_string(spec.base.pipeline.perturb));
        head["k_retrieve"] = spec.base.pipeline.k_retrieve;
        head["k_context"] = spec.base.pipeline.k_context;
        head["mix_depth"] = spec.base.mix_depth;
        head["queries"] = queries.size();
        json strategies = json::array();
        for (Strategy s : spec.strategies) {
            strategies.push_back(std::string(to_string(s)));
        }
        head["strategies"] = strategies;
        head["seeds"] = spec.seeds;
        manifest += canonical_json(head);
        manifest += '\n';
    }

    // Mean avg-EM per strategy across seeds feeds the comparison chart.
    std::vector<std::pair<std::string, double>> chart_bars;

    for (Strategy strategy : spec.strategies) {
        double em_sum = 0.0;
        std::size_t ok_count = 0;
        for (std::uint64_t seed : spec.seeds) {
            ExperimentSpec run_spec = spec.base;
            run_spec.pipeline.strategy = strategy;
            run_spec.pipeline.seed = seed;

            const std::string name = std::string(to_string(strategy)) + "-seed" +
                                     std::to_string(seed);
            log_info("sweep.run", {{"name", name}});

            json status;
            status["run"] = name;
            status["strategy"] = std::string(to_string(strategy));
            status["seed"] = seed;

            ExperimentResult result;
            try {
                result = run_experiment(pipeline, queries, run_spec, classes);
            } catch (const std::exception& e) {
                // A broken configuration stops its own remaining seeds; the
                // rest of the grid keeps going.
                status["status"] = "failed";
                status["error"] = std::string(e.what());
                manifest += canonical_json(status);
                manifest += '\n';
                log_error("sweep.run.failed",
                          {{"name", name}, {"error", e.what()}});
                break;
            }
            status["status"] = "ok";
            manifest += canonical_json(status);
            manifest += '\n';

            json meta = spec.meta_base;
            meta.update(experiment_meta(run_spec));
            meta["run"] = name;
            const fs::path run_dir = spec.out_dir / name;
            write_run_artifacts(run_dir, result, meta);
            em_sum += result.summary.avg.em;
            ++ok_count;

            for (const char* artifact :
                 {"records.jsonl", "report.csv", "report.txt", "run_meta.json"}) {
                json entry;
                entry["run"] = name;
                entry["strategy"] = std::string(to_string(strategy));
                entry["seed"] = seed;
                entry["path"] = name + "/" + artifact;
                entry["sha256"] = sha256_hex(read_file(run_dir / artifact));
                manifest += canonical_json(entry);
                manifest += '\n';
            }
        }
        if (ok_count > 0) {
            chart_bars.emplace_back(
                std::string(to_string(strategy)),
                100.0 * em_sum / static_cast<double>(ok_count));
        }
    }

    const std::string chart = render_bar_chart_svg("exact match, avg", chart_bars);
    write_file_atomic(spec.out_dir / "chart.svg", chart);
    {
        json entry;
        entry["path"] = "chart.svg";
        entry["sha256"] = sha256_hex(chart);
        manifest += canonical_json(entry);
        manifest += '\n';
    }

    if (hub != nullptr) {
        hub->log().write_jsonl(spec.out_dir / "call_log.jsonl");
        json entry;
        entry["path"] = "call_log.jsonl";
        entry["hashed"] = false;  // entry order reflects scheduling
        manifest += canonical_json(entry);
        manifest += '\n';
    }

    const fs::path manifest_path = spec.out_dir / "manifest.jsonl";
    write_file_atomic(manifest_path, manifest);
    return manifest_path;
}

std::string render_bar_chart_svg(
    const std::string& title,
    const std::vector<std::pair<std::string, double>>& bars) {
    static const char* kColors[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                    "#66ccee", "#aa3377"};
    const int bar_w = 70;
    const int gap = 30;
    const int plot_h = 200;
    const int left = 50;
    const int top = 40;
    const int bottom = 30;
    const int width = left + 20 + static_cast<int>(bars.size()) * (bar_w + gap);
    const int height = top + plot_h + bottom;

    char buf[256];
    std::string svg;
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                  "height=\"%d\" font-family=\"sans-serif\" font-size=\"12\">\n",
                  width, height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"20\" font-size=\"14\">%s</text>\n", left,
                  title.c_str());
    svg += buf;

    for (int grid = 0; grid <= 100; grid += 25) {
        const int y = top + plot_h - grid * plot_h / 100;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" "
                      "stroke=\"#dddddd\"/>\n",
                      left, y, width - 10, y);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">%d</text>\n",
                      left - 6, y + 4, grid);
        svg += buf;
    }

    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double clamped = std::min(100.0, std::max(0.0, bars[i].second));
        const int h = static_cast<int>(clamped * plot_h / 100.0 + 0.5);
        const int x = left + 10 + static_cast<int>(i) * (bar_w + gap);
        const int y = top + plot_h - h;
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                      "fill=\"%s\"/>\n",
                      x, y, bar_w, h, kColors[i % 6]);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">%.1f</text>\n",
                      x + bar_w / 2, y - 5, bars[i].second);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">%s</text>\n",
                      x + bar_w / 2, top + plot_h + 18, bars[i].first.c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace mlrag
