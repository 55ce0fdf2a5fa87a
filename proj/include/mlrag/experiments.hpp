#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mlrag/evaluation.hpp"
#include "mlrag/pipeline.hpp"
#include "mlrag/providers.hpp"

namespace mlrag {

struct ExperimentSpec {
    PipelineConfig pipeline;
    std::size_t mix_depth = 5;
    std::size_t concurrency = 4;
};

struct ExperimentResult {
    std::vector<EvalRecord> records;  // sorted by query id
    Summary summary;
};

// Runs every query through the pipeline with a small worker pool. Worker
// interleaving cannot change the output: records land in preallocated slots
// and are sorted by query id afterwards.
ExperimentResult run_experiment(Pipeline& pipeline,
                                const std::vector<QueryItem>& queries,
                                const ExperimentSpec& spec,
                                const ResourceClasses& classes);

// Serializes the settings that shaped a run, seed included. Everything here
// is input state, never timing, so the file is stable across reruns.
json experiment_meta(const ExperimentSpec& spec);

// Writes records.jsonl, report.csv, report.txt and run_meta.json for one
// finished run. `meta` lands in run_meta.json as canonical JSON.
void write_run_artifacts(const std::filesystem::path& dir,
                         const ExperimentResult& result,
                         const json& meta);

struct SweepSpec {
    std::vector<Strategy> strategies;
    std::vector<std::uint64_t> seeds;
    ExperimentSpec base;  // seed and strategy are overwritten per run
    std::filesystem::path out_dir;
    json meta_base;  // merged into every run_meta.json (corpus hash, providers)
};

// Full grid of strategies x seeds. Each run gets its own subdirectory; the
// manifest carries one status row per attempted run followed by one row per
// artifact with a sha256. The provider call log is listed without a hash,
// since its ordering reflects scheduling. A failing run marks its status row
// "failed" and stops that strategy's remaining seeds; other strategies still
// run. The manifest bytes themselves are reproducible run to run.
//
// Returns the manifest path.
std::filesystem::path run_sweep(Pipeline& pipeline,
                                const std::vector<QueryItem>& queries,
                                const SweepSpec& spec,
                                const ResourceClasses& classes,
                                ProviderHub* hub = nullptr);

// Minimal static bar chart, values in percent. Byte-deterministic for a
// given input so it can be hashed alongside the other artifacts.
std::string render_bar_chart_svg(const std::string& title,
                                 const std::vector<std::pair<std::string, double>>& bars);

}  // namespace mlrag
