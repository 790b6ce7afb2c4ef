#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "callcost/bench.hpp"

namespace callcost {

enum class TimeUnit { Ns, Us, Ms };

TimeUnit time_unit_from_name(std::string_view name);  // "ns" | "us" | "ms"
std::string_view time_unit_name(TimeUnit unit);
double ns_to_unit(double ns, TimeUnit unit);

// One finished comparison plus the workload coordinates it ran at.
struct ResultRecord {
    ComparisonResult result;
    std::uint32_t factor = 1;
    std::uint64_t element_count = 0;
};

// Markdown table for one model: a column per repetition, the mean, and the
// overhead row. Times are converted to `unit` and printed with 4 decimals.
std::string render_comparison_table_md(const ResultRecord& record, TimeUnit unit);

// Every repetition as one CSV row:
// model,form,repetition,time_ns,weight_count,factor
std::string render_raw_csv(std::span<const ResultRecord> records);

// One CSV row per comparison:
// model,factor,element_count,inline_mean_ns,call_mean_ns,overhead_pct,per_call_ns
std::string render_summary_csv(std::span<const ResultRecord> records);

// Inverse of render_raw_csv; means and overheads are recomputed from the
// parsed repetition times. Throws ParseError with line/column context.
std::vector<ResultRecord> parse_raw_csv(const std::string& text);

// Scaling series as plot-friendly CSV: element_count,inline_mean,call_mean
// rows (nanoseconds) followed by "#fit" comment lines carrying each form's
// slope, intercept and r2. Single-point series get a degenerate-fit comment
// instead of fit lines; an empty series is rejected.
std::string render_plot_csv(const ScalingResult& scaling);
void emit_plot_data(const ScalingResult& scaling, const std::filesystem::path& path);

// Whole-run ingredients recorded so a run can be reproduced later.
struct RunMetadata {
    std::string command;
    int reps = 3;
    int warmup = 1;
    std::uint64_t seed = 0;
    double k1 = 1.2;
    double b = 0.2;
    double pad = 100.0;
    std::vector<Model> models;
    std::vector<std::uint32_t> factors;
    TimeUnit unit = TimeUnit::Us;
    std::string corpus_source;  // "synthetic" | "index" | "dir" | "jsonl"
    std::string corpus_detail;  // path, or the synthetic generator arguments
    std::int64_t clock_res_ns = 0;
    std::string toolchain;
    std::string call_contract;
    std::vector<ResultRecord> results;
};

// Metadata as pretty-printed JSON with keys in a fixed order. Checksums are
// recorded as hex floats so the exact bits survive the round trip.
std::string render_run_metadata_json(const RunMetadata& meta);

// A full human-readable run report: title, per-comparison tables, scaling
// summaries when present.
struct ReportDocument {
    std::string title;
    std::vector<std::string> sections;  // rendered Markdown blocks, in order

    std::string to_markdown() const;
};

ReportDocument make_report(std::string title, std::span<const ResultRecord> records,
                           TimeUnit unit);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace callcost
