#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "callcost/kernels.hpp"

namespace callcost {

// Smallest nonzero steady_clock delta observed over a burst of reads.
std::int64_t clock_resolution_ns();

// Times one invocation of fn on the monotonic clock, in nanoseconds.
template <class F>
std::int64_t time_once_ns(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    if (t1 < t0) throw Error("monotonic clock went backwards during a measurement");
    return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

// One kernel's timed repetitions plus their arithmetic mean.
struct Measurement {
    KernelId kernel;
    std::vector<double> times_ns;
    double mean_ns = 0.0;
};

Measurement make_measurement(KernelId kernel, std::vector<double> times_ns);

// 100 * (call - inline) / inline. Requires positive inputs.
double overhead_pct(double inline_mean_ns, double call_mean_ns);

struct BenchOptions {
    int reps = 3;
    int warmup = 1;
};

// Both forms of one model over the same workload: equivalence gate first,
// then warmup, then `reps` timed runs of each form.
struct ComparisonResult {
    Model model = Model::Tfidf;
    Measurement inline_run;
    Measurement call_run;
    double overhead_pct = 0.0;
    double per_call_ns = 0.0;  // (call_mean - inline_mean) / weight_count
    std::uint64_t weight_count = 0;
    double checksum_inline = 0.0;
    double checksum_call = 0.0;
};

ComparisonResult run_comparison(Model model, const InvertedIndex& index, const CorpusStats& stats,
                                const Bm25Params& params, double pad, const BenchOptions& opts);

enum class FitFlag { Ok, ConstantY, SinglePoint };

// Least-squares line y = slope * x + intercept with r2 = 1 - SS_res/SS_tot.
struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    FitFlag flag = FitFlag::Ok;
};

// Fits (x, y) points. Throws DomainError on fewer than two points or when
// every x is identical. A perfectly flat y is legal: r2 = 1, flag ConstantY.
ScalingFit linear_fit(std::span<const std::pair<double, double>> points);

struct ScalingPoint {
    std::uint32_t factor = 1;
    std::uint64_t element_count = 0;
    double inline_mean_ns = 0.0;
    double call_mean_ns = 0.0;
};

// Why a scaling sweep stopped early, for callers that map failures onto
// process exit codes after persisting the partial results.
enum class ScalingErrorKind { None, Config, Equivalence, ParseOrIo, Other };

struct ScalingResult {
    Model model = Model::Tfidf;
    std::vector<ScalingPoint> points;
    std::vector<ComparisonResult> comparisons;  // parallel to points
    ScalingFit inline_fit;
    ScalingFit call_fit;
    std::vector<std::string> warnings;
    // Non-empty when the sweep stopped early; points/comparisons then hold
    // whatever factors completed before the failure.
    std::string error;
    ScalingErrorKind error_kind = ScalingErrorKind::None;
};

// Runs one comparison per replication factor and fits time vs element
// count for both forms. A mean that shrinks by more than 5% when the
// workload grows is recorded as a warning, not an error.
ScalingResult run_scaling(Model model, const InvertedIndex& index, const CorpusStats& stats,
                          const Bm25Params& params, double pad,
                          std::span<const std::uint32_t> factors, const BenchOptions& opts);

// Compiler/platform summary recorded alongside results.
std::string toolchain_description();

}  // namespace callcost
