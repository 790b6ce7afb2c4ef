#include "callcost/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "callcost/barrier.hpp"

namespace callcost {

std::int64_t clock_resolution_ns() {
    using clock = std::chrono::steady_clock;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    auto prev = clock::now();
    for (int i = 0; i < 4096; ++i) {
        const auto now = clock::now();
        const auto delta =
            std::chrono::duration_cast<std::chrono::nanoseconds>(now - prev).count();
        if (delta > 0) best = std::min(best, delta);
        prev = now;
    }
    return best == std::numeric_limits<std::int64_t>::max() ? 1 : best;
}

Measurement make_measurement(KernelId kernel, std::vector<double> times_ns) {
    if (times_ns.empty()) throw ConfigError("make_measurement: no repetition times");
    for (double t : times_ns) {
        if (!(t >= 0.0) || !std::isfinite(t))
            throw ConfigError("make_measurement: repetition times must be finite and >= 0");
    }
    Measurement m;
    m.kernel = kernel;
    m.mean_ns = std::accumulate(times_ns.begin(), times_ns.end(), 0.0) /
                static_cast<double>(times_ns.size());
    m.times_ns = std::move(times_ns);
    return m;
}

double overhead_pct(double inline_mean_ns, double call_mean_ns) {
    if (!std::isfinite(inline_mean_ns) || !std::isfinite(call_mean_ns))
        throw DomainError("overhead_pct: means must be finite");
    if (!(inline_mean_ns > 0.0)) throw DomainError("overhead_pct: inline mean must be positive");
    if (!(call_mean_ns > 0.0)) throw DomainError("overhead_pct: call mean must be positive");
    return 100.0 * (call_mean_ns - inline_mean_ns) / inline_mean_ns;
}

namespace {

void check_options(const BenchOptions& opts) {
    if (opts.reps < 1) throw ConfigError("reps must be >= 1");
    if (opts.warmup < 0) throw ConfigError("warmup must be >= 0");
}

// Times one run of one kernel form. Every run must reproduce the outcome
// the equivalence gate saw; a drifting checksum would mean the timings
// describe different work.
double timed_once(KernelId id, const InvertedIndex& index, const CorpusStats& stats,
                  const Bm25Params& params, double pad, const KernelOutcome& expected) {
    KernelOutcome outcome;
    const std::int64_t ns =
        time_once_ns([&] { outcome = run_kernel_unchecked(id, index, stats, params, pad); });
    consume(outcome.checksum);
    if (outcome != expected)
        throw Error(std::string("kernel ") + std::string(model_name(id.model)) + "/" +
                    std::string(form_name(id.form)) +
                    " was not deterministic across repetitions");
    return static_cast<double>(ns);
}

}  // namespace

ComparisonResult run_comparison(Model model, const InvertedIndex& index, const CorpusStats& stats,
                                const Bm25Params& params, double pad, const BenchOptions& opts) {
    check_options(opts);
    const KernelId inline_id{model, Form::Inline};
    const KernelId call_id{model, Form::Call};

    // Untimed gate: refuse to time two forms that do not compute the same
    // thing. Also validates the workload and hands us reference outcomes.
    const EquivalenceReport gate = kernel_pair_equivalence(model, index, stats, params, pad);

    for (int i = 0; i < opts.warmup; ++i) {
        consume(run_kernel_unchecked(inline_id, index, stats, params, pad).checksum);
        consume(run_kernel_unchecked(call_id, index, stats, params, pad).checksum);
    }

    // Repetitions alternate forms so load spikes from elsewhere on the
    // machine land on both sides instead of biasing whichever form happened
    // to be in its timing phase.
    std::vector<double> inline_times, call_times;
    inline_times.reserve(static_cast<std::size_t>(opts.reps));
    call_times.reserve(static_cast<std::size_t>(opts.reps));
    for (int rep = 0; rep < opts.reps; ++rep) {
        inline_times.push_back(
            timed_once(inline_id, index, stats, params, pad, gate.inline_outcome));
        call_times.push_back(timed_once(call_id, index, stats, params, pad, gate.call_outcome));
    }

    ComparisonResult result;
    result.model = model;
    result.inline_run = make_measurement(inline_id, std::move(inline_times));
    result.call_run = make_measurement(call_id, std::move(call_times));
    result.overhead_pct = callcost::overhead_pct(result.inline_run.mean_ns, result.call_run.mean_ns);
    result.weight_count = gate.inline_outcome.weight_count;
    result.per_call_ns = (result.call_run.mean_ns - result.inline_run.mean_ns) /
                         static_cast<double>(result.weight_count);
    result.checksum_inline = gate.inline_outcome.checksum;
    result.checksum_call = gate.call_outcome.checksum;
    return result;
}

ScalingFit linear_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2)
        throw DomainError("linear_fit: need at least two points");
    const auto n = static_cast<double>(points.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
        if (!std::isfinite(x) || !std::isfinite(y))
            throw DomainError("linear_fit: points must be finite");
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DomainError("linear_fit: all x values are identical");

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (syy == 0.0) {
        // A perfectly flat series is fit exactly by a horizontal line.
        fit.r2 = 1.0;
        fit.flag = FitFlag::ConstantY;
        return fit;
    }
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
        const double r = y - (fit.slope * x + fit.intercept);
        ss_res += r * r;
    }
    fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    fit.flag = FitFlag::Ok;
    return fit;
}

ScalingResult run_scaling(Model model, const InvertedIndex& index, const CorpusStats& stats,
                          const Bm25Params& params, double pad,
                          std::span<const std::uint32_t> factors, const BenchOptions& opts) {
    check_options(opts);
    if (factors.empty()) throw ConfigError("run_scaling: factor list is empty");
    for (std::uint32_t f : factors)
        if (f == 0) throw ConfigError("run_scaling: factors must be >= 1");

    ScalingResult result;
    result.model = model;
    for (std::uint32_t factor : factors) {
        try {
            ComparisonResult comparison;
            if (factor == 1) {
                comparison = run_comparison(model, index, stats, params, pad, opts);
            } else {
                // Replicas live only for this factor so peak memory stays
                // one replica above the base index.
                const InvertedIndex replica = replicate_index(index, factor);
                const CorpusStats replica_stats = replicate_stats(stats, factor);
                comparison = run_comparison(model, replica, replica_stats, params, pad, opts);
            }
            ScalingPoint point;
            point.factor = factor;
            point.element_count = comparison.weight_count;
            point.inline_mean_ns = comparison.inline_run.mean_ns;
            point.call_mean_ns = comparison.call_run.mean_ns;
            if (!result.points.empty()) {
                const ScalingPoint& prev = result.points.back();
                if (point.element_count > prev.element_count) {
                    if (point.inline_mean_ns < 0.95 * prev.inline_mean_ns)
                        result.warnings.push_back(
                            "inline mean shrank by more than 5% from factor " +
                            std::to_string(prev.factor) + " to " + std::to_string(point.factor));
                    if (point.call_mean_ns < 0.95 * prev.call_mean_ns)
                        result.warnings.push_back(
                            "call mean shrank by more than 5% from factor " +
                            std::to_string(prev.factor) + " to " + std::to_string(point.factor));
                }
            }
            result.points.push_back(point);
            result.comparisons.push_back(std::move(comparison));
        } catch (const EquivalenceError& e) {
            result.error = "factor " + std::to_string(factor) + ": " + e.what();
            result.error_kind = ScalingErrorKind::Equivalence;
            break;
        } catch (const ConfigError& e) {
            result.error = "factor " + std::to_string(factor) + ": " + e.what();
            result.error_kind = ScalingErrorKind::Config;
            break;
        } catch (const DomainError& e) {
            result.error = "factor " + std::to_string(factor) + ": " + e.what();
            result.error_kind = ScalingErrorKind::Config;
            break;
        } catch (const ParseError& e) {
            result.error = "factor " + std::to_string(factor) + ": " + e.what();
            result.error_kind = ScalingErrorKind::ParseOrIo;
            break;
        } catch (const IoError& e) {
            result.error = "factor " + std::to_string(factor) + ": " + e.what();
            result.error_kind = ScalingErrorKind::ParseOrIo;
            break;
        } catch (const Error& e) {
            result.error = "factor " + std::to_string(factor) + ": " + e.what();
            result.error_kind = ScalingErrorKind::Other;
            break;
        }
    }

    if (result.points.size() >= 2) {
        std::vector<std::pair<double, double>> inline_pts, call_pts;
        inline_pts.reserve(result.points.size());
        call_pts.reserve(result.points.size());
        for (const ScalingPoint& p : result.points) {
            inline_pts.emplace_back(static_cast<double>(p.element_count), p.inline_mean_ns);
            call_pts.emplace_back(static_cast<double>(p.element_count), p.call_mean_ns);
        }
        result.inline_fit = linear_fit(inline_pts);
        result.call_fit = linear_fit(call_pts);
    } else if (result.points.size() == 1) {
        const ScalingPoint& p = result.points.front();
        result.inline_fit = ScalingFit{0.0, p.inline_mean_ns, 1.0, FitFlag::SinglePoint};
        result.call_fit = ScalingFit{0.0, p.call_mean_ns, 1.0, FitFlag::SinglePoint};
    }
    return result;
}

std::string toolchain_description() {
#if defined(__clang__)
    std::string compiler = std::string("clang ") + __VERSION__;
#elif defined(__GNUC__)
    std::string compiler = std::string("gcc ") + __VERSION__;
#else
    std::string compiler = "unknown compiler";
#endif
    return compiler + ", __cplusplus=" + std::to_string(__cplusplus) + ", " +
           std::to_string(sizeof(void*) * 8) + "-bit";
}

}  // namespace callcost
