#pragma once

#include <cstdint>
#include <string_view>

#include "callcost/corpus.hpp"
#include "callcost/weighting.hpp"

namespace callcost {

enum class Model { Tfidf, Bm25, Bm25Modified };
enum class Form { Inline, Call };

inline constexpr Model kAllModels[] = {Model::Tfidf, Model::Bm25, Model::Bm25Modified};

// Short machine names used in CSV output and on the command line.
std::string_view model_name(Model model);
// Longer names used in rendered tables.
std::string_view model_display_name(Model model);
Model model_from_name(std::string_view name);  // throws ConfigError on unknown names

std::string_view form_name(Form form);

struct KernelId {
    Model model = Model::Tfidf;
    Form form = Form::Inline;

    friend bool operator==(const KernelId&, const KernelId&) = default;
};

// What a kernel traversal produced: the sum of all weights (the checksum
// both forms must agree on) and how many weights were computed.
struct KernelOutcome {
    double checksum = 0.0;
    std::uint64_t weight_count = 0;

    friend bool operator==(const KernelOutcome&, const KernelOutcome&) = default;
};

// Verifies the workload is runnable before anything is timed: a non-empty
// index whose every posting resolves to a known document length.
void validate_workload(const InvertedIndex& index, const CorpusStats& stats);

// The raw traversal with no checks — this is the region the benchmark
// times. Callers must have validated the workload first.
KernelOutcome run_kernel_unchecked(KernelId id, const InvertedIndex& index,
                                   const CorpusStats& stats, const Bm25Params& params, double pad);

// validate_workload + run_kernel_unchecked + result sanity checks.
KernelOutcome run_kernel(KernelId id, const InvertedIndex& index, const CorpusStats& stats,
                         const Bm25Params& params, double pad);

struct EquivalenceReport {
    KernelOutcome inline_outcome;
    KernelOutcome call_outcome;
    double rel_diff = 0.0;
};

// Runs both forms of one model untimed and checks they agree: equal weight
// counts and checksums within 1e-9 relative. Throws EquivalenceError
// otherwise. This is the gate every timed comparison runs first.
EquivalenceReport kernel_pair_equivalence(Model model, const InvertedIndex& index,
                                          const CorpusStats& stats, const Bm25Params& params,
                                          double pad);

// Whether this build can guarantee the call-form callees stay out of line
// (compiler honors a noinline attribute and the callees sit in their own
// translation unit). When false, timed comparisons are not meaningful.
bool call_contract_enforced() noexcept;
std::string_view call_contract_description() noexcept;

}  // namespace callcost
