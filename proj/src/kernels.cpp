#include "callcost/kernels.hpp"

#include <cmath>
#include <string>

#include "callcost/barrier.hpp"
#include "weight_callees.hpp"

namespace callcost {

std::string_view model_name(Model model) {
    switch (model) {
        case Model::Tfidf: return "tfidf";
        case Model::Bm25: return "bm25";
        case Model::Bm25Modified: return "bm25mod";
    }
    return "unknown";
}

std::string_view model_display_name(Model model) {
    switch (model) {
        case Model::Tfidf: return "Basic tf-idf";
        case Model::Bm25: return "BM 25";
        case Model::Bm25Modified: return "Modified BM 25";
    }
    return "unknown";
}

Model model_from_name(std::string_view name) {
    if (name == "tfidf") return Model::Tfidf;
    if (name == "bm25") return Model::Bm25;
    if (name == "bm25mod") return Model::Bm25Modified;
    throw ConfigError("unknown model \"" + std::string(name) +
                      "\" (expected tfidf, bm25 or bm25mod)");
}

std::string_view form_name(Form form) {
    return form == Form::Inline ? "inline" : "call";
}

void validate_workload(const InvertedIndex& index, const CorpusStats& stats) {
    if (index.entries.empty()) throw ConfigError("workload is empty: index has no entries");
    if (stats.doc_count() == 0) throw ConfigError("workload has no corpus statistics");
    if (!(stats.avdl() > 0.0)) throw ConfigError("workload avdl must be positive");
    const std::uint64_t d = stats.doc_count();
    const auto& dl_map = stats.dl_map();
    for (const PostingEntry& entry : index.entries) {
        if (entry.postings.empty())
            throw ConfigError("word \"" + entry.word + "\" has no postings");
        if (entry.df != entry.postings.size())
            throw ConfigError("word \"" + entry.word + "\" has inconsistent df");
        if (entry.df > d)
            throw ConfigError("word \"" + entry.word + "\" has df larger than the corpus");
        for (const Posting& posting : entry.postings) {
            if (posting.tf < 1)
                throw ConfigError("word \"" + entry.word + "\" has a posting with tf 0");
            if (dl_map.find(posting.doc_id) == dl_map.end())
                throw ConfigError("word \"" + entry.word + "\" posts to document \"" +
                                  posting.doc_id + "\" with no known length");
        }
    }
}

namespace {

// The six traversals. The inline forms spell the arithmetic out in the
// loop body; the call forms invoke the noinline callees from the other
// translation unit with the same expressions inside. Nothing else differs.

KernelOutcome tfidf_inline(const InvertedIndex& index, const CorpusStats& stats) {
    double checksum = 0.0;
    std::uint64_t count = 0;
    const std::uint64_t d = stats.doc_count();
    for (const PostingEntry& entry : index.entries) {
        const std::uint32_t df = entry.df;
        for (const Posting& posting : entry.postings) {
            const std::uint32_t tf = posting.tf;
            const double w = (1.0 + std::log(static_cast<double>(tf))) *
                             std::log(static_cast<double>(d) / static_cast<double>(df) + 1.0);
            checksum += w;
            ++count;
        }
    }
    return KernelOutcome{checksum, count};
}

KernelOutcome tfidf_call(const InvertedIndex& index, const CorpusStats& stats) {
    double checksum = 0.0;
    std::uint64_t count = 0;
    const std::uint64_t d = stats.doc_count();
    for (const PostingEntry& entry : index.entries) {
        const std::uint32_t df = entry.df;
        for (const Posting& posting : entry.postings) {
            const double w = detail::called_tfidf_weight(posting.tf, df, d);
            checksum += w;
            ++count;
        }
    }
    return KernelOutcome{checksum, count};
}

KernelOutcome bm25_inline(const InvertedIndex& index, const CorpusStats& stats,
                          const Bm25Params& params) {
    double checksum = 0.0;
    std::uint64_t count = 0;
    const std::uint64_t d = stats.doc_count();
    const double avdl = stats.avdl();
    const double k1 = params.k1;
    const double b = params.b;
    const auto& dl_map = stats.dl_map();
    for (const PostingEntry& entry : index.entries) {
        const std::uint32_t df = entry.df;
        for (const Posting& posting : entry.postings) {
            const std::uint32_t tf = posting.tf;
            const double dl = dl_map.find(posting.doc_id)->second;
            const double tfd = static_cast<double>(tf);
            const double mul = ((k1 + 1.0) * tfd) / (k1 * (1.0 - b + b * (dl / avdl)) + tfd);
            const double idf = std::log(1.0 + static_cast<double>(d) / static_cast<double>(df));
            const double w = mul * idf;
            checksum += w;
            ++count;
        }
    }
    return KernelOutcome{checksum, count};
}

KernelOutcome bm25_call(const InvertedIndex& index, const CorpusStats& stats,
                        const Bm25Params& params) {
    double checksum = 0.0;
    std::uint64_t count = 0;
    const std::uint64_t d = stats.doc_count();
    const double avdl = stats.avdl();
    const double k1 = params.k1;
    const double b = params.b;
    const auto& dl_map = stats.dl_map();
    for (const PostingEntry& entry : index.entries) {
        const std::uint32_t df = entry.df;
        for (const Posting& posting : entry.postings) {
            const double dl = dl_map.find(posting.doc_id)->second;
            const double w = detail::called_bm25_weight(posting.tf, df, d, dl, avdl, k1, b);
            checksum += w;
            ++count;
        }
    }
    return KernelOutcome{checksum, count};
}

KernelOutcome bm25mod_inline(const InvertedIndex& index, const CorpusStats& stats,
                             const Bm25Params& params, double pad) {
    double checksum = 0.0;
    std::uint64_t count = 0;
    const std::uint64_t d = stats.doc_count();
    const double avdl = stats.avdl();
    const double k1 = params.k1;
    const double b = params.b;
    // Laundered once so the compiler cannot fold (x * p) / p down to x.
    const double p = opaque(pad);
    const auto& dl_map = stats.dl_map();
    for (const PostingEntry& entry : index.entries) {
        const std::uint32_t df = entry.df;
        for (const Posting& posting : entry.postings) {
            const std::uint32_t tf = posting.tf;
            const double dl = dl_map.find(posting.doc_id)->second;
            const double tfd = static_cast<double>(tf);
            const double mul = ((k1 + 1.0) * tfd) / (k1 * (1.0 - b + b * (dl / avdl)) + tfd);
            const double idf = std::log(1.0 + static_cast<double>(d) / static_cast<double>(df));
            const double w = ((mul * p) / p) * ((idf * p) / p);
            checksum += w;
            ++count;
        }
    }
    return KernelOutcome{checksum, count};
}

KernelOutcome bm25mod_call(const InvertedIndex& index, const CorpusStats& stats,
                           const Bm25Params& params, double pad) {
    double checksum = 0.0;
    std::uint64_t count = 0;
    const std::uint64_t d = stats.doc_count();
    const double avdl = stats.avdl();
    const double k1 = params.k1;
    const double b = params.b;
    const double p = opaque(pad);
    const auto& dl_map = stats.dl_map();
    for (const PostingEntry& entry : index.entries) {
        const std::uint32_t df = entry.df;
        for (const Posting& posting : entry.postings) {
            const double dl = dl_map.find(posting.doc_id)->second;
            const double w =
                detail::called_bm25_modified_weight(posting.tf, df, d, dl, avdl, k1, b, p);
            checksum += w;
            ++count;
        }
    }
    return KernelOutcome{checksum, count};
}

}  // namespace

KernelOutcome run_kernel_unchecked(KernelId id, const InvertedIndex& index,
                                   const CorpusStats& stats, const Bm25Params& params,
                                   double pad) {
    switch (id.model) {
        case Model::Tfidf:
            return id.form == Form::Inline ? tfidf_inline(index, stats) : tfidf_call(index, stats);
        case Model::Bm25:
            return id.form == Form::Inline ? bm25_inline(index, stats, params)
                                           : bm25_call(index, stats, params);
        case Model::Bm25Modified:
            return id.form == Form::Inline ? bm25mod_inline(index, stats, params, pad)
                                           : bm25mod_call(index, stats, params, pad);
    }
    throw ConfigError("run_kernel_unchecked: unknown kernel");
}

namespace {

void check_kernel_params(Model model, const Bm25Params& params, double pad) {
    if (model == Model::Tfidf) return;
    if (!(params.k1 > 0.0)) throw ConfigError("k1 must be positive");
    if (!(params.b >= 0.0 && params.b <= 1.0)) throw ConfigError("b must lie in [0, 1]");
    if (model == Model::Bm25Modified && pad == 0.0) throw ConfigError("pad must be nonzero");
}

}  // namespace

KernelOutcome run_kernel(KernelId id, const InvertedIndex& index, const CorpusStats& stats,
                         const Bm25Params& params, double pad) {
    check_kernel_params(id.model, params, pad);
    validate_workload(index, stats);
    const KernelOutcome outcome = run_kernel_unchecked(id, index, stats, params, pad);
    if (!std::isfinite(outcome.checksum))
        throw Error(std::string("kernel ") + std::string(model_name(id.model)) + "/" +
                    std::string(form_name(id.form)) + " produced a non-finite checksum");
    if (outcome.weight_count != index.total_postings())
        throw Error("kernel visited " + std::to_string(outcome.weight_count) +
                    " postings, expected " + std::to_string(index.total_postings()));
    return outcome;
}

EquivalenceReport kernel_pair_equivalence(Model model, const InvertedIndex& index,
                                          const CorpusStats& stats, const Bm25Params& params,
                                          double pad) {
    const KernelOutcome inl = run_kernel(KernelId{model, Form::Inline}, index, stats, params, pad);
    const KernelOutcome call = run_kernel(KernelId{model, Form::Call}, index, stats, params, pad);
    if (inl.weight_count != call.weight_count)
        throw EquivalenceError("kernel forms of " + std::string(model_name(model)) +
                                   " computed different weight counts (" +
                                   std::to_string(inl.weight_count) + " vs " +
                                   std::to_string(call.weight_count) + ")",
                               inl.checksum, call.checksum, 0.0);
    const double scale = std::max(std::abs(inl.checksum), std::abs(call.checksum));
    const double rel =
        scale == 0.0 ? std::abs(inl.checksum - call.checksum) : std::abs(inl.checksum - call.checksum) / scale;
    if (!(rel <= 1e-9))
        throw EquivalenceError("kernel forms of " + std::string(model_name(model)) +
                                   " disagree: inline checksum " + std::to_string(inl.checksum) +
                                   ", call checksum " + std::to_string(call.checksum) +
                                   ", relative difference " + std::to_string(rel),
                               inl.checksum, call.checksum, rel);
    return EquivalenceReport{inl, call, rel};
}

bool call_contract_enforced() noexcept {
    return CALLCOST_NOINLINE_ENFORCED != 0;
}

std::string_view call_contract_description() noexcept {
#if CALLCOST_NOINLINE_ENFORCED
    return "noinline attribute honored; callees compiled in a separate translation unit; LTO off";
#else
    return "compiler does not support a noinline attribute; call form may be inlined";
#endif
}

}  // namespace callcost
