#pragma once

#include <cmath>
#include <cstdint>

#include "callcost/barrier.hpp"
#include "callcost/errors.hpp"

namespace callcost {

// Okapi BM25 tuning constants. k1 must be positive, b must lie in [0, 1].
struct Bm25Params {
    double k1 = 1.2;
    double b = 0.2;

    friend bool operator==(const Bm25Params&, const Bm25Params&) = default;
};

namespace detail {

inline void check_tf_df_d(std::uint32_t tf, std::uint32_t df, std::uint64_t d, const char* who) {
    if (tf < 1) throw DomainError(std::string(who) + ": tf must be >= 1");
    if (df < 1) throw DomainError(std::string(who) + ": df must be >= 1");
    if (d < df) throw DomainError(std::string(who) + ": df must not exceed d");
}

inline void check_bm25_inputs(std::uint32_t tf, std::uint32_t df, std::uint64_t d, double dl,
                              double avdl, const Bm25Params& params, const char* who) {
    check_tf_df_d(tf, df, d, who);
    if (!(dl > 0.0)) throw DomainError(std::string(who) + ": dl must be positive");
    if (!(avdl > 0.0)) throw DomainError(std::string(who) + ": avdl must be positive");
    if (!(params.k1 > 0.0)) throw DomainError(std::string(who) + ": k1 must be positive");
    if (!(params.b >= 0.0 && params.b <= 1.0))
        throw DomainError(std::string(who) + ": b must lie in [0, 1]");
}

}  // namespace detail

// Log-scaled tf-idf:  w = (1 + ln tf) * ln(d/df + 1).
// Natural logs; the "+1" keeps the idf factor positive even when df == d.
inline double tfidf_weight(std::uint32_t tf, std::uint32_t df, std::uint64_t d) {
    detail::check_tf_df_d(tf, df, d, "tfidf_weight");
    return (1.0 + std::log(static_cast<double>(tf))) *
           std::log(static_cast<double>(d) / static_cast<double>(df) + 1.0);
}

// Okapi BM25:
//   w = ((k1 + 1) * tf) / (k1 * (1 - b + b * dl/avdl) + tf) * ln(1 + d/df).
inline double bm25_weight(std::uint32_t tf, std::uint32_t df, std::uint64_t d, double dl,
                          double avdl, const Bm25Params& params) {
    detail::check_bm25_inputs(tf, df, d, dl, avdl, params, "bm25_weight");
    const double tfd = static_cast<double>(tf);
    const double mul = ((params.k1 + 1.0) * tfd) /
                       (params.k1 * (1.0 - params.b + params.b * (dl / avdl)) + tfd);
    const double idf = std::log(1.0 + static_cast<double>(d) / static_cast<double>(df));
    return mul * idf;
}

// BM25 with a deliberate multiply/divide pair wrapped around each factor:
//   w = ((mul * pad) / pad) * ((idf * pad) / pad).
// pad crosses an optimization barrier so the extra arithmetic is executed
// rather than folded; the value stays within rounding error of plain BM25.
inline double bm25_modified_weight(std::uint32_t tf, std::uint32_t df, std::uint64_t d, double dl,
                                   double avdl, const Bm25Params& params, double pad) {
    detail::check_bm25_inputs(tf, df, d, dl, avdl, params, "bm25_modified_weight");
    if (pad == 0.0) throw DomainError("bm25_modified_weight: pad must be nonzero");
    const double p = opaque(pad);
    const double tfd = static_cast<double>(tf);
    const double mul = ((params.k1 + 1.0) * tfd) /
                       (params.k1 * (1.0 - params.b + params.b * (dl / avdl)) + tfd);
    const double idf = std::log(1.0 + static_cast<double>(d) / static_cast<double>(df));
    return ((mul * p) / p) * ((idf * p) / p);
}

}  // namespace callcost
