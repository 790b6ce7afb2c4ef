#include "weight_callees.hpp"

#include <cmath>

// These bodies must stay textually identical to the inline-form loop bodies
// in kernels.cpp: the checksum comparison between forms depends on both
// sides performing the same arithmetic in the same order.

namespace callcost::detail {

CALLCOST_NOINLINE double called_tfidf_weight(std::uint32_t tf, std::uint32_t df, std::uint64_t d) {
    return (1.0 + std::log(static_cast<double>(tf))) *
           std::log(static_cast<double>(d) / static_cast<double>(df) + 1.0);
}

CALLCOST_NOINLINE double called_bm25_weight(std::uint32_t tf, std::uint32_t df, std::uint64_t d,
                                            double dl, double avdl, double k1, double b) {
    const double tfd = static_cast<double>(tf);
    const double mul = ((k1 + 1.0) * tfd) / (k1 * (1.0 - b + b * (dl / avdl)) + tfd);
    const double idf = std::log(1.0 + static_cast<double>(d) / static_cast<double>(df));
    return mul * idf;
}

CALLCOST_NOINLINE double called_bm25_modified_weight(std::uint32_t tf, std::uint32_t df,
                                                     std::uint64_t d, double dl, double avdl,
                                                     double k1, double b, double pad) {
    const double tfd = static_cast<double>(tf);
    const double mul = ((k1 + 1.0) * tfd) / (k1 * (1.0 - b + b * (dl / avdl)) + tfd);
    const double idf = std::log(1.0 + static_cast<double>(d) / static_cast<double>(df));
    return ((mul * pad) / pad) * ((idf * pad) / pad);
}

}  // namespace callcost::detail
