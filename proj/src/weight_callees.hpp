#pragma once

#include <cstdint>

// The callees behind the call-form kernels. They live in their own
// translation unit (kernel_callees.cpp) and are marked noinline so every
// invocation is a genuine function call even under -O2. Keep LTO off or
// the linker will undo this.

#if defined(__clang__)
#define CALLCOST_NOINLINE __attribute__((noinline))
#define CALLCOST_NOINLINE_ENFORCED 1
#elif defined(__GNUC__)
#define CALLCOST_NOINLINE __attribute__((noinline, noclone))
#define CALLCOST_NOINLINE_ENFORCED 1
#elif defined(_MSC_VER)
#define CALLCOST_NOINLINE __declspec(noinline)
#define CALLCOST_NOINLINE_ENFORCED 1
#else
#define CALLCOST_NOINLINE
#define CALLCOST_NOINLINE_ENFORCED 0
#endif

namespace callcost::detail {

CALLCOST_NOINLINE double called_tfidf_weight(std::uint32_t tf, std::uint32_t df, std::uint64_t d);

CALLCOST_NOINLINE double called_bm25_weight(std::uint32_t tf, std::uint32_t df, std::uint64_t d,
                                            double dl, double avdl, double k1, double b);

CALLCOST_NOINLINE double called_bm25_modified_weight(std::uint32_t tf, std::uint32_t df,
                                                     std::uint64_t d, double dl, double avdl,
                                                     double k1, double b, double pad);

}  // namespace callcost::detail
