#pragma once

#include <cstdint>

namespace callcost {

// Launders a value through a volatile slot so the optimizer must treat the
// result as unknown at compile time. Used to keep "useless" arithmetic like
// (x * pad) / pad from being folded away.
inline double opaque(double v) {
    volatile double slot = v;
    return slot;
}

inline std::uint64_t opaque_u64(std::uint64_t v) {
    volatile std::uint64_t slot = v;
    return slot;
}

// Forces a computed value to be observed so the work that produced it cannot
// be dead-code eliminated. Cheap, but keep it outside timed regions anyway.
inline void consume(double v) {
    volatile double sink = v;
    (void)sink;
}

inline void consume_u64(std::uint64_t v) {
    volatile std::uint64_t sink = v;
    (void)sink;
}

}  // namespace callcost
