#pragma once

#include <cstdlib>
#include <thread>

namespace latdp {

// Worker count for enumeration loops: hardware concurrency capped by the
// LATTICE_DP_THREADS environment variable (>= 1).
inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("LATTICE_DP_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

}  // namespace latdp
