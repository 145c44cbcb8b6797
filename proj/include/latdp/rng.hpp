#pragma once

#include <cstdint>
#include <vector>

namespace latdp {

// Deterministic generator with portable derived distributions.  The standard
// <random> distributions are implementation-defined, which would break the
// byte-identical-report guarantee across toolchains, so uniforms are derived
// from the raw 64-bit stream directly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // xorshift* (Marsaglia); period 2^64-1, plenty for desk-scale sampling
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_int(std::uint64_t n) { return n ? next_u64() % n : 0; }

    std::vector<double> uniform_vec(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto& e : v) e = uniform(lo, hi);
        return v;
    }

    // fork a child stream; keeps nested loops reproducible independent of order
    Rng fork() { return Rng(next_u64() ^ 0xd1b54a32d192ed03ull); }

private:
    std::uint64_t state_;
};

}  // namespace latdp
