#pragma once

#include <cstdint>
#include <gmpxx.h>

#include "dioph/interval.hpp"

namespace dioph {

// splitmix64: tiny, seedable, and stable across platforms; all sampling in
// the artifact flows from one recorded seed through this generator.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), rejection-sampled for exactness
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        std::uint64_t lim = ~std::uint64_t(0) - ~std::uint64_t(0) % bound;
        for (;;) {
            std::uint64_t v = next();
            if (v < lim) return v % bound;
        }
    }

    // dyadic uniform sample in [0, 1) with denominator 2^bits (bits <= 64)
    mpq_class dyadic(unsigned bits = 32) {
        std::uint64_t v = next() >> (64 - bits);
        mpq_class q(mpz_class(v), mpz_class(std::uint64_t(1)) << bits);
        q.canonicalize();
        return q;
    }

private:
    std::uint64_t state_;
};

} // namespace dioph
