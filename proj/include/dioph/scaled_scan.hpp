#pragma once

#include <cstdint>
#include <vector>

#include "dioph/numeric.hpp"

namespace dioph::scan {

// Fixed-point walk over the Kronecker orbit (q·alpha mod 1). Each component
// carries an integer bracket: step[i] <= 2^w·frac(alpha_i) <= step[i] + 2, so
// after q increments the accumulated position is exact up to 2q grid units.
// With w = 62 and q <= 10^7 the slack stays ~38 bits below the scale, which
// decides almost every comparison; callers escalate the rare stragglers with
// exact interval arithmetic.
struct ScaledVector {
    unsigned w = 62;
    std::uint64_t mod = 0;
    std::vector<std::uint64_t> step;

    size_t n() const { return step.size(); }
};

inline ScaledVector scale_fracs(const std::vector<Interval>& fracs, unsigned w) {
    ScaledVector sv;
    sv.w = w;
    sv.mod = std::uint64_t(1) << w;
    for (const auto& f : fracs) {
        mpq_class scaled = f.lo * mpq_class(mpz_class(std::uint64_t(1)) << w);
        mpz_class fl = floor_q(scaled);
        if (fl < 0) fl = 0; // frac bracket certified inside [0, 1)
        std::uint64_t s = mpz_get_ui(fl.get_mpz_t());
        if (s >= sv.mod) s = sv.mod - 1;
        sv.step.push_back(s);
    }
    return sv;
}

inline ScaledVector scale_target(const TargetVector& A, unsigned w = 62) {
    // width 2^-(w+2) makes the bracket at most 2 grid units wide
    return scale_fracs(fractional_parts(A, w + 2), w);
}

struct SupDistBounds {
    std::uint64_t lo, hi; // bounds on 2^w·sup_i ||q·alpha_i - beta_i||
};

class Walker {
public:
    explicit Walker(const ScaledVector& sv, const std::vector<std::uint64_t>* beta_scaled = nullptr)
        : sv_(&sv), cur_(sv.n(), 0), offset_(beta_scaled != nullptr) {
        if (beta_scaled) {
            for (size_t i = 0; i < cur_.size(); ++i)
                cur_[i] = (sv.mod - (*beta_scaled)[i] % sv.mod) % sv.mod;
        }
        advance(); // position at q = 1
    }

    void advance() {
        ++q_;
        const auto& step = sv_->step;
        const std::uint64_t mod = sv_->mod;
        for (size_t i = 0; i < cur_.size(); ++i) {
            cur_[i] += step[i];
            if (cur_[i] >= mod) cur_[i] -= mod;
        }
    }

    std::uint64_t q() const { return q_; }

    std::uint64_t slack() const { return 2 * q_ + (offset_ ? 2 : 0); }

    SupDistBounds bounds() const {
        const std::uint64_t mod = sv_->mod, half = mod >> 1, s = slack();
        std::uint64_t lo = 0, hi = 0;
        for (std::uint64_t c : cur_) {
            std::uint64_t t = std::min(c, mod - c);
            std::uint64_t tlo = t > s ? t - s : 0;
            std::uint64_t thi = std::min(t + s, half);
            if (tlo > lo) lo = tlo;
            if (thi > hi) hi = thi;
        }
        return {lo, hi};
    }

private:
    const ScaledVector* sv_;
    std::vector<std::uint64_t> cur_;
    std::uint64_t q_ = 0;
    bool offset_;
};

// Scaled integer bracket of a rational threshold: t_lo <= 2^w·T.lo,
// t_hi >= 2^w·T.hi. dist <= T is certified by bounds.hi <= t_lo; dist > T by
// bounds.lo > t_hi.
struct ScaledThreshold {
    std::uint64_t lo, hi;
};

inline ScaledThreshold scale_threshold(const Interval& T, unsigned w) {
    mpq_class two_w(mpz_class(std::uint64_t(1)) << w);
    mpz_class lo = floor_q(T.lo * two_w), hi = ceil_q(T.hi * two_w);
    std::uint64_t cap = (std::uint64_t(1) << w) - 1;
    auto clamp = [&](const mpz_class& v) -> std::uint64_t {
        if (v < 0) return 0;
        if (!v.fits_ulong_p()) return cap;
        std::uint64_t u = mpz_get_ui(v.get_mpz_t());
        return u > cap ? cap : u;
    };
    return {clamp(lo), clamp(hi)};
}

// Scale exact rational offsets beta_i (already reduced mod 1) for the walker.
inline std::vector<std::uint64_t> scale_offsets(const std::vector<mpq_class>& beta, unsigned w) {
    std::vector<std::uint64_t> out;
    mpq_class two_w(mpz_class(std::uint64_t(1)) << w);
    for (const auto& b : beta) {
        mpq_class r = b - floor_q(b);
        mpz_class fl = floor_q(r * two_w);
        out.push_back(mpz_get_ui(fl.get_mpz_t()));
    }
    return out;
}

} // namespace dioph::scan
