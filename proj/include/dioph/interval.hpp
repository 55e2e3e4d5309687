#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace dioph {

// Closed interval [lo, hi] with exact rational endpoints. All arithmetic here
// is endpoint-exact, so enclosures never widen except where a leaf evaluation
// (sqrt, pi, e, declared-precision decimals) introduces its own bracket.
struct Interval {
    mpq_class lo, hi;

    Interval() : lo(0), hi(0) {}
    Interval(const mpq_class& x) : lo(x), hi(x) {}
    Interval(mpq_class l, mpq_class h) : lo(std::move(l)), hi(std::move(h)) {}

    bool valid() const { return lo <= hi; }
    bool is_point() const { return lo == hi; }
    mpq_class width() const { return hi - lo; }
    mpq_class mid() const { return (lo + hi) / 2; }
    bool contains(const mpq_class& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
    bool strictly_positive() const { return sgn(lo) > 0; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Throws DomainError if b contains zero.
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

Interval iabs(const Interval& a);
Interval imin(const Interval& a, const Interval& b);
Interval imax(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
// a^k for integer k >= 0 (exact; monotone-aware for even powers).
Interval ipow_ui(const Interval& a, unsigned long k);

// Certified order: -1 if a.hi < b.lo, +1 if a.lo > b.hi, 0 if they overlap.
int icmp(const Interval& a, const Interval& b);
inline int icmp(const Interval& a, const mpq_class& b) { return icmp(a, Interval(b)); }

// Exact rational as "p/q" ("p" when the denominator is 1).
std::string rat_str(const mpq_class& x);
mpq_class parse_rat(const std::string& s);

// Decimal rendering. Exact finite expansion when the reduced denominator is
// 2^a·5^b (the case for every dyadic bound we persist); otherwise rounded
// outward in the requested direction at 40 fractional digits, preserving the
// enclosure. Deterministic either way.
std::string dec_lower(const mpq_class& x);
std::string dec_upper(const mpq_class& x);
mpq_class parse_decimal(const std::string& s);

// Dyadic helpers.
mpq_class pow2q(long e); // 2^e as an exact rational (e may be negative)
mpz_class floor_q(const mpq_class& x);
mpz_class ceil_q(const mpq_class& x);

// Directed-rounding transcendental brackets (endpoints become dyadic
// rationals at the given precision; enclosures are nested in prec).
Interval ilog(const Interval& x, unsigned long prec);                 // x > 0
Interval iroot(const mpq_class& x, unsigned long k, unsigned long prec); // x >= 0
// base^(a/b) for base > 0: exact integer power then certified root.
Interval rat_pow(const Interval& base, const mpq_class& expo, unsigned long prec);
inline Interval rat_pow(const mpq_class& base, const mpq_class& expo, unsigned long prec) {
    return rat_pow(Interval(base), expo, prec);
}

} // namespace dioph
