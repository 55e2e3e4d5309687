#include "dioph/interval.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>

#include "dioph/errors.hpp"

namespace dioph {

Interval operator+(const Interval& a, const Interval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

Interval operator-(const Interval& a, const Interval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
    mpq_class p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero())
        throw DomainError("interval division by an interval containing zero");
    mpq_class p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

Interval iabs(const Interval& a) {
    if (sgn(a.lo) >= 0) return a;
    if (sgn(a.hi) <= 0) return -a;
    return {mpq_class(0), std::max(mpq_class(-a.lo), a.hi)};
}

Interval imin(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval imax(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval ipow_ui(const Interval& a, unsigned long k) {
    if (k == 0) return Interval(mpq_class(1));
    Interval acc = a;
    for (unsigned long i = 1; i < k; ++i) acc = acc * a;
    if (k % 2 == 0 && a.contains_zero()) {
        // even power of a zero-straddling interval starts at 0
        acc.lo = 0;
    }
    return acc;
}

int icmp(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return -1;
    if (a.lo > b.hi) return +1;
    return 0;
}

std::string rat_str(const mpq_class& x) {
    mpq_class c(x);
    c.canonicalize();
    return c.get_str();
}

mpq_class parse_rat(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw DomainError("malformed rational: " + s);
    q.canonicalize();
    return q;
}

namespace {

// Render n / 10^frac_digits with a decimal point, n exact.
std::string render_scaled(const mpz_class& n, unsigned long frac_digits) {
    bool neg = sgn(n) < 0;
    mpz_class a = abs(n);
    std::string digits = a.get_str();
    if (digits.size() <= frac_digits)
        digits.insert(0, frac_digits - digits.size() + 1, '0');
    std::string out = digits.substr(0, digits.size() - frac_digits);
    std::string frac = digits.substr(digits.size() - frac_digits);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) out += "." + frac;
    if (neg && (a != 0)) out.insert(0, "-");
    return out;
}

std::string dec_render(const mpq_class& x, bool round_up) {
    mpq_class c(x);
    c.canonicalize();
    mpz_class den = c.get_den();
    unsigned long a2 = mpz_scan1(den.get_mpz_t(), 0); // twos
    mpz_class rest = den >> a2;
    unsigned long a5 = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), 5)) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), 5);
        ++a5;
    }
    if (rest == 1) {
        // exact finite decimal: x = num·2^(d-a2)·5^(d-a5) / 10^d, d = max(a2,a5)
        unsigned long d = std::max(a2, a5);
        mpz_class scaled = c.get_num();
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), 2, d - a2);
        scaled *= t;
        mpz_ui_pow_ui(t.get_mpz_t(), 5, d - a5);
        scaled *= t;
        return render_scaled(scaled, d);
    }
    // non-terminating: round outward at 40 fractional digits
    const unsigned long d = 40;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, d);
    mpq_class scaled = c * mpq_class(p10);
    mpz_class n;
    if (round_up)
        mpz_cdiv_q(n.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    else
        mpz_fdiv_q(n.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    return render_scaled(n, d);
}

} // namespace

std::string dec_lower(const mpq_class& x) { return dec_render(x, false); }
std::string dec_upper(const mpq_class& x) { return dec_render(x, true); }

mpq_class parse_decimal(const std::string& s) {
    if (s.empty()) throw DomainError("empty decimal literal");
    std::string t = s;
    bool neg = false;
    size_t i = 0;
    if (t[i] == '+' || t[i] == '-') {
        neg = (t[i] == '-');
        ++i;
    }
    std::string intpart, fracpart;
    bool dot = false;
    for (; i < t.size(); ++i) {
        if (t[i] == '.') {
            if (dot) throw DomainError("malformed decimal: " + s);
            dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(t[i]))) {
            (dot ? fracpart : intpart) += t[i];
        } else {
            throw DomainError("malformed decimal: " + s);
        }
    }
    if (intpart.empty() && fracpart.empty())
        throw DomainError("malformed decimal: " + s);
    if (intpart.empty()) intpart = "0";
    mpz_class num(intpart + fracpart, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fracpart.size());
    mpq_class q(num, den);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

mpq_class pow2q(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    mpq_class q = (e < 0) ? mpq_class(1, p) : mpq_class(p);
    q.canonicalize();
    return q;
}

mpz_class floor_q(const mpq_class& x) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return r;
}

mpz_class ceil_q(const mpq_class& x) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return r;
}

namespace {

mpq_class mpfr_to_q(const mpfr_t x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

} // namespace

Interval ilog(const Interval& x, unsigned long prec) {
    if (sgn(x.lo) <= 0) throw DomainError("log of a non-positive interval");
    mpfr_t t, r;
    mpfr_init2(t, static_cast<mpfr_prec_t>(prec));
    mpfr_init2(r, static_cast<mpfr_prec_t>(prec));
    mpfr_set_q(t, x.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_log(r, t, MPFR_RNDD);
    mpq_class lo = mpfr_to_q(r);
    mpfr_set_q(t, x.hi.get_mpq_t(), MPFR_RNDU);
    mpfr_log(r, t, MPFR_RNDU);
    mpq_class hi = mpfr_to_q(r);
    mpfr_clear(t);
    mpfr_clear(r);
    return {lo, hi};
}

Interval iroot(const mpq_class& x, unsigned long k, unsigned long prec) {
    if (sgn(x) < 0) throw DomainError("root of a negative value");
    if (k == 0) throw DomainError("zeroth root");
    if (k == 1) return Interval(x);
    mpfr_t t, r;
    mpfr_init2(t, static_cast<mpfr_prec_t>(prec));
    mpfr_init2(r, static_cast<mpfr_prec_t>(prec));
    mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDD);
    mpfr_rootn_ui(r, t, k, MPFR_RNDD);
    mpq_class lo = mpfr_to_q(r);
    mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDU);
    mpfr_rootn_ui(r, t, k, MPFR_RNDU);
    mpq_class hi = mpfr_to_q(r);
    mpfr_clear(t);
    mpfr_clear(r);
    if (lo < 0) lo = 0;
    return {lo, hi};
}

Interval rat_pow(const Interval& base, const mpq_class& expo, unsigned long prec) {
    if (sgn(base.lo) <= 0)
        throw DomainError("rational power of a non-positive base");
    mpq_class e(expo);
    e.canonicalize();
    mpz_class a = e.get_num(), b = e.get_den();
    bool invert = false;
    if (sgn(a) < 0) {
        a = -a;
        invert = true;
    }
    if (!a.fits_ulong_p() || !b.fits_ulong_p())
        throw ScaleExceeded("rational exponent too large");
    Interval p = ipow_ui(base, a.get_ui());
    Interval rooted = hull(iroot(p.lo, b.get_ui(), prec), iroot(p.hi, b.get_ui(), prec));
    if (invert) rooted = Interval(mpq_class(1)) / rooted;
    return rooted;
}

} // namespace dioph
