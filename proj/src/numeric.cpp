#include "dioph/numeric.hpp"

#include <cstdlib>

#include "dioph/errors.hpp"

namespace dioph {

RealConstant RealConstant::parse(const std::string& s) {
    RealConstant c;
    c.text = s;
    c.ast = parse_expr(s);
    // surface division-by-exact-zero at parse time
    exact_rational(*c.ast);
    return c;
}

TargetVector TargetVector::parse(const std::string& csv) {
    TargetVector v;
    int depth = 0;
    std::string cur;
    for (char ch : csv) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            v.comp.push_back(RealConstant::parse(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    v.comp.push_back(RealConstant::parse(cur));
    return v;
}

bool TargetVector::all_rational() const {
    for (const auto& c : comp)
        if (!c.rational()) return false;
    return true;
}

std::string TargetVector::text() const {
    std::string s;
    for (size_t i = 0; i < comp.size(); ++i) {
        if (i) s += ",";
        s += comp[i].text;
    }
    return s;
}

unsigned long precision_cap() {
    if (const char* env = std::getenv("DIOPH_PRECISION_CAP")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= kPrecisionStart) return v;
    }
    return 256;
}

Interval approx(const RealConstant& x, unsigned long p) {
    const unsigned long cap = precision_cap();
    const mpq_class target = pow2q(-static_cast<long>(p));
    unsigned long work = kPrecisionStart;
    if (p + 2 > work) work = p + 2;
    bool at_cap = false;
    if (work >= cap) {
        work = cap;
        at_cap = true;
    }
    for (;;) {
        Interval iv = eval_expr(*x.ast, work);
        if (iv.width() <= target) return iv;
        if (!x.is_refinable())
            throw PrecisionExhausted("constant '" + x.text +
                                     "' carries a declared-precision literal wider than 2^-" +
                                     std::to_string(p));
        if (at_cap)
            throw PrecisionExhausted("width 2^-" + std::to_string(p) + " for '" + x.text +
                                     "' not reached at precision cap " + std::to_string(cap));
        work *= 2;
        if (work >= cap) {
            work = cap;
            at_cap = true;
        }
    }
}

std::vector<Interval> approx_vec(const TargetVector& A, unsigned long p) {
    std::vector<Interval> out;
    out.reserve(A.n());
    for (const auto& c : A.comp) out.push_back(approx(c, p));
    return out;
}

Interval torus_dist1(const Interval& t) {
    static const mpq_class half(1, 2);
    if (t.width() >= 1) return {mpq_class(0), half};
    mpz_class m = floor_q(t.lo);
    mpq_class a = t.lo - m, b = t.hi - m; // 0 <= a < 1, a <= b < 2
    auto tent = [&](const mpq_class& x) -> mpq_class {
        // distance of x in [0, 2) to {0, 1, 2}
        if (x <= half) return x;
        if (x <= 1) return 1 - x;
        if (x <= mpq_class(3, 2)) return x - 1;
        return 2 - x;
    };
    mpq_class ta = tent(a), tb = tent(b);
    mpq_class lo = std::min(ta, tb), hi = std::max(ta, tb);
    if (a <= 1 && b >= 1) lo = 0;                                    // valley at 1
    if ((a <= half && b >= half) || (a <= mpq_class(3, 2) && b >= mpq_class(3, 2)))
        hi = half;                                                   // peaks
    return {lo, hi};
}

Interval torus_dist(const std::vector<Interval>& t) {
    Interval d = torus_dist1(t.at(0));
    for (size_t i = 1; i < t.size(); ++i) d = imax(d, torus_dist1(t[i]));
    return d;
}

Cmp certified_compare(const RealConstant& a, const RealConstant& b) {
    auto ra = a.rational(), rb = b.rational();
    if (ra && rb) {
        int c = cmp(*ra, *rb);
        return c < 0 ? Cmp::Less : (c > 0 ? Cmp::Greater : Cmp::Equal);
    }
    const unsigned long cap = precision_cap();
    for (unsigned long p = kPrecisionStart;;) {
        Interval ia = eval_expr(*a.ast, p), ib = eval_expr(*b.ast, p);
        int c = icmp(ia, ib);
        if (c < 0) return Cmp::Less;
        if (c > 0) return Cmp::Greater;
        if (p >= cap) break;
        p = std::min(p * 2, cap);
    }
    throw PrecisionExhausted("comparison of '" + a.text + "' and '" + b.text +
                             "' undecided at precision cap");
}

Interval dist_qA(const TargetVector& A, const mpz_class& q,
                 const std::vector<mpq_class>* beta, unsigned long p) {
    if (beta && beta->size() != A.n())
        throw DomainError("offset dimension mismatch");
    unsigned long bits_q = mpz_sizeinbase(q.get_mpz_t(), 2);
    std::vector<Interval> comps = approx_vec(A, p + bits_q + 1);
    for (size_t i = 0; i < comps.size(); ++i) {
        comps[i].lo *= q;
        comps[i].hi *= q;
        if (sgn(q) < 0) std::swap(comps[i].lo, comps[i].hi);
        if (beta) {
            comps[i].lo -= (*beta)[i];
            comps[i].hi -= (*beta)[i];
        }
    }
    return torus_dist(comps);
}

namespace {

mpz_class certified_integer(const std::function<Interval(unsigned long)>& f,
                            const mpq_class& shift, const char* what) {
    const unsigned long cap = precision_cap();
    for (unsigned long p = kPrecisionStart;;) {
        Interval iv = f(p);
        mpz_class flo = floor_q(iv.lo + shift), fhi = floor_q(iv.hi + shift);
        if (flo == fhi) return flo;
        if (p >= cap) break;
        p = std::min(p * 2, cap);
    }
    throw PrecisionExhausted(std::string(what) + " undecided at precision cap");
}

} // namespace

mpz_class certified_floor(const std::function<Interval(unsigned long)>& f) {
    return certified_integer(f, mpq_class(0), "floor");
}

mpz_class certified_nearest(const std::function<Interval(unsigned long)>& f) {
    return certified_integer(f, mpq_class(1, 2), "nearest integer");
}

std::vector<Interval> fractional_parts(const TargetVector& A, unsigned long p) {
    const unsigned long cap = precision_cap();
    const mpq_class target = pow2q(-static_cast<long>(p));
    std::vector<Interval> out;
    out.reserve(A.n());
    for (const auto& c : A.comp) {
        // a single evaluation must certify both the width and the floor, or
        // the subtracted bracket could dip below 0
        unsigned long work = std::max(kPrecisionStart, p + 2);
        if (work > cap) work = cap;
        for (;;) {
            Interval iv = eval_expr(*c.ast, work);
            mpz_class flo = floor_q(iv.lo), fhi = floor_q(iv.hi);
            if (flo == fhi && iv.width() <= target) {
                iv.lo -= flo;
                iv.hi -= flo;
                out.push_back(iv);
                break;
            }
            if (work >= cap || !c.is_refinable())
                throw PrecisionExhausted("fractional part of '" + c.text +
                                         "' undecided at width 2^-" + std::to_string(p));
            work = std::min(work * 2, cap);
        }
    }
    return out;
}

} // namespace dioph
