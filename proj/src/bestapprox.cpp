#include "dioph/bestapprox.hpp"

#include <algorithm>

#include "dioph/errors.hpp"
#include "dioph/scaled_scan.hpp"

namespace dioph {

namespace {

// Nearest integer vector to q·A, certified component-wise.
std::vector<mpz_class> nearest_vector(const TargetVector& A, const mpz_class& q) {
    std::vector<mpz_class> P;
    P.reserve(A.n());
    unsigned long qbits = mpz_sizeinbase(q.get_mpz_t(), 2);
    for (const auto& c : A.comp) {
        P.push_back(certified_nearest([&](unsigned long p) {
            Interval v = approx(c, p + qbits);
            return Interval{v.lo * q, v.hi * q};
        }));
    }
    return P;
}

// Certified strict order of ||q1·A|| vs ||q2·A||. An exact tie is a Q-linear
// relation among {1, alpha_1, ..., alpha_n} and contradicts the declared
// independence, so it is surfaced as RationalDependenceDetected.
Cmp compare_dists(const TargetVector& A, const mpz_class& q1, const mpz_class& q2) {
    const unsigned long cap = precision_cap();
    for (unsigned long p = 96;;) {
        Interval d1 = dist_qA(A, q1, nullptr, p);
        Interval d2 = dist_qA(A, q2, nullptr, p);
        int c = icmp(d1, d2);
        if (c < 0) return Cmp::Less;
        if (c > 0) return Cmp::Greater;
        if (d1.is_point() && d2.is_point())
            throw RationalDependenceDetected("||" + q1.get_str() + "·A|| equals ||" +
                                             q2.get_str() + "·A|| exactly");
        if (p >= cap)
            throw PrecisionExhausted("order of ||" + q1.get_str() + "·A|| and ||" +
                                     q2.get_str() + "·A|| undecided at precision cap");
        p = std::min(p * 2, cap);
    }
}

// Dirichlet envelope c = max_k rho_{k+1}·q_k^{1/n} (expected <= 1).
void finish_sequence(BestApproxSequence& seq) {
    Interval c_max(mpq_class(0));
    unsigned long n = static_cast<unsigned long>(seq.target.n());
    for (const auto& rec : seq.records) {
        Interval c = rec.rho_next * iroot(mpq_class(rec.q), n, 96);
        if (c.lo > c_max.lo) c_max.lo = c.lo;
        if (c.hi > c_max.hi) c_max.hi = c.hi;
    }
    seq.dirichlet_c = c_max;
    if (c_max.lo > 1)
        seq.anomalies.push_back("dirichlet envelope exceeded: max rho_{k+1}*q_k^(1/n) >= " +
                                dec_lower(c_max.lo));
}

BestApproxRecord make_record(const TargetVector& A, long k, const mpz_class& q,
                             const std::optional<Interval>& prev_rho) {
    BestApproxRecord rec;
    rec.k = k;
    rec.q = q;
    rec.P = nearest_vector(A, q);
    rec.rho_next = dist_qA(A, q, nullptr, 96);
    if (rec.rho_next.is_point() && sgn(rec.rho_next.lo) == 0)
        throw RationalDependenceDetected("||" + q.get_str() + "·A|| = 0 exactly");
    rec.rho_k = prev_rho;
    return rec;
}

// n = 1 path beyond the scan limit: convergent denominators are classically
// exactly the best approximations.
BestApproxSequence cf_sequence(const TargetVector& A, const mpz_class& q_max) {
    BestApproxSequence seq;
    seq.target = A;
    seq.q_max = q_max;
    std::optional<Interval> prev;
    long k = 0;
    for (const auto& q : cf_denominators(A.comp[0], q_max)) {
        BestApproxRecord rec = make_record(A, k++, q, prev);
        if (prev && icmp(rec.rho_next, *prev) >= 0 &&
            compare_dists(A, q, seq.records.back().q) != Cmp::Less)
            throw CertificateFailure("convergent denominator q = " + q.get_str() +
                                     " fails the strict record decrease");
        prev = rec.rho_next;
        seq.records.push_back(std::move(rec));
    }
    finish_sequence(seq);
    return seq;
}

} // namespace

BestApproxSequence best_approx_sequence(const TargetVector& A, const mpz_class& q_max) {
    if (A.n() == 0) throw DomainError("empty target vector");
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    if (A.all_rational())
        throw RationalDependenceDetected(
            "target is rational; best approximations terminate at the common denominator");
    if (q_max > kScanLimit) {
        if (A.n() == 1 && A.comp[0].is_refinable()) return cf_sequence(A, q_max);
        throw ScaleExceeded("q_max beyond " + std::to_string(kScanLimit) +
                            " exceeds the exhaustive-scan scale (only refinable n = 1 targets "
                            "extend, via continued fractions)");
    }

    BestApproxSequence seq;
    seq.target = A;
    seq.q_max = q_max;

    const std::uint64_t qm = mpz_get_ui(q_max.get_mpz_t());
    scan::ScaledVector sv = scan::scale_target(A);
    scan::Walker walker(sv); // positioned at q = 1

    long k = 0;
    std::optional<Interval> prev_rho;
    std::uint64_t best_lo = 0, best_hi = 0; // scaled bracket of the running minimum

    auto push_record = [&](std::uint64_t q) {
        BestApproxRecord rec = make_record(A, k++, mpz_class(q), prev_rho);
        prev_rho = rec.rho_next;
        scan::ScaledThreshold t = scan::scale_threshold(rec.rho_next, sv.w);
        best_lo = t.lo;
        best_hi = t.hi;
        seq.records.push_back(std::move(rec));
    };

    push_record(1); // q_0 = 1 opens the sequence
    for (std::uint64_t q = 2; q <= qm; ++q) {
        walker.advance();
        scan::SupDistBounds b = walker.bounds();
        if (b.lo > best_hi) continue; // certified not below the running minimum
        if (b.hi < best_lo ||
            compare_dists(A, mpz_class(q), seq.records.back().q) == Cmp::Less)
            push_record(q);
    }

    finish_sequence(seq);
    return seq;
}

std::vector<mpz_class> cf_denominators(const RealConstant& alpha, const mpz_class& q_max) {
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    if (alpha.rational())
        throw DomainError("continued-fraction oracle expects an irrational constant, got '" +
                          alpha.text + "'");
    if (!alpha.is_refinable())
        throw DomainError("continued-fraction oracle expects a refinable constant, got '" +
                          alpha.text + "'");

    const unsigned long cap = precision_cap();
    // Möbius steps roughly square the denominator against the enclosure width,
    // so an ambiguous partial quotient restarts the whole chain sharper.
    for (unsigned long p = kPrecisionStart;;) {
        Interval x = approx(alpha, p);
        std::vector<mpz_class> out;
        bool ambiguous = false;

        mpz_class a0lo = floor_q(x.lo), a0hi = floor_q(x.hi);
        if (a0lo != a0hi) ambiguous = true;
        if (!ambiguous) {
            out.push_back(1); // q_0 = 1
            mpz_class qm2 = 0, qm1 = 1;
            x.lo -= a0lo;
            x.hi -= a0lo;
            for (;;) {
                if (sgn(x.lo) <= 0) { // tail bracket touches 0: cannot invert
                    ambiguous = true;
                    break;
                }
                Interval inv = Interval(mpq_class(1)) / x;
                mpz_class alo = floor_q(inv.lo), ahi = floor_q(inv.hi);
                if (alo != ahi) {
                    ambiguous = true;
                    break;
                }
                mpz_class q = alo * qm1 + qm2;
                if (q > q_max) break;
                if (q > out.back()) out.push_back(q); // dedupes q_1 = q_0 when a_1 = 1
                qm2 = qm1;
                qm1 = q;
                x.lo = inv.lo - alo;
                x.hi = inv.hi - alo;
            }
        }
        if (!ambiguous) return out;
        if (p >= cap)
            throw PrecisionExhausted("partial quotient of '" + alpha.text +
                                     "' undecided at precision cap");
        p = std::min(p * 2, cap);
    }
}

Interval rho(const BestApproxSequence& seq, size_t k) {
    if (k < 1 || k >= seq.records.size())
        throw IndexOutOfRange("rho is defined for 1 <= k < " +
                              std::to_string(seq.records.size()));
    const BestApproxRecord& rec = seq.records[k];
    return rec.rho_k ? *rec.rho_k : seq.records[k - 1].rho_next;
}

AuditReport audit_defining_property(const BestApproxSequence& seq, const mpz_class& q_cap) {
    AuditReport rep;
    scan::ScaledVector sv = scan::scale_target(seq.target);
    for (const auto& rec : seq.records) {
        if (rec.q > q_cap) break; // records are ordered by q
        if (!rec.q.fits_ulong_p())
            throw ScaleExceeded("audit scan cannot walk to q = " + rec.q.get_str());
        const std::uint64_t qk = mpz_get_ui(rec.q.get_mpz_t());
        scan::ScaledThreshold t = scan::scale_threshold(rec.rho_next, sv.w);
        scan::Walker w(sv);
        for (std::uint64_t p = 1; p < qk; ++p, w.advance()) {
            ++rep.comparisons;
            if (w.bounds().lo > t.hi) continue; // certified ||p·A|| > ||q_k·A||
            if (compare_dists(seq.target, mpz_class(p), rec.q) != Cmp::Greater)
                ++rep.violations;
        }
        ++rep.records_checked;
    }
    return rep;
}

} // namespace dioph
