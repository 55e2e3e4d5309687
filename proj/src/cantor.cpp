#include "dioph/cantor.hpp"

#include <algorithm>

#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/rng.hpp"
#include "dioph/scaled_scan.hpp"

namespace dioph {

namespace {

Interval imul_z(Interval a, const mpz_class& z) {
    a.lo *= z;
    a.hi *= z;
    if (sgn(z) < 0) std::swap(a.lo, a.hi);
    return a;
}

// Dyadic representative of w*A mod Z^n, within 2^-68 of the true point.
std::vector<mpq_class> center_of(const TargetVector& A, const mpz_class& w) {
    unsigned long bits = mpz_sizeinbase(w.get_mpz_t(), 2);
    std::vector<Interval> a = approx_vec(A, 68 + bits);
    std::vector<mpq_class> c;
    c.reserve(a.size());
    for (const Interval& ai : a) {
        mpq_class mid = imul_z(ai, w).mid();
        c.push_back(mid - floor_q(mid));
    }
    return c;
}

// Exact torus sup-distance between rational vectors.
mpq_class torus_gap(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
    mpq_class best = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        mpq_class d = abs(a[i] - b[i]);
        d -= floor_q(d);
        mpq_class alt = 1 - d;
        if (alt < d) d = alt;
        if (d > best) best = d;
    }
    return best;
}

// ||w*A - beta|| for an exact rational point beta, width <= 2^-(p+1).
Interval dist_to_point(const TargetVector& A, const mpz_class& w,
                       const std::vector<mpq_class>& beta, unsigned long p) {
    unsigned long bits = mpz_sizeinbase(w.get_mpz_t(), 2);
    std::vector<Interval> a = approx_vec(A, p + bits + 1);
    std::vector<Interval> comps;
    comps.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) comps.push_back(imul_z(a[i], w) - Interval(beta[i]));
    return torus_dist(comps);
}

struct RatParts {
    unsigned long num, den;
};

RatParts parts_of(const mpq_class& x, const char* what) {
    mpq_class c = x;
    c.canonicalize();
    if (sgn(c) <= 0) throw DomainError(std::string(what) + " must be positive");
    if (!c.get_num().fits_ulong_p() || !c.get_den().fits_ulong_p())
        throw ScaleExceeded(std::string(what) + " has components too large for exact powers");
    return {mpz_get_ui(c.get_num().get_mpz_t()), mpz_get_ui(c.get_den().get_mpz_t())};
}

void guard_bits(const mpz_class& base, unsigned long expo) {
    if (expo > 0 && mpz_sizeinbase(base.get_mpz_t(), 2) * expo > 10000000)
        throw ScaleExceeded("growth-condition powers exceed the exact-arithmetic guard");
}

mpz_class zpow(const mpz_class& base, unsigned long e) {
    guard_bits(base, e);
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

void validate_config(const CantorConfig& cfg, size_t n) {
    if (cfg.v <= 0) throw DomainError("v must be positive");
    if (cfg.s <= 0) throw DomainError("s must be positive");
    if (cfg.s * cfg.v >= 1) throw DomainError("need s*v < 1");
    if (cfg.s >= mpq_class(static_cast<long>(n))) throw DomainError("need s < n");
    if (cfg.safety < 1) throw DomainError("safety factor must be >= 1");
    if (!cfg.q_list.empty() && cfg.q_list.size() != cfg.J + 1)
        throw DomainError("q_list must supply exactly J + 1 scales");
}

// lambda_n * safety <= (q_prev^{n v}/prodN)^{-1/(n-s)}, decided exactly.
bool g2_holds(const mpq_class& lambda_n, const mpz_class& q_prev, const mpz_class& prodN,
              unsigned n, const mpq_class& v, const mpq_class& s, const mpq_class& safety) {
    RatParts pv = parts_of(v, "v"), ps = parts_of(s, "s");
    mpq_class lf = lambda_n * safety;
    lf.canonicalize();
    unsigned long E = (n * ps.den - ps.num) * pv.den; // (n d - c) b
    unsigned long nad = n * pv.num * ps.den;          // n a d
    unsigned long bd = pv.den * ps.den;
    mpz_class lhs = zpow(lf.get_num(), E) * zpow(q_prev, nad);
    mpz_class rhs = zpow(prodN, bd) * zpow(lf.get_den(), E);
    return lhs <= rhs;
}

// Smallest integer q' with q'^b * 2^{(n-1)b} >= q^{n a}: the N >= 1 floor.
mpz_class min_q_for_child(const mpz_class& q, unsigned n, const mpq_class& v) {
    RatParts pv = parts_of(v, "v");
    mpz_class num = zpow(q, n * pv.num);
    mpz_class den = mpz_class(1) << ((n - 1) * pv.den);
    mpz_class target = (num + den - 1) / den; // ceil
    if (target <= 1) return 1;
    mpz_class r;
    mpz_root(r.get_mpz_t(), target.get_mpz_t(), pv.den);
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), r.get_mpz_t(), pv.den);
    if (t < target) ++r;
    return r;
}

} // namespace

Condition4 check_condition4(const BestApproxSequence& seq, size_t k, const mpq_class& v) {
    if (k < 1 || k >= seq.records.size()) throw IndexOutOfRange("k out of range for condition (4)");
    if (v <= 0) throw DomainError("v must be positive");
    const mpz_class& qk = seq.records[k].q;
    const unsigned long cap = precision_cap();
    Interval r = rho(seq, k);
    unsigned long p = 96;
    for (;;) {
        Interval m = r * rat_pow(mpq_class(qk), v, p) * Interval(mpq_class(1, 4));
        if (m.lo >= 1) return {true, m};
        if (m.hi < 1) return {false, m};
        if (p >= cap)
            throw PrecisionExhausted("condition (4) margin straddles 1 at q = " + qk.get_str());
        p = std::min(p * 2, cap);
        r = dist_qA(seq.target, seq.records[k - 1].q, nullptr, p);
    }
}

mpz_class children_count(const mpz_class& q_prev, const mpz_class& q_next, unsigned n,
                         const mpq_class& v) {
    if (q_prev < 1 || q_next < 1) throw DomainError("scales must be >= 1");
    RatParts pv = parts_of(v, "v");
    mpz_class lhs_base = zpow(q_prev, n * pv.num);
    mpz_class cap = (mpz_class(1) << (n - 1)) * q_next;
    mpz_class rhs = zpow(cap, pv.den);
    mpz_class lo = 0, hi = cap;
    while (lo < hi) {
        mpz_class mid = (lo + hi + 1) / 2;
        mpz_class t;
        mpz_pow_ui(t.get_mpz_t(), mid.get_mpz_t(), pv.den);
        if (t * lhs_base <= rhs) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

mpz_class strict_threshold(const mpz_class& q, const mpz_class& prodN, unsigned n,
                           const mpq_class& v, const mpq_class& s, const mpq_class& safety) {
    if (q < 1 || prodN < 1) throw DomainError("scales must be >= 1");
    if (s * v >= 1) throw DomainError("need s*v < 1");
    RatParts pv = parts_of(v, "v"), ps = parts_of(s, "s"), pf = parts_of(safety, "safety");
    unsigned long bd = pv.den * ps.den;
    unsigned long ac = pv.num * ps.num;
    unsigned long e = bd - ac; // > 0 by s*v < 1
    unsigned long nad = n * pv.num * ps.den;
    mpz_class L = zpow(mpz_class(pf.num), e) * zpow(q, nad);
    mpz_class R = zpow(prodN, bd) * zpow(mpz_class(pf.den), e);
    if (R >= L) return 1;
    mpz_class target = (L + R - 1) / R; // ceil(L/R)
    mpz_class r;
    mpz_root(r.get_mpz_t(), target.get_mpz_t(), e);
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), r.get_mpz_t(), e);
    if (t < target) ++r;
    return r;
}

SubseqAudit select_subsequence(const BestApproxSequence& seq, const CantorConfig& config) {
    const size_t n = seq.target.n();
    validate_config(config, n);
    if (config.mode == TreeMode::Strict) {
        if (n > 4)
            throw DomainError("strict mode needs lambda_n and is limited to n <= 4");
        ExponentEstimate est = omega_hat_column(seq);
        if (est.infinite || !(config.v > est.estimate.hi))
            throw DomainError("strict mode needs v above the uniform-column estimate " +
                              dec_upper(est.estimate.hi));
    }
    auto find_record = [&](const mpz_class& q) -> size_t {
        for (size_t i = 0; i < seq.records.size(); ++i)
            if (seq.records[i].q == q) return i;
        throw DomainError("q = " + q.get_str() +
                          " is not a best-approximation denominator of this sequence");
    };

    SubseqAudit audit;
    mpz_class prodN = 1;
    size_t k_prev = 0;
    mpz_class q_prev;
    for (unsigned j = 0; j <= config.J; ++j) {
        SubseqLevel lv;
        lv.j = j;
        if (j == 0) {
            if (!config.q_list.empty()) {
                lv.k = find_record(config.q_list[0]);
            } else {
                size_t k = 0;
                while (k < seq.records.size() && seq.records[k].q < 2) ++k;
                if (k == seq.records.size())
                    throw SequenceExhausted("no record with q >= 2 to anchor level 0");
                lv.k = k;
            }
            lv.q = seq.records[lv.k].q;
            lv.N = 1;
            if (lv.q == 1)
                audit.notes.push_back("level 0 is the q = 1 root ball with witness 0");
        } else {
            lv.g1_required_q = strict_threshold(q_prev, prodN, static_cast<unsigned>(n),
                                                config.v, config.s, config.safety);
            if (!config.q_list.empty()) {
                lv.k = find_record(config.q_list[j]);
                if (lv.k <= k_prev)
                    throw DomainError("q_list must be strictly increasing along the records");
                Condition4 c4 = check_condition4(seq, lv.k, config.v);
                if (!c4.holds)
                    throw DomainError("condition (4) fails at level " + std::to_string(j) +
                                      ": margin " + dec_upper(c4.margin.hi) + " < 1");
                lv.cond4_margin = c4.margin;
                lv.q = seq.records[lv.k].q;
                lv.N = children_count(q_prev, lv.q, static_cast<unsigned>(n), config.v);
            } else {
                bool found = false;
                for (size_t k = k_prev + 1; k < seq.records.size(); ++k) {
                    const mpz_class& qk = seq.records[k].q;
                    mpz_class N = children_count(q_prev, qk, static_cast<unsigned>(n), config.v);
                    if (N < 1) continue;
                    if (config.mode == TreeMode::Strict) {
                        if (qk < lv.g1_required_q) continue;
                        mpq_class lam;
                        try {
                            TorusLattice L = build_lattice(seq.records[k]);
                            lam = L.minima.back().lambda;
                        } catch (const ScaleExceeded&) {
                            throw DomainError("strict mode needs lambda_n, unavailable here");
                        }
                        if (!g2_holds(lam, q_prev, prodN, static_cast<unsigned>(n), config.v,
                                      config.s, config.safety))
                            continue;
                        lv.g2_lambda_n = lam;
                    }
                    Condition4 c4 = check_condition4(seq, k, config.v);
                    if (!c4.holds) continue;
                    lv.k = k;
                    lv.q = qk;
                    lv.N = N;
                    lv.cond4_margin = c4.margin;
                    found = true;
                    break;
                }
                if (!found) {
                    mpz_class need = min_q_for_child(q_prev, static_cast<unsigned>(n), config.v);
                    if (config.mode == TreeMode::Strict && lv.g1_required_q > need)
                        need = lv.g1_required_q;
                    throw SequenceExhausted(
                        "no admissible record for level " + std::to_string(j) +
                        " up to q_max = " + seq.q_max.get_str() + "; requires q_{k_" +
                        std::to_string(j) + "} >= " + need.get_str());
                }
            }
            lv.g1_ok = lv.q >= lv.g1_required_q;
            if (n <= 4 && lv.g2_lambda_n == 0) {
                try {
                    TorusLattice L = build_lattice(seq.records[lv.k]);
                    lv.g2_lambda_n = L.minima.back().lambda;
                    lv.g2_ok = g2_holds(lv.g2_lambda_n, q_prev, prodN, static_cast<unsigned>(n),
                                        config.v, config.s, config.safety);
                } catch (const ScaleExceeded&) {
                    audit.notes.push_back("lambda_n audit skipped at level " + std::to_string(j));
                }
            } else if (n > 4) {
                audit.notes.push_back("lambda_n audit skipped at level " + std::to_string(j));
            } else {
                lv.g2_ok = true; // strict greedy established it during the scan
            }
            if (config.mode == TreeMode::Strict && !config.q_list.empty() &&
                (!lv.g1_ok || !lv.g2_ok))
                throw DomainError("strict growth conditions fail at level " + std::to_string(j) +
                                  "; G1 requires q >= " + lv.g1_required_q.get_str());
        }
        audit.levels.push_back(lv);
        prodN *= lv.N;
        k_prev = lv.k;
        q_prev = lv.q;
    }
    return audit;
}

CantorTree build_tree(const BestApproxSequence& seq, const CantorConfig& config) {
    SubseqAudit audit = select_subsequence(seq, config);
    CantorTree tree;
    tree.config = config;
    tree.target = seq.target;
    tree.audit = audit;
    const size_t n = seq.target.n();
    const unsigned long cap = precision_cap();

    {
        const SubseqLevel& s0 = audit.levels[0];
        LevelRecord lr;
        lr.j = 0;
        lr.k = s0.k;
        lr.q = s0.q;
        lr.N = 1;
        lr.radius = rat_pow(mpq_class(lr.q), -config.v, 96);
        Ball b;
        if (lr.q == 1) {
            b.center.assign(n, mpq_class(0));
            b.q_witness = 0;
            tree.anomalies.push_back("root ball at q = 1 has witness 0, outside Definition 1");
        } else {
            b.center = center_of(seq.target, 1);
            b.q_witness = 1;
        }
        b.parent = -1;
        lr.balls.push_back(std::move(b));
        tree.levels.push_back(std::move(lr));
    }

    for (unsigned j = 1; j <= config.J; ++j) {
        const SubseqLevel& sl = audit.levels[j];
        LevelRecord lr;
        lr.j = j;
        lr.k = sl.k;
        lr.q = sl.q;
        lr.N = sl.N;
        if (lr.N < 1)
            throw DomainError("level " + std::to_string(j) +
                              " has N = 0; the scale ratio is too small");
        lr.radius = rat_pow(mpq_class(lr.q), -config.v, 96);
        const LevelRecord& prev = tree.levels.back();
        mpq_class B = prev.radius.lo - lr.radius.hi;
        if (B <= 0) throw CertificateFailure("radius gap vanished at level " + std::to_string(j));

        if (!lr.q.fits_ulong_p() || mpz_get_ui(lr.q.get_mpz_t()) > kScanLimit)
            throw ScaleExceeded("level scale beyond the scan limit");
        const std::uint64_t qn = mpz_get_ui(lr.q.get_mpz_t());
        scan::ScaledVector sv = scan::scale_target(seq.target);
        scan::ScaledThreshold st = scan::scale_threshold(Interval(B), sv.w);
        scan::Walker w(sv);
        std::vector<mpz_class> deltas; // delta >= 1 with ||delta*A|| <= r_{j-1} - r_j
        for (std::uint64_t d = 1; d < qn; ++d, w.advance()) {
            scan::SupDistBounds bd = w.bounds();
            bool in;
            if (bd.hi <= st.lo) {
                in = true;
            } else if (bd.lo > st.hi) {
                in = false;
            } else {
                in = false;
                for (unsigned long p = 96;;) {
                    Interval dist = dist_qA(seq.target, mpz_class(d), nullptr, p);
                    int c = icmp(dist, B);
                    if (c != 0) {
                        in = c < 0;
                        break;
                    }
                    if (dist.is_point()) {
                        in = true; // exactly on the closed boundary
                        break;
                    }
                    if (p >= cap)
                        throw PrecisionExhausted("inclusion test undecided at offset " +
                                                 std::to_string(d));
                    p = std::min(p * 2, cap);
                }
            }
            if (in) deltas.push_back(mpz_class(d));
        }

        if (!lr.N.fits_ulong_p()) throw ScaleExceeded("children count exceeds the scan limit");
        const size_t need = mpz_get_ui(lr.N.get_mpz_t());
        for (size_t pi = 0; pi < prev.balls.size(); ++pi) {
            const mpz_class& wit = prev.balls[pi].q_witness;
            std::vector<mpz_class> cands;
            auto push = [&](const mpz_class& x) {
                if (x >= 1 && x < lr.q) cands.push_back(x);
            };
            push(wit);
            for (const mpz_class& d : deltas) {
                push(wit + d);
                push(wit - d);
            }
            std::sort(cands.begin(), cands.end());
            cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
            if (cands.size() < need)
                throw InsufficientChildren("level " + std::to_string(j) + " parent " +
                                           std::to_string(pi) + ": found " +
                                           std::to_string(cands.size()) + ", needed " +
                                           lr.N.get_str());
            for (size_t c = 0; c < need; ++c) {
                Ball b;
                b.center = center_of(seq.target, cands[c]);
                b.q_witness = cands[c];
                b.parent = static_cast<long>(pi);
                lr.balls.push_back(std::move(b));
            }
        }
        tree.levels.push_back(std::move(lr));
    }
    return tree;
}

mpq_class MassMeasure::level_weight(unsigned j) const {
    if (!tree || j >= tree->levels.size()) throw IndexOutOfRange("level out of range");
    mpz_class prod = 1;
    for (unsigned i = 0; i <= j; ++i) prod *= tree->levels[i].N;
    return mpq_class(1) / mpq_class(prod);
}

mpq_class measure_of_ball(const MassMeasure& M, unsigned level, size_t index) {
    if (!M.tree || level >= M.tree->levels.size() ||
        index >= M.tree->levels[level].balls.size())
        throw UnknownBall("no ball at level " + std::to_string(level) + ", index " +
                          std::to_string(index));
    return M.level_weight(level);
}

mpq_class mu_upper(const MassMeasure& M, const BallQuery& B) {
    if (!M.tree) throw DomainError("measure is not attached to a tree");
    const CantorTree& t = *M.tree;
    const size_t n = t.n();
    if (B.center.size() != n) throw DomainError("query dimension mismatch");
    if (B.radius <= 0) throw DomainError("query radius must be positive");
    const unsigned long cap = precision_cap();
    const size_t J = t.levels.size() - 1;

    std::vector<Interval> rad;
    rad.reserve(J + 1);
    for (const auto& lv : t.levels) rad.push_back(lv.radius);
    unsigned long p = 96;
    for (;;) {
        if (B.radius > rad[0].hi) throw ScaleWindow("r above the root radius");
        if (B.radius < rad[J].lo) throw ScaleWindow("r below the deepest radius");
        size_t l = 0;
        while (l <= J && !(rad[l].hi <= B.radius)) ++l;
        if (l <= J) {
            mpq_class thresh = B.radius + rad[l].hi + pow2q(-66);
            size_t cnt = 0;
            for (const Ball& b : t.levels[l].balls)
                if (torus_gap(b.center, B.center) <= thresh) ++cnt;
            return mpq_class(static_cast<unsigned long>(cnt)) * M.level_weight(static_cast<unsigned>(l));
        }
        if (p >= cap) throw PrecisionExhausted("scale window undecided at the precision cap");
        p = std::min(p * 2, cap);
        for (size_t i = 0; i <= J; ++i)
            rad[i] = rat_pow(mpq_class(t.levels[i].q), -t.config.v, p);
    }
}

MembershipReport verify_membership(const CantorTree& tree) {
    MembershipReport rep;
    const size_t J = tree.levels.size() - 1;
    const unsigned long cap = precision_cap();
    for (const auto& lv : tree.levels) {
        Interval R = rat_pow(mpq_class(lv.q), -tree.config.v, 96);
        if (lv.radius.hi < R.lo || lv.radius.lo > R.hi)
            throw CertificateFailure("stored radius at level " + std::to_string(lv.j) +
                                     " does not enclose q^{-v}");
    }
    rep.worst_margin.assign(J + 1, Interval(mpq_class(0)));
    bool noted = false;
    for (size_t bi = 0; bi < tree.levels[J].balls.size(); ++bi) {
        const std::vector<mpq_class>& beta = tree.levels[J].balls[bi].center;
        long idx = static_cast<long>(bi);
        for (size_t j = J + 1; j-- > 0;) {
            const Ball& anc = tree.levels[j].balls[static_cast<size_t>(idx)];
            idx = anc.parent;
            const mpz_class& w = anc.q_witness;
            if (w == 0) {
                if (!noted) {
                    rep.anomalies.push_back("level " + std::to_string(j) +
                                            " witness 0 skipped (outside Definition 1)");
                    noted = true;
                }
                continue;
            }
            Interval bound = rat_pow(mpq_class(w), -tree.config.v, 96);
            for (unsigned long p = 96;;) {
                Interval ratio = dist_to_point(tree.target, w, beta, p) / bound;
                if (ratio.hi <= 1) {
                    if (ratio.hi > rep.worst_margin[j].hi) rep.worst_margin[j] = ratio;
                    break;
                }
                if (ratio.lo > 1)
                    throw CertificateFailure("deepest ball " + std::to_string(bi) +
                                             " misses its witness bound at ancestor level " +
                                             std::to_string(j));
                if (p >= cap)
                    throw PrecisionExhausted("witness bound undecided at the precision cap");
                p = std::min(p * 2, cap);
                bound = rat_pow(mpq_class(w), -tree.config.v, p);
            }
        }
        ++rep.balls_checked;
    }
    return rep;
}

StructureReport verify_structure(const CantorTree& tree) {
    StructureReport rep;
    const mpq_class drift = pow2q(-66);
    mpz_class expect = 1;
    for (size_t j = 0; j < tree.levels.size(); ++j) {
        const LevelRecord& lv = tree.levels[j];
        if (j == 0 && lv.N != 1) throw CertificateFailure("N_0 must be 1");
        if (j > 0 && lv.q <= tree.levels[j - 1].q)
            throw CertificateFailure("level scales must increase");
        expect *= lv.N;
        if (mpz_class(static_cast<unsigned long>(lv.balls.size())) != expect)
            throw CertificateFailure("ball count at level " + std::to_string(j) +
                                     " is not the product of the N_i");
        rep.balls += lv.balls.size();
        for (size_t i = 0; i < lv.balls.size(); ++i) {
            const Ball& b = lv.balls[i];
            if (b.center.size() != tree.n())
                throw CertificateFailure("center dimension mismatch");
            if (j == 0) {
                if (b.parent != -1) throw CertificateFailure("root parent must be -1");
            } else if (b.parent < 0 ||
                       static_cast<size_t>(b.parent) >= tree.levels[j - 1].balls.size()) {
                throw CertificateFailure("dangling parent at level " + std::to_string(j));
            }
            if (b.q_witness == 0) {
                if (j != 0 || lv.q != 1)
                    throw CertificateFailure("witness 0 is only allowed for a q = 1 root");
            } else {
                if (b.q_witness < 1 || b.q_witness >= lv.q)
                    throw CertificateFailure("witness out of range at level " + std::to_string(j));
                if (torus_gap(center_of(tree.target, b.q_witness), b.center) > pow2q(-65))
                    throw CertificateFailure("stored center drifts from its witness at level " +
                                             std::to_string(j));
            }
        }
        mpq_class two_r = 2 * lv.radius.hi;
        for (size_t a = 0; a < lv.balls.size(); ++a)
            for (size_t b = a + 1; b < lv.balls.size(); ++b) {
                if (torus_gap(lv.balls[a].center, lv.balls[b].center) - drift <= two_r)
                    throw CertificateFailure("balls " + std::to_string(a) + " and " +
                                             std::to_string(b) + " at level " +
                                             std::to_string(j) + " are not certifiably disjoint");
                ++rep.disjoint_pairs;
            }
        if (j > 0) {
            const LevelRecord& pv = tree.levels[j - 1];
            mpq_class bound = pv.radius.lo - lv.radius.hi;
            for (const Ball& b : lv.balls) {
                const Ball& par = pv.balls[static_cast<size_t>(b.parent)];
                if (torus_gap(b.center, par.center) + drift > bound)
                    throw CertificateFailure("child ball escapes its parent at level " +
                                             std::to_string(j));
                ++rep.nestings;
            }
        }
        // exact mass conservation
        MassMeasure M{&tree};
        mpq_class w = M.level_weight(static_cast<unsigned>(j));
        if (w * mpq_class(expect) != 1)
            throw CertificateFailure("level mass does not sum to 1");
    }
    rep.messages.push_back("all structural certificates hold");
    return rep;
}

Lemma2Report verify_lemma2(const CantorTree& tree, const MassMeasure& M, size_t sample_count,
                           std::uint64_t seed) {
    Lemma2Report rep;
    rep.seed = seed;
    rep.samples = sample_count;
    const size_t J = tree.levels.size() - 1;
    if (J == 0) throw DomainError("lemma 2 sampling needs at least two levels");
    const size_t n = tree.n();
    const mpq_class rJ = tree.levels[J].radius.hi, r0 = tree.levels[0].radius.lo;

    long emin = 0;
    while (mpq_class(127) * pow2q(-emin - 6) > r0) {
        if (++emin > 1000000) throw DomainError("root radius too small to sample");
    }
    long emax = emin;
    if (mpq_class(64) * pow2q(-emin - 6) < rJ)
        throw DomainError("scale window too narrow to sample");
    while (mpq_class(64) * pow2q(-emax - 7) >= rJ) ++emax;

    // lattice minima per level for the regime breakdown
    std::vector<std::vector<mpq_class>> lams(J + 1);
    if (n <= 4) {
        for (size_t j = 0; j <= J; ++j) {
            BestApproxRecord rec;
            rec.q = tree.levels[j].q;
            if (rec.q < 2) continue;
            for (size_t i = 0; i < n; ++i) {
                const mpz_class q = rec.q;
                const size_t ci = i;
                rec.P.push_back(certified_nearest([&](unsigned long p) {
                    unsigned long bits = mpz_sizeinbase(q.get_mpz_t(), 2);
                    return imul_z(approx_vec(tree.target, p + bits + 2)[ci], q);
                }));
            }
            try {
                TorusLattice L = build_lattice(rec);
                for (const auto& m : L.minima) lams[j].push_back(m.lambda);
            } catch (const ScaleExceeded&) {
            }
        }
    }

    Rng rng(seed);
    for (size_t i = 0; i < sample_count; ++i) {
        long e = emin + static_cast<long>(rng.below(static_cast<std::uint64_t>(emax - emin + 1)));
        unsigned long m = rng.below(64);
        mpq_class r = mpq_class(64 + m) * pow2q(-e - 6);
        std::vector<mpq_class> x(n);
        if (i % 2 == 0) {
            const auto& balls = tree.levels[J].balls;
            const Ball& b = balls[rng.below(balls.size())];
            for (size_t c = 0; c < n; ++c) {
                long off = static_cast<long>(rng.below(1ull << 21)) - (1l << 20);
                mpq_class xx = b.center[c] + r * mpq_class(off) / mpq_class(1l << 19);
                xx -= floor_q(xx);
                x[c] = xx;
            }
        } else {
            for (size_t c = 0; c < n; ++c) x[c] = rng.dyadic(30);
        }
        mpq_class mu = mu_upper(M, BallQuery{x, r});
        if (mu == 0) {
            ++rep.zero_hits;
            continue;
        }
        Interval ratio = Interval(mu) / rat_pow(Interval(r), tree.config.s, 96);
        if (ratio.hi > rep.c_emp.hi) rep.c_emp = ratio;
        size_t l = 0;
        while (l < J && !(tree.levels[l].radius.hi <= r)) ++l;
        unsigned regime = static_cast<unsigned>(n) + 1;
        if (!lams[l].empty()) {
            mpq_class rr = r + tree.levels[l].radius.hi;
            for (size_t t = 0; t < lams[l].size(); ++t)
                if (rr <= lams[l][t]) {
                    regime = static_cast<unsigned>(t) + 1;
                    break;
                }
        }
        auto it = rep.per_regime.find(regime);
        if (it == rep.per_regime.end() || ratio.hi > it->second.hi) rep.per_regime[regime] = ratio;
    }
    return rep;
}

} // namespace dioph
