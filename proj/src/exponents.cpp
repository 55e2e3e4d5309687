#include "dioph/exponents.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "dioph/errors.hpp"
#include "dioph/scaled_scan.hpp"

namespace dioph {

namespace {

Interval imul_z(Interval a, const mpz_class& z) {
    a.lo *= z;
    a.hi *= z;
    if (sgn(z) < 0) std::swap(a.lo, a.hi);
    return a;
}

// log(1/dist)/log(scale), scale >= 2, dist subinterval of (0, 1/2].
Interval ratio_of(const Interval& dist, const mpz_class& scale) {
    Interval num = -ilog(dist, 96);
    Interval den = ilog(Interval(mpq_class(scale)), 96);
    return num / den;
}

Interval tail_min(const std::vector<ExponentSample>& s, size_t from) {
    Interval m = s.at(from).ratio;
    for (size_t i = from + 1; i < s.size(); ++i) {
        if (s[i].ratio.lo < m.lo) m.lo = s[i].ratio.lo;
        if (s[i].ratio.hi < m.hi) m.hi = s[i].ratio.hi;
    }
    return m;
}

// ||q·A - beta|| with beta an expression vector, width <= 2^-(p+1).
Interval dist_qAB(const TargetVector& A, const mpz_class& q, const TargetVector& beta,
                  unsigned long p) {
    unsigned long bits_q = mpz_sizeinbase(q.get_mpz_t(), 2);
    std::vector<Interval> a = approx_vec(A, p + bits_q + 2);
    std::vector<Interval> b = approx_vec(beta, p + 2);
    std::vector<Interval> comps;
    comps.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) comps.push_back(imul_z(a[i], q) - b[i]);
    return torus_dist(comps);
}

// ||sum_i q_i·alpha_i|| for an integer row vector q, width <= 2^-(p+1).
Interval dist_form(const TargetVector& A, const std::vector<long>& qv, unsigned long p) {
    unsigned long amax = 1;
    for (long x : qv) amax += static_cast<unsigned long>(std::abs(x));
    unsigned long extra = 0;
    while ((1ul << extra) < amax) ++extra;
    std::vector<Interval> a = approx_vec(A, p + extra + 1);
    Interval acc((mpq_class(0)));
    for (size_t i = 0; i < qv.size(); ++i)
        if (qv[i] != 0) acc = acc + imul_z(a[i], mpz_class(qv[i]));
    return torus_dist1(acc);
}

} // namespace

ExponentEstimate omega_hat_column(const BestApproxSequence& seq) {
    if (seq.records.size() < 3)
        throw InsufficientData("uniform-column estimate needs at least 3 records");
    ExponentEstimate est;
    est.kind = ExponentKind::UniformColumn;
    const unsigned long cap = precision_cap();
    for (size_t k = 1; k < seq.records.size() && !est.infinite; ++k) {
        Interval r = rho(seq, k);
        unsigned long p = 96;
        while (sgn(r.lo) <= 0) {
            if (r.is_point()) {
                est.infinite = true;
                break;
            }
            if (p >= cap)
                throw PrecisionExhausted("rho at k = " + std::to_string(k) +
                                         " cannot be separated from zero at the precision cap");
            p = std::min(p * 2, cap);
            r = dist_qA(seq.target, seq.records[k - 1].q, nullptr, p);
        }
        if (est.infinite) break;
        est.samples.push_back({seq.records[k].q, ratio_of(r, seq.records[k].q)});
    }
    if (est.infinite) {
        est.estimate = Interval(mpq_class(0));
        est.window = "aborted: certified zero distance";
        return est;
    }
    size_t from = est.samples.size() / 2;
    est.estimate = tail_min(est.samples, from);
    est.window = "tail half: q_k in [" + est.samples[from].scale.get_str() + ", " +
                 est.samples.back().scale.get_str() + "]";
    const long n = static_cast<long>(seq.target.n());
    if (est.estimate.hi < mpq_class(1, n) - mpq_class(1, 20))
        est.anomalies.push_back("estimate " + dec_upper(est.estimate.hi) +
                                " below the Dirichlet floor 1/n - 0.05");
    if (est.estimate.lo > mpq_class(21, 20))
        est.anomalies.push_back("estimate " + dec_lower(est.estimate.lo) +
                                " above the ceiling 1 + 0.05");
    return est;
}

std::vector<mpz_class> default_grid(const mpz_class& Q_max) {
    if (Q_max < 2) throw DomainError("Q_max must be >= 2");
    std::vector<mpz_class> g;
    mpz_class q = Q_max < 10 ? Q_max : mpz_class(10);
    for (; q < Q_max; q *= 2) g.push_back(q);
    g.push_back(Q_max);
    return g;
}

ExponentEstimate omega_hat_row(const DualForm& F, const std::vector<mpz_class>& Q_grid) {
    const TargetVector& A = F.row;
    const size_t n = A.n();
    if (Q_grid.empty()) throw DomainError("empty Q grid");
    for (size_t i = 0; i < Q_grid.size(); ++i) {
        if (Q_grid[i] < 2) throw DomainError("grid scales must be >= 2");
        if (i > 0 && Q_grid[i] <= Q_grid[i - 1])
            throw DomainError("grid must be strictly increasing");
    }
    mpz_class vol = 1;
    for (size_t i = 0; i < n; ++i) vol *= 2 * Q_grid.back() + 1;
    if (vol > 100000000)
        throw ScaleExceeded("|q| box of size " + vol.get_str() +
                            " exceeds the 10^8 enumeration guard");
    const long Q = Q_grid.back().get_si();

    struct Best {
        std::uint64_t lo = 0, hi = 0;
        std::vector<long> qv;
        bool set = false;
    };
    scan::ScaledVector sv = scan::scale_target(A);
    const std::uint64_t mod = sv.mod, half = mod >> 1;
    const unsigned long cap = precision_cap();

    auto merge_min = [&](Best& inc, const Best& cand) {
        if (!inc.set) {
            inc = cand;
            return;
        }
        if (cand.lo > inc.hi) return;
        if (cand.hi < inc.lo) {
            inc = cand;
            return;
        }
        for (unsigned long p = 96;;) {
            Interval dc = dist_form(A, cand.qv, p), di = dist_form(A, inc.qv, p);
            int c = icmp(dc, di);
            if (c < 0) {
                scan::ScaledThreshold st = scan::scale_threshold(dc, sv.w);
                inc = cand;
                inc.lo = st.lo;
                inc.hi = st.hi;
                return;
            }
            if (c > 0) {
                scan::ScaledThreshold st = scan::scale_threshold(di, sv.w);
                inc.lo = st.lo;
                inc.hi = st.hi;
                return;
            }
            if (dc.is_point() && di.is_point()) return; // exact tie: min unaffected
            if (p >= cap)
                throw PrecisionExhausted("row minimum order undecided at the precision cap");
            p = std::min(p * 2, cap);
        }
    };

    std::vector<Best> shell(static_cast<size_t>(Q) + 1);
    std::vector<long> q(n, 0);
    std::function<void(size_t, bool)> walk = [&](size_t depth, bool nonzero) {
        if (depth == n) {
            long s = 0;
            std::uint64_t asum = 0;
            for (long x : q) {
                s = std::max(s, std::abs(x));
                asum += static_cast<std::uint64_t>(std::abs(x));
            }
            __int128 acc = 0;
            for (size_t i = 0; i < n; ++i)
                acc += static_cast<__int128>(q[i]) * static_cast<__int128>(sv.step[i]);
            std::uint64_t pos = static_cast<std::uint64_t>(acc & static_cast<__int128>(mod - 1));
            std::uint64_t t = std::min(pos, mod - pos);
            std::uint64_t slack = 2 * asum;
            Best cand;
            cand.lo = t > slack ? t - slack : 0;
            cand.hi = std::min(t + slack, half);
            cand.qv = q;
            cand.set = true;
            merge_min(shell[static_cast<size_t>(s)], cand);
            return;
        }
        if (!nonzero) {
            q[depth] = 0;
            walk(depth + 1, false);
            for (long t = 1; t <= Q; ++t) { // first nonzero coordinate positive
                q[depth] = t;
                walk(depth + 1, true);
            }
        } else {
            for (long t = -Q; t <= Q; ++t) {
                q[depth] = t;
                walk(depth + 1, true);
            }
        }
        q[depth] = 0;
    };
    walk(0, false);

    ExponentEstimate est;
    est.kind = ExponentKind::UniformRow;
    Best run;
    size_t gi = 0;
    for (long s = 1; s <= Q && !est.infinite; ++s) {
        if (shell[static_cast<size_t>(s)].set) merge_min(run, shell[static_cast<size_t>(s)]);
        while (gi < Q_grid.size() && Q_grid[gi] == s) {
            if (!run.set) throw CertificateFailure("no nonzero vector below the grid scale");
            Interval m = dist_form(A, run.qv, 96);
            unsigned long p = 96;
            while (sgn(m.lo) <= 0) {
                if (m.is_point()) {
                    est.infinite = true;
                    break;
                }
                if (p >= cap)
                    throw PrecisionExhausted(
                        "row minimum cannot be separated from zero at the precision cap");
                p = std::min(p * 2, cap);
                m = dist_form(A, run.qv, p);
            }
            if (est.infinite) break;
            est.samples.push_back({mpz_class(s), ratio_of(m, mpz_class(s))});
            ++gi;
        }
    }
    if (est.infinite) {
        est.estimate = Interval(mpq_class(0));
        est.window = "aborted: certified zero distance";
        return est;
    }
    if (est.samples.empty()) throw InsufficientData("grid produced no samples");
    size_t from = est.samples.size() / 2;
    est.estimate = tail_min(est.samples, from);
    est.window = "tail half: Q in [" + est.samples[from].scale.get_str() + ", " +
                 est.samples.back().scale.get_str() + "]";
    if (est.estimate.hi < mpq_class(static_cast<long>(n)) - mpq_class(1, 5))
        est.anomalies.push_back("estimate " + dec_upper(est.estimate.hi) +
                                " below the Dirichlet floor n - 0.2");
    return est;
}

ExponentEstimate omega_inhom(const TargetVector& A, const TargetVector& beta,
                             const mpz_class& q_max) {
    if (beta.n() != A.n()) throw DomainError("beta dimension mismatch");
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    if (!q_max.fits_ulong_p() || mpz_get_ui(q_max.get_mpz_t()) > kScanLimit)
        throw ScaleExceeded("inhomogeneous scan supports q_max <= 10^7");
    const std::uint64_t Q = mpz_get_ui(q_max.get_mpz_t());

    ExponentEstimate est;
    est.kind = ExponentKind::Inhomogeneous;
    scan::ScaledVector sv = scan::scale_target(A);
    scan::ScaledVector bv = scan::scale_fracs(fractional_parts(beta, sv.w + 2), sv.w);
    scan::Walker w(sv, &bv.step);
    const unsigned long cap = precision_cap();

    bool have = false;
    mpz_class best_q;
    std::uint64_t best_lo = 0, best_hi = 0;
    for (std::uint64_t q = 1; q <= Q; ++q, w.advance()) {
        scan::SupDistBounds b = w.bounds();
        int verdict; // 1 record, 0 skip, -1 unresolved
        if (!have) {
            verdict = 1;
        } else if (b.lo > best_hi) {
            verdict = 0;
        } else if (b.hi < best_lo) {
            verdict = 1;
        } else {
            verdict = -1;
            try {
                for (unsigned long p = 96;;) {
                    Interval dq = dist_qAB(A, mpz_class(q), beta, p);
                    Interval db = dist_qAB(A, best_q, beta, p);
                    int c = icmp(dq, db);
                    if (c != 0) {
                        verdict = c < 0 ? 1 : 0;
                        break;
                    }
                    if (dq.is_point() && db.is_point()) {
                        verdict = 0; // exact tie: not strictly smaller
                        break;
                    }
                    if (p >= cap) break; // leave unresolved
                    p = std::min(p * 2, cap);
                }
            } catch (const PrecisionExhausted&) {
                verdict = -1; // probe over the cap: unresolved
            }
        }
        if (verdict == 1) {
            Interval d = dist_qAB(A, mpz_class(q), beta, 96);
            try {
                unsigned long p = 96;
                while (sgn(d.lo) <= 0 && !d.is_point() && p < cap) {
                    p = std::min(p * 2, cap);
                    d = dist_qAB(A, mpz_class(q), beta, p);
                }
            } catch (const PrecisionExhausted&) {
                // keep the last straddling interval; handled below
            }
            if (d.is_point() && sgn(d.lo) == 0) {
                est.infinite = true;
                est.window = "certified zero distance at q = " + std::to_string(q);
                break;
            }
            if (sgn(d.lo) <= 0) {
                verdict = -1; // distance straddles zero at the cap
            } else {
                best_q = static_cast<unsigned long>(q);
                scan::ScaledThreshold st = scan::scale_threshold(d, sv.w);
                best_lo = st.lo;
                best_hi = st.hi;
                have = true;
                if (q >= 2) est.samples.push_back({best_q, ratio_of(d, best_q)});
            }
        }
        if (verdict == -1)
            est.anomalies.push_back("distance at q = " + std::to_string(q) +
                                    " unresolved at the precision cap; skipped");
    }
    if (est.infinite) {
        est.estimate = Interval(mpq_class(0));
        return est;
    }
    if (est.samples.empty())
        throw InsufficientData("no record samples with q >= 2; raise q_max");
    mpz_class sq;
    mpz_sqrt(sq.get_mpz_t(), q_max.get_mpz_t());
    Interval mx;
    bool any = false;
    for (const auto& s : est.samples) {
        if (s.scale <= sq) continue;
        if (!any) {
            mx = s.ratio;
            any = true;
        } else {
            if (s.ratio.lo > mx.lo) mx.lo = s.ratio.lo;
            if (s.ratio.hi > mx.hi) mx.hi = s.ratio.hi;
        }
    }
    if (any) {
        est.window = "records with q > " + sq.get_str();
    } else {
        est.anomalies.push_back("no records beyond sqrt(q_max); estimate falls back to all samples");
        mx = est.samples.front().ratio;
        for (const auto& s : est.samples) {
            if (s.ratio.lo > mx.lo) mx.lo = s.ratio.lo;
            if (s.ratio.hi > mx.hi) mx.hi = s.ratio.hi;
        }
        est.window = "all samples (fallback)";
    }
    est.estimate = mx;
    return est;
}

mpq_class bound_theorem1(const mpq_class& omega_hat_row) {
    if (omega_hat_row <= 0)
        throw DomainError("omega-hat must be positive (an infinite flag maps to bound 0)");
    return mpq_class(1) / omega_hat_row;
}

mpq_class bound_eq2(const mpq_class& v, unsigned n, const mpq_class& omega_hat_row) {
    if (omega_hat_row <= 0) throw DomainError("omega-hat must be positive");
    if (v * omega_hat_row <= 1)
        throw DomainError("bound (2) needs v > 1/omega-hat = " +
                          rat_str(mpq_class(1) / omega_hat_row));
    mpq_class inner = 1 + (v * omega_hat_row - 1) / (1 + v);
    return mpq_class(static_cast<long>(n)) - 1 + mpq_class(1) / inner;
}

mpq_class bound_eq3(const mpq_class& v, unsigned n, unsigned m) {
    if (v <= 0) throw DomainError("v must be positive");
    mpq_class mv = mpq_class(static_cast<long>(m)) / v;
    mpq_class nn(static_cast<long>(n));
    return mv < nn ? mv : nn;
}

TransferReport check_transfer(const TargetVector& A, const std::vector<TargetVector>& betas,
                              const mpz_class& q_max, const mpz_class& Q_max) {
    TransferReport rep;
    rep.tol = mpq_class(1, 10);
    rep.row_estimate = omega_hat_row(DualForm{A}, default_grid(Q_max));
    if (rep.row_estimate.infinite || rep.row_estimate.estimate.lo <= 0)
        rep.bound = Interval(mpq_class(0));
    else
        rep.bound = Interval(mpq_class(1)) / rep.row_estimate.estimate;
    const mpq_class factor = 1 - rep.tol;

    std::vector<Interval> ests;
    for (const auto& b : betas) {
        TransferCase tc;
        tc.beta_text = b.text();
        tc.estimate = omega_inhom(A, b, q_max);
        tc.pass = tc.estimate.infinite ||
                  tc.estimate.estimate.lo >= factor * rep.bound.hi;
        if (!tc.estimate.infinite) ests.push_back(tc.estimate.estimate);
        rep.cases.push_back(std::move(tc));
    }
    if (!ests.empty()) {
        std::sort(ests.begin(), ests.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        rep.median = ests[(ests.size() - 1) / 2];
    }
    rep.low_confidence = q_max < 1000 || Q_max < 50;
    if (rep.low_confidence)
        rep.anomalies.push_back("LowConfidence: budget too small for stable proxies");
    return rep;
}

std::vector<std::string> monotonicity_anomalies(const ExponentEstimate& small_budget,
                                                const ExponentEstimate& large_budget) {
    if (small_budget.kind != large_budget.kind)
        throw DomainError("cannot compare estimates of different kinds");
    std::vector<std::string> out;
    if (small_budget.infinite || large_budget.infinite) return out;
    if (small_budget.kind == ExponentKind::Inhomogeneous) {
        if (large_budget.estimate.hi < small_budget.estimate.lo)
            out.push_back("inhomogeneous estimate decreased as the budget grew: " +
                          dec_upper(large_budget.estimate.hi) + " < " +
                          dec_lower(small_budget.estimate.lo));
    } else {
        if (large_budget.estimate.lo > small_budget.estimate.hi)
            out.push_back("uniform tail-min increased as the budget grew: " +
                          dec_lower(large_budget.estimate.lo) + " > " +
                          dec_upper(small_budget.estimate.hi));
    }
    return out;
}

std::optional<std::string> corollary_crosscheck(const ExponentEstimate& column,
                                                const ExponentEstimate& row, unsigned n) {
    if (column.infinite || row.infinite) return std::nullopt;
    mpq_class mid_c = column.estimate.mid(), mid_r = row.estimate.mid();
    if (abs(mid_c - mpq_class(1, static_cast<long>(n))) > mpq_class(1, 20))
        return std::nullopt;
    if (abs(mid_r - mpq_class(static_cast<long>(n))) <= mpq_class(1, 5)) return std::nullopt;
    return "column estimate sits near 1/n but row estimate " + dec_lower(row.estimate.lo) +
           " is not within 0.2 of n";
}

} // namespace dioph
