#include "dioph/lattice.hpp"

#include <algorithm>
#include <functional>

#include "dioph/errors.hpp"
#include "dioph/rng.hpp"
#include "dioph/scaled_scan.hpp"

namespace dioph {

namespace {

using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;

mpz_class zgcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

mpz_class nearest_z(const mpq_class& x) { return floor_q(x + mpq_class(1, 2)); }

// Hermite rows (upper triangular, positive pivots, entries above a pivot
// reduced into [0, pivot)) for the integer lattice Z·P + q·Z^n.
ZMat hermite_rows(const ZVec& P, const mpz_class& q) {
    const size_t n = P.size();
    ZMat rows;
    rows.push_back(P);
    for (size_t i = 0; i < n; ++i) {
        ZVec e(n, 0);
        e[i] = q;
        rows.push_back(e);
    }
    for (size_t col = 0; col < n; ++col) {
        for (;;) {
            size_t best = rows.size();
            for (size_t i = col; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                if (best == rows.size() ||
                    mpz_cmpabs(rows[i][col].get_mpz_t(), rows[best][col].get_mpz_t()) < 0)
                    best = i;
            }
            if (best == rows.size())
                throw CertificateFailure("hermite reduction lost a pivot column");
            std::swap(rows[col], rows[best]);
            if (rows[col][col] < 0)
                for (auto& x : rows[col]) x = -x;
            bool clear = true;
            for (size_t i = col + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                mpz_class f;
                mpz_fdiv_q(f.get_mpz_t(), rows[i][col].get_mpz_t(), rows[col][col].get_mpz_t());
                for (size_t j = 0; j < n; ++j) rows[i][j] -= f * rows[col][j];
                if (rows[i][col] != 0) clear = false;
            }
            if (clear) break;
        }
    }
    for (size_t i = n; i < rows.size(); ++i)
        for (const auto& x : rows[i])
            if (x != 0) throw CertificateFailure("hermite reduction left a nonzero tail row");
    rows.resize(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < i; ++j) {
            mpz_class f;
            mpz_fdiv_q(f.get_mpz_t(), rows[j][i].get_mpz_t(), rows[i][i].get_mpz_t());
            if (f != 0)
                for (size_t c = 0; c < n; ++c) rows[j][c] -= f * rows[i][c];
        }
    }
    return rows;
}

size_t rank_of(QMat m) {
    if (m.empty()) return 0;
    const size_t cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        for (size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c] == 0) continue;
            mpq_class f = m[i][c] / m[r][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

QMat inverse(const QMat& m) {
    const size_t n = m.size();
    QMat a = m, inv(n, QVec(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw DomainError("singular matrix");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        mpq_class d = a[c][c];
        for (size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            mpq_class f = a[i][c];
            for (size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[c][j];
                inv[i][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

void lll_reduce(QMat& b) {
    const size_t n = b.size();
    if (n < 2) return;
    auto dot = [](const QVec& u, const QVec& v) {
        mpq_class s = 0;
        for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
        return s;
    };
    QMat mu(n, QVec(n, 0));
    QVec Bn(n, 0);
    auto gs = [&]() {
        QMat bstar = b;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < i; ++j) {
                mu[i][j] = dot(b[i], bstar[j]) / Bn[j];
                for (size_t c = 0; c < bstar[i].size(); ++c)
                    bstar[i][c] -= mu[i][j] * bstar[j][c];
            }
            Bn[i] = dot(bstar[i], bstar[i]);
            if (Bn[i] == 0) throw CertificateFailure("dependent rows in lattice basis");
        }
    };
    gs();
    const mpq_class delta(3, 4);
    size_t k = 1;
    while (k < n) {
        for (size_t j = k; j-- > 0;) {
            mpz_class r = nearest_z(mu[k][j]);
            if (r != 0) {
                for (size_t c = 0; c < b[k].size(); ++c) b[k][c] -= mpq_class(r) * b[j][c];
                gs();
            }
        }
        if (Bn[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bn[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gs();
            if (k > 1) --k;
        }
    }
}

struct Candidate {
    mpq_class norm;
    QVec v;
};

// All nonzero lattice vectors with sup norm <= R (sign-canonical: first
// nonzero coordinate positive), sorted by (norm, lex).
std::vector<Candidate> enumerate_within(const QMat& B, const mpq_class& R) {
    const size_t n = B.size();
    QMat inv = inverse(B);
    std::vector<long> bound(n);
    double volume = 1;
    for (size_t j = 0; j < n; ++j) {
        mpq_class colsum = 0;
        for (size_t i = 0; i < n; ++i) colsum += abs(inv[i][j]);
        mpz_class bb = floor_q(R * colsum);
        if (!bb.fits_slong_p()) throw ScaleExceeded("minima enumeration box too large");
        bound[j] = bb.get_si();
        volume *= 2.0 * static_cast<double>(bound[j]) + 1.0;
        if (volume > 2e7) throw ScaleExceeded("minima enumeration box too large");
    }
    std::vector<Candidate> out;
    std::vector<long> c(n, 0);
    std::function<void(size_t)> walk = [&](size_t depth) {
        if (depth == n) {
            QVec v(B[0].size(), 0);
            bool zero = true;
            for (size_t i = 0; i < n; ++i) {
                if (c[i] == 0) continue;
                zero = false;
                for (size_t j = 0; j < v.size(); ++j) v[j] += mpq_class(c[i]) * B[i][j];
            }
            if (zero) return;
            for (const auto& x : v) {
                if (x == 0) continue;
                if (x < 0) return; // mirrored coefficients cover the negative
                break;
            }
            mpq_class nn = sup_norm(v);
            if (nn <= R) out.push_back({nn, std::move(v)});
            return;
        }
        for (long t = -bound[depth]; t <= bound[depth]; ++t) {
            c[depth] = t;
            walk(depth + 1);
        }
    };
    walk(0);
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        int cn = cmp(a.norm, b.norm);
        if (cn != 0) return cn < 0;
        return a.v < b.v;
    });
    return out;
}

struct Analysis {
    std::vector<MinimaEntry> minima;
    QMat reduced;
    std::vector<mpq_class> ratios;
    mpq_class c_red;
    mpq_class quasi_c;
};

Analysis analyze(const QMat& basis, const mpz_class& q) {
    const size_t n = basis.size();
    if (n > 4) throw ScaleExceeded("minima enumeration supports n <= 4");
    Analysis an;

    QMat lll = basis;
    lll_reduce(lll);
    mpq_class R = 0;
    for (const auto& row : lll) R = std::max(R, sup_norm(row));
    std::vector<Candidate> cands = enumerate_within(lll, R);

    QMat sel;
    for (const auto& cand : cands) {
        QMat test = sel;
        test.push_back(cand.v);
        if (rank_of(test) == test.size()) {
            an.minima.push_back({cand.norm, cand.v});
            sel.push_back(cand.v);
            if (sel.size() == n) break;
        }
    }
    if (an.minima.size() != n)
        throw CertificateFailure("minima enumeration found fewer than n independent vectors");

    mpq_class prod(q);
    mpz_class fact = 1;
    for (size_t i = 0; i < n; ++i) {
        prod *= an.minima[i].lambda;
        fact *= static_cast<long>(i + 1);
    }
    if (prod > 1 || prod * fact < 1)
        throw CertificateFailure("Minkowski bracket 1/n! <= q·prod(lambda) <= 1 violated");

    std::sort(lll.begin(), lll.end(), [](const QVec& a, const QVec& b) {
        int cn = cmp(sup_norm(a), sup_norm(b));
        if (cn != 0) return cn < 0;
        return a < b;
    });
    mpq_class dref = det_abs(lll);
    for (size_t i = 0; i < n; ++i) {
        if (lll[i] == an.minima[i].witness) continue;
        for (const auto& cand : cands) {
            if (cand.norm != an.minima[i].lambda) continue;
            QVec saved = lll[i];
            lll[i] = cand.v;
            if (det_abs(lll) == dref) break; // still a basis, now attaining lambda_i
            lll[i] = saved;
        }
    }
    an.reduced = lll;
    an.c_red = 0;
    for (size_t i = 0; i < n; ++i) {
        mpq_class ratio = sup_norm(lll[i]) / an.minima[i].lambda;
        an.ratios.push_back(ratio);
        if (ratio > an.c_red) an.c_red = ratio;
    }
    // a priori LLL certificate: ratio <= 2^((n-1)/2)·sqrt(n), squared to stay rational
    mpq_class cap(mpz_class(1) << (n - 1));
    cap *= static_cast<long>(n);
    if (an.c_red * an.c_red > cap)
        throw CertificateFailure("reduced-basis ratio exceeds the reduction guarantee");

    Rng rng(12345);
    std::vector<mpq_class> enorm;
    for (const auto& row : lll) enorm.push_back(sup_norm(row));
    mpq_class qc = -1;
    int done = 0;
    while (done < 32) {
        std::vector<long> x(n);
        bool zero = true;
        for (auto& xi : x) {
            xi = static_cast<long>(rng.below(17)) - 8;
            if (xi != 0) zero = false;
        }
        if (zero) continue;
        QVec s(lll[0].size(), 0);
        mpq_class denom = 0;
        for (size_t i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            for (size_t j = 0; j < s.size(); ++j) s[j] += mpq_class(x[i]) * lll[i][j];
            mpq_class term = mpq_class(std::abs(x[i])) * enorm[i];
            if (term > denom) denom = term;
        }
        mpq_class val = sup_norm(s) / denom;
        if (qc < 0 || val < qc) qc = val;
        ++done;
    }
    if (qc <= 0) throw CertificateFailure("reduced basis fails quasi-orthogonality sampling");
    an.quasi_c = qc;
    return an;
}

QVec reduce_center(const QVec& x) {
    QVec out;
    out.reserve(x.size());
    for (const auto& c : x) out.push_back(c - mpq_class(floor_q(c)));
    return out;
}

CountResult count_exact(const TargetVector& A, const mpz_class& qk, const QVec& x,
                        const mpq_class& r) {
    if (!qk.fits_ulong_p() || mpz_get_ui(qk.get_mpz_t()) > kScanLimit)
        throw ScaleExceeded("exact count supports q_k <= 10^7");
    const std::uint64_t Q = mpz_get_ui(qk.get_mpz_t());
    CountResult res;
    res.mode = CountMode::Exact;

    mpq_class d0 = 0; // q = 0 distance is exact: sup_i ||x_i||
    for (const auto& xi : x) {
        mpq_class t = std::min(xi, mpq_class(1 - xi));
        if (t > d0) d0 = t;
    }
    if (d0 <= r) res.witnesses.push_back(0);

    if (Q > 1) {
        scan::ScaledVector sv = scan::scale_target(A);
        std::vector<std::uint64_t> off = scan::scale_offsets(x, sv.w);
        scan::Walker w(sv, &off);
        scan::ScaledThreshold t = scan::scale_threshold(Interval(r), sv.w);
        const unsigned long cap = precision_cap();
        for (std::uint64_t q = 1; q < Q; ++q) {
            scan::SupDistBounds b = w.bounds();
            bool inside;
            if (b.hi <= t.lo) {
                inside = true;
            } else if (b.lo > t.hi) {
                inside = false;
            } else {
                inside = false;
                for (unsigned long p = 96;;) {
                    Interval d = dist_qA(A, mpz_class(q), &x, p);
                    int c = icmp(d, Interval(r));
                    if (c != 0) {
                        inside = c < 0;
                        break;
                    }
                    if (d.is_point()) {
                        inside = true; // exactly on the closed boundary
                        break;
                    }
                    if (p >= cap)
                        throw PrecisionExhausted("ball boundary grazes the orbit at q = " +
                                                 std::to_string(q));
                    p = std::min(p * 2, cap);
                }
            }
            if (inside) res.witnesses.push_back(q);
            w.advance();
        }
    }
    res.lower = res.upper = static_cast<long>(res.witnesses.size());
    return res;
}

// Count Lambda points (reps in [0,1)^n) within the closed sup ball B(x, s),
// walking the triangular Hermite rows column by column.
mpz_class count_lambda(const ZMat& H, const mpz_class& q, const QVec& x, const mpq_class& s,
                       std::vector<ZVec>* collect) {
    const size_t n = H.size();
    struct Range {
        mpz_class lo, hi;
    };
    std::vector<std::vector<Range>> axis(n);
    for (size_t i = 0; i < n; ++i) {
        if (2 * s >= 1) {
            axis[i].push_back({mpz_class(0), q - 1});
            continue;
        }
        mpq_class a = x[i] - s, b = x[i] + s;
        mpq_class fa = a - mpq_class(floor_q(a)), fb = b - mpq_class(floor_q(b));
        if (fa <= fb) {
            axis[i].push_back({ceil_q(fa * q), floor_q(fb * q)});
        } else {
            axis[i].push_back({mpz_class(0), floor_q(fb * q)});
            axis[i].push_back({ceil_q(fa * q), q - 1});
        }
    }
    mpz_class count = 0;
    ZVec partial(n, 0);
    std::function<void(size_t)> walk = [&](size_t depth) {
        if (depth == n) {
            ++count;
            if (collect) collect->push_back(partial);
            return;
        }
        const mpz_class& d = H[depth][depth];
        for (const Range& rg : axis[depth]) {
            if (rg.lo > rg.hi) continue;
            mpz_class clo, chi;
            mpz_class nlo = rg.lo - partial[depth], nhi = rg.hi - partial[depth];
            mpz_cdiv_q(clo.get_mpz_t(), nlo.get_mpz_t(), d.get_mpz_t());
            mpz_fdiv_q(chi.get_mpz_t(), nhi.get_mpz_t(), d.get_mpz_t());
            ZVec saved(partial.begin() + depth, partial.end());
            for (mpz_class c = clo; c <= chi; ++c) {
                for (size_t j = depth; j < n; ++j)
                    partial[j] = saved[j - depth] + c * H[depth][j];
                walk(depth + 1);
            }
            std::copy(saved.begin(), saved.end(), partial.begin() + depth);
        }
    };
    walk(0);
    return count;
}

// Unique l in [0, q) with l·P = v (mod q); exists since gcd(gcd(P), q) = 1.
mpz_class recover_q(const ZVec& P, const mpz_class& qk, const ZVec& v) {
    mpz_class g = qk;
    ZVec u(P.size(), 0);
    for (size_t i = 0; i < P.size() && g != 1; ++i) {
        mpz_class g2, s, t;
        mpz_gcdext(g2.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(),
                   P[i].get_mpz_t());
        for (auto& uu : u) uu = uu * s % qk;
        u[i] = (u[i] + t) % qk;
        g = g2;
    }
    if (g != 1) throw DegenerateLattice("no modular inverse: gcd(gcd(P), q) > 1");
    mpz_class l = 0;
    for (size_t i = 0; i < P.size(); ++i) l += u[i] * v[i];
    mpz_fdiv_r(l.get_mpz_t(), l.get_mpz_t(), qk.get_mpz_t());
    for (size_t j = 0; j < P.size(); ++j)
        if ((l * P[j] - v[j]) % qk != 0)
            throw CertificateFailure("modular recovery does not reproduce the lattice point");
    return l;
}

CountResult count_fast(const BestApproxSequence& seq, size_t k, const QVec& x,
                       const mpq_class& r) {
    const BestApproxRecord& rec = seq.records[k];
    mpz_class g = rec.q;
    for (const auto& p : rec.P) g = zgcd(g, p);
    if (g > 1)
        throw DegenerateLattice("gcd(gcd(P_k), q_k) = " + g.get_str() + " > 1");
    ZMat H = hermite_rows(rec.P, rec.q);

    const Interval& rho1 = rec.rho_next; // rho_{k+1}
    CountResult res;
    res.mode = CountMode::LatticeFast;
    res.upper = count_lambda(H, rec.q, x, r + rho1.hi, nullptr);
    mpq_class shrunk = r - rho1.hi;
    if (shrunk > 0) {
        std::vector<ZVec> pts;
        res.lower = count_lambda(H, rec.q, x, shrunk, &pts);
        for (const auto& v : pts) res.witnesses.push_back(recover_q(rec.P, rec.q, v));
        std::sort(res.witnesses.begin(), res.witnesses.end());
    } else {
        res.lower = 0;
    }
    return res;
}

} // namespace

mpq_class sup_norm(const QVec& v) {
    mpq_class m = 0;
    for (const auto& x : v) {
        mpq_class a = abs(x);
        if (a > m) m = a;
    }
    return m;
}

mpq_class det_abs(const QMat& m) {
    QMat a = m;
    const size_t n = a.size();
    mpq_class det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) std::swap(a[p], a[c]);
        det *= a[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            mpq_class f = a[i][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return abs(det);
}

TorusLattice build_lattice(const BestApproxRecord& rec) {
    const size_t n = rec.P.size();
    if (n == 0) throw DomainError("record carries an empty P_k");
    if (rec.q < 1) throw DomainError("q_k must be positive");
    mpz_class g = rec.q;
    for (const auto& p : rec.P) g = zgcd(g, p);
    if (g > 1)
        throw DegenerateLattice("gcd(gcd(P_k), q_k) = " + g.get_str() +
                                " > 1: the lattice index drops below q_k");

    TorusLattice L;
    L.q_k = rec.q;
    L.P_k = rec.P;
    ZMat H = hermite_rows(rec.P, rec.q);
    mpz_class piv = 1, expect;
    for (size_t i = 0; i < n; ++i) piv *= H[i][i];
    mpz_pow_ui(expect.get_mpz_t(), rec.q.get_mpz_t(), static_cast<unsigned long>(n - 1));
    if (piv != expect)
        throw CertificateFailure("hermite pivots disagree with the expected lattice index");
    L.basis.assign(n, QVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) L.basis[i][j] = mpq_class(H[i][j]) / mpq_class(rec.q);
    if (det_abs(L.basis) * mpq_class(rec.q) != 1)
        throw CertificateFailure("lattice determinant is not 1/q_k");

    Analysis an = analyze(L.basis, rec.q);
    L.minima = std::move(an.minima);
    L.reduced_basis = std::move(an.reduced);
    L.reduced_ratios = std::move(an.ratios);
    L.c_red = an.c_red;
    L.quasi_c = an.quasi_c;
    return L;
}

std::vector<MinimaEntry> successive_minima(const TorusLattice& L) {
    return analyze(L.basis, L.q_k).minima;
}

QMat reduce_basis(const TorusLattice& L) {
    return analyze(L.basis, L.q_k).reduced;
}

CountResult count_gamma_in_ball(const BestApproxSequence& seq, size_t k, const BallQuery& B,
                                CountMode mode) {
    if (k >= seq.records.size())
        throw IndexOutOfRange("k = " + std::to_string(k) + " beyond " +
                              std::to_string(seq.records.size()) + " records");
    const size_t n = seq.target.n();
    if (B.center.size() != n) throw DomainError("ball center dimension mismatch");
    if (B.radius <= 0 || B.radius > mpq_class(1, 2))
        throw DomainError("torus ball radius must satisfy 0 < r <= 1/2");
    QVec x = reduce_center(B.center);
    if (mode == CountMode::Exact)
        return count_exact(seq.target, seq.records[k].q, x, B.radius);
    return count_fast(seq, k, x, B.radius);
}

Lemma1Bound lemma1_bound(const TorusLattice& L, const mpq_class& r, const mpq_class& C_cal) {
    if (r <= 0) throw DomainError("radius must be positive");
    if (L.minima.empty()) throw DomainError("lattice carries no minima");
    const size_t n = L.n();
    unsigned regime = static_cast<unsigned>(n) + 1;
    for (size_t i = 0; i < n; ++i) {
        if (r <= L.minima[i].lambda) {
            regime = static_cast<unsigned>(i) + 1;
            break;
        }
    }
    Lemma1Bound out;
    out.regime = regime;
    mpq_class q(L.q_k);
    if (regime == n + 1) {
        mpq_class rn = 1;
        for (size_t i = 0; i < n; ++i) rn *= r;
        out.form_a = C_cal * q * rn;
        out.form_b = out.form_a;
    } else {
        out.form_a = C_cal;
        for (unsigned j = 0; j + 1 < regime; ++j) out.form_a *= r / L.minima[j].lambda;
        out.form_b = C_cal * q;
        for (size_t j = regime - 1; j < n; ++j) out.form_b *= L.minima[j].lambda;
        for (unsigned t = 1; t < regime; ++t) out.form_b *= r;
    }
    return out;
}

mpq_class calibrate_C(const BestApproxSequence& seq, unsigned long samples, std::uint64_t seed,
                      const mpz_class& q_eligible) {
    std::vector<size_t> elig;
    for (size_t k = 0; k < seq.records.size(); ++k)
        if (seq.records[k].q <= q_eligible) elig.push_back(k);
    if (elig.empty()) throw DomainError("no records within the eligible calibration scale");
    std::vector<TorusLattice> lat;
    lat.reserve(elig.size());
    for (size_t k : elig) lat.push_back(build_lattice(seq.records[k]));

    Rng rng(seed);
    const size_t n = seq.target.n();
    mpq_class best = 0;
    for (unsigned long s = 0; s < samples; ++s) {
        size_t ki = static_cast<size_t>(rng.below(elig.size()));
        unsigned long t = 1 + static_cast<unsigned long>(rng.below(24));
        mpz_class mant = mpz_class(1) << 29;
        mant += static_cast<unsigned long>(rng.below(std::uint64_t(1) << 29));
        mpq_class r(mant, mpz_class(1) << (30 + t));
        r.canonicalize();
        QVec x;
        for (size_t i = 0; i < n; ++i) {
            mpq_class xi(mpz_class(static_cast<unsigned long>(rng.below(std::uint64_t(1) << 30))),
                         mpz_class(1) << 30);
            xi.canonicalize();
            x.push_back(xi);
        }
        CountResult c = count_exact(seq.target, seq.records[elig[ki]].q, x, r);
        if (c.lower == 0) continue;
        Lemma1Bound b = lemma1_bound(lat[ki], r, 1);
        mpq_class ratio = mpq_class(c.lower) / b.form_a;
        if (ratio > best) best = ratio;
    }
    if (best == 0) throw CertificateFailure("calibration sampled no nonempty balls");
    return best;
}

bool lambda_rho_bracket(const BestApproxSequence& seq, size_t k, const TorusLattice& L) {
    if (k < 1 || k >= seq.records.size())
        throw IndexOutOfRange("bracket needs 1 <= k < record count");
    Interval rho_k = rho(seq, k);
    const Interval& rho_k1 = seq.records[k].rho_next;
    const mpq_class& l1 = L.minima.at(0).lambda;
    return l1 >= rho_k.hi - rho_k1.lo && l1 <= rho_k.lo + rho_k1.lo;
}

} // namespace dioph
