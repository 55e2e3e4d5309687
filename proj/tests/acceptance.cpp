// Acceptance gate. Each criterion prints exactly one line
//   Cxx PASS (measured detail)   or   Cxx FAIL (measured detail)
// and the process exit status is the number of failures. Criteria never
// soften a check to pass: a FAIL line carries the measured values so the
// log documents what the build actually achieves. Arguments select
// criteria by number; no arguments runs all twelve.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "dioph/bestapprox.hpp"
#include "dioph/cantor.hpp"
#include "dioph/cli.hpp"
#include "dioph/dimension.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/interval.hpp"
#include "dioph/json_io.hpp"
#include "dioph/lattice.hpp"
#include "dioph/numeric.hpp"
#include "dioph/rng.hpp"

namespace {

using namespace dioph;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string dshort(const mpq_class& x, size_t chars) {
    std::string s = dec_lower(x);
    if (s.size() > chars) s = s.substr(0, chars);
    return s;
}

std::string irange(const Interval& x, size_t chars = 6) {
    return "[" + dshort(x.lo, chars) + ", " + dshort(x.hi, chars) + "]";
}

const TargetVector& pair_target() {
    static TargetVector t = TargetVector::parse("sqrt(2),sqrt(3)");
    return t;
}

const BestApproxSequence& pair_seq_100k() {
    static BestApproxSequence s = best_approx_sequence(pair_target(), 100000);
    return s;
}

const BestApproxSequence& pair_seq_200k() {
    static BestApproxSequence s = best_approx_sequence(pair_target(), 200000);
    return s;
}

CantorConfig pair_config() {
    CantorConfig cfg;
    cfg.v = mpq_class(9, 5);
    cfg.s = mpq_class(1, 2);
    cfg.J = 2;
    cfg.mode = TreeMode::Relaxed;
    return cfg;
}

const CantorTree& pair_tree() {
    static CantorTree t = build_tree(pair_seq_200k(), pair_config());
    return t;
}

const char* kSingleTargets[] = {"sqrt(2)", "sqrt(3)", "phi", "1+sqrt(5)", "sqrt(2)/2"};

// C1: the certified scan and the continued-fraction oracle produce the same
// denominator list at q_max = 10^6 for five classical constants.
bool c1(std::string& d) {
    const mpz_class qmax = 1000000;
    double worst = 0;
    size_t longest = 0;
    for (const char* t : kSingleTargets) {
        auto t0 = Clock::now();
        TargetVector A = TargetVector::parse(t);
        BestApproxSequence seq = best_approx_sequence(A, qmax);
        std::vector<mpz_class> cf = cf_denominators(A.comp.at(0), qmax);
        double el = seconds_since(t0);
        worst = std::max(worst, el);
        longest = std::max(longest, seq.records.size());
        if (seq.records.size() != cf.size()) {
            d = std::string(t) + ": scan found " + std::to_string(seq.records.size()) +
                " records, cf oracle " + std::to_string(cf.size());
            return false;
        }
        for (size_t i = 0; i < cf.size(); ++i)
            if (seq.records[i].q != cf[i]) {
                d = std::string(t) + ": q mismatch at k = " + std::to_string(i);
                return false;
            }
        if (el > 60.0) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s took %.1f s (limit 60)", t, el);
            d = buf;
            return false;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "5 targets match the cf oracle at qmax 10^6; slowest %.1f s, longest %zu records",
                  worst, longest);
    d = buf;
    return true;
}

// C2: exhaustive defining-property audit for the pair target at 10^4.
bool c2(std::string& d) {
    auto t0 = Clock::now();
    BestApproxSequence seq = best_approx_sequence(pair_target(), 10000);
    AuditReport a = audit_defining_property(seq, 10000);
    double el = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%lu records, %lu comparisons, %lu violations, %.1f s",
                  a.records_checked, a.comparisons, a.violations, el);
    d = buf;
    return a.violations == 0 && a.records_checked == seq.records.size() && el <= 600.0;
}

// C3: exponent estimates land in their theory-backed bands.
bool c3(std::string& d) {
    auto inband = [](const ExponentEstimate& e, const mpq_class& lo, const mpq_class& hi) {
        return !e.infinite && e.estimate.lo >= lo && e.estimate.hi <= hi;
    };
    ExponentEstimate cs2 =
        omega_hat_column(best_approx_sequence(TargetVector::parse("sqrt(2)"), 100000));
    ExponentEstimate cphi =
        omega_hat_column(best_approx_sequence(TargetVector::parse("phi"), 100000));
    ExponentEstimate cpair = omega_hat_column(pair_seq_100k());
    ExponentEstimate rpair = omega_hat_row(DualForm{pair_target()}, default_grid(300));
    bool ok = inband(cs2, mpq_class(19, 20), mpq_class(21, 20)) &&
              inband(cphi, mpq_class(19, 20), mpq_class(21, 20)) &&
              inband(cpair, mpq_class(9, 20), 1) && !rpair.infinite &&
              rpair.estimate.lo >= mpq_class(9, 5);
    d = "col sqrt2 " + irange(cs2.estimate) + ", col phi " + irange(cphi.estimate) +
        ", col pair " + irange(cpair.estimate) + ", row pair " + irange(rpair.estimate);
    return ok;
}

// C4: every lattice built from the test sequences is exact (determinant,
// Minkowski product) and the lambda1 bracket certifies for all q_k <= 10^5.
bool c4(std::string& d) {
    std::vector<BestApproxSequence> own;
    own.reserve(5);
    for (const char* t : kSingleTargets)
        own.push_back(best_approx_sequence(TargetVector::parse(t), 100000));
    std::vector<const BestApproxSequence*> seqs;
    for (const auto& s : own) seqs.push_back(&s);
    seqs.push_back(&pair_seq_100k());

    unsigned long lattices = 0, brackets = 0;
    for (const BestApproxSequence* sp : seqs) {
        const BestApproxSequence& seq = *sp;
        mpz_class nf = 1;
        for (size_t i = 2; i <= seq.target.n(); ++i) nf *= static_cast<unsigned long>(i);
        for (size_t k = 0; k < seq.records.size(); ++k) {
            TorusLattice L = build_lattice(seq.records[k]);
            if (det_abs(L.basis) * seq.records[k].q != 1) {
                d = "det*q != 1 at q = " + seq.records[k].q.get_str();
                return false;
            }
            mpq_class prod = seq.records[k].q;
            for (const auto& m : L.minima) prod *= m.lambda;
            if (prod < mpq_class(mpz_class(1), nf) || prod > 1) {
                d = "Minkowski product out of range at q = " + seq.records[k].q.get_str();
                return false;
            }
            ++lattices;
            if (k >= 1) {
                if (!lambda_rho_bracket(seq, k, L)) {
                    d = "lambda1 bracket fails at q = " + seq.records[k].q.get_str();
                    return false;
                }
                ++brackets;
            }
        }
    }
    d = std::to_string(lattices) + " lattices exact (det, Minkowski), " +
        std::to_string(brackets) + " lambda1 brackets certified";
    return true;
}

// C5: the persisted calibration constant dominates every exact count on its
// own 10^4-sample set, and a disjoint-seed recalibration moves by less than x2.
bool c5(std::string& d) {
    const BestApproxSequence& seq = pair_seq_100k();
    const mpz_class cap = 100000;
    const unsigned long samples = 10000;
    mpq_class C_cal = calibrate_C(seq, samples, 42, cap);

    std::vector<size_t> elig;
    for (size_t k = 0; k < seq.records.size(); ++k)
        if (seq.records[k].q <= cap) elig.push_back(k);
    std::vector<TorusLattice> lat;
    lat.reserve(elig.size());
    for (size_t k : elig) lat.push_back(build_lattice(seq.records[k]));

    // replay the calibration sample stream and re-check every count against
    // the persisted constant through the public bound evaluator
    Rng rng(42);
    const size_t n = seq.target.n();
    unsigned long viol = 0;
    for (unsigned long s = 0; s < samples; ++s) {
        size_t ki = static_cast<size_t>(rng.below(elig.size()));
        unsigned long t = 1 + static_cast<unsigned long>(rng.below(24));
        mpz_class mant = mpz_class(1) << 29;
        mant += static_cast<unsigned long>(rng.below(std::uint64_t(1) << 29));
        mpq_class r(mant, mpz_class(1) << (30 + t));
        r.canonicalize();
        BallQuery B;
        B.radius = r;
        for (size_t i = 0; i < n; ++i) {
            mpq_class xi(mpz_class(static_cast<unsigned long>(rng.below(std::uint64_t(1) << 30))),
                         mpz_class(1) << 30);
            xi.canonicalize();
            B.center.push_back(xi);
        }
        CountResult c = count_gamma_in_ball(seq, elig[ki], B, CountMode::Exact);
        Lemma1Bound b = lemma1_bound(lat[ki], r, C_cal);
        if (mpq_class(c.upper) > b.form_a) ++viol;
    }

    mpq_class C_re = calibrate_C(seq, samples, 1042, cap);
    mpq_class ratio = C_cal >= C_re ? mpq_class(C_cal / C_re) : mpq_class(C_re / C_cal);
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "C_cal %s, %lu/%lu counts exceed the bound, disjoint-seed ratio %s",
                  dshort(C_cal, 7).c_str(), viol, samples, dshort(ratio, 6).c_str());
    d = buf;
    return viol == 0 && ratio < 2;
}

// C6: the relaxed greedy tree builds and every structural certificate decides.
bool c6(std::string& d) {
    auto t0 = Clock::now();
    const CantorTree& tree = pair_tree();
    MembershipReport mem = verify_membership(tree);
    StructureReport st = verify_structure(tree);
    double el = seconds_since(t0);
    std::string qs;
    for (const auto& lvl : tree.levels) qs += (qs.empty() ? "" : ",") + lvl.q.get_str();
    size_t balls = 0;
    for (const auto& lvl : tree.levels) balls += lvl.balls.size();
    bool ok = st.undecided == 0 && mem.anomalies.empty() && !st.messages.empty() &&
              st.messages.front() == "all structural certificates hold" && el <= 1800.0;
    char buf[224];
    std::snprintf(buf, sizeof buf,
                  "q = [%s], %zu balls, undecided %zu, membership anomalies %zu, %.1f s",
                  qs.c_str(), balls, st.undecided, mem.anomalies.size(), el);
    d = buf;
    return ok;
}

// C7: strict growth thresholds match hand arithmetic.
bool c7(std::string& d) {
    struct Row {
        mpz_class q, prodN;
        unsigned n;
        mpq_class v, s, safety;
        mpz_class want;
    };
    const Row rows[] = {
        {3, 1, 2, 1, mpq_class(4, 5), 1, 59049},          // (3^2)^(1/(1-4/5)) = 9^5
        {2, 1, 1, 1, mpq_class(1, 2), 1, 4},              // 2^2
        {5, 2, 1, 1, mpq_class(2, 3), 1, 16},             // ceil((5/2)^3)
        {2, 1, 1, 1, mpq_class(1, 2), mpq_class(3, 2), 6} // safety * 4
    };
    for (const Row& r : rows) {
        mpz_class got = strict_threshold(r.q, r.prodN, r.n, r.v, r.s, r.safety);
        if (got != r.want) {
            d = "threshold(q = " + r.q.get_str() + ") = " + got.get_str() + ", wanted " +
                r.want.get_str();
            return false;
        }
    }
    d = "4 thresholds exact, including (n = 2, v = 1, s = 4/5, q = 3) -> 59049";
    return true;
}

// C8: the sampled mass-distribution constant is finite and stable under a
// tenfold sample increase with the same seed.
bool c8(std::string& d) {
    const CantorTree& tree = pair_tree();
    MassMeasure M{&tree};
    Lemma2Report r1 = verify_lemma2(tree, M, 10000, 99);
    Lemma2Report r2 = verify_lemma2(tree, M, 100000, 99);
    bool ok = r1.c_emp.valid() && r1.c_emp.hi > 0 && r2.c_emp.hi >= r1.c_emp.hi &&
              r2.c_emp.hi < 2 * r1.c_emp.hi;
    mpq_class growth = r1.c_emp.hi > 0 ? mpq_class(r2.c_emp.hi / r1.c_emp.hi) : mpq_class(0);
    d = "c_emp " + irange(r1.c_emp, 8) + " at 10^4 samples, " + irange(r2.c_emp, 8) +
        " at 10^5, growth x" + dshort(growth, 6);
    return ok;
}

// C9: box-counting brackets. The greedy pair tree is a chain (one ball per
// level), so its count slope is expected to sit far below the [0.30, 0.66]
// band; the line reports the measured value. The dyadic dust fixture of known
// dimension 1/2 must land within 0.05.
bool c9(std::string& d) {
    const CantorTree& tree = pair_tree();
    DimensionReport chain = dim_estimate(tree, box_count(tree, default_r_grid(tree, 12)));
    bool chain_ok = chain.slope.lo >= mpq_class(3, 10) && chain.slope.hi <= mpq_class(33, 50);

    CantorTree dust = make_dust(8);
    DimensionReport dd = dim_estimate(dust, box_count(dust, default_r_grid(dust, 12)));
    bool dust_ok = dd.slope.lo >= mpq_class(9, 20) && dd.slope.hi <= mpq_class(11, 20);

    d = "chain slope " + irange(chain.slope) + (chain_ok ? " within" : " outside") +
        " [0.30, 0.66]; dust slope " + irange(dd.slope) + (dust_ok ? " within" : " outside") +
        " [0.45, 0.55]";
    return chain_ok && dust_ok;
}

// C10: inhomogeneous transfer spot check over 20 seeded dyadic offsets. The
// per-case floor est >= 0.9/omega_hat_row reflects the lower-bound direction;
// the median clause asks the finite-scale proxy to already sit at the almost-
// sure limit, which it overshoots, and the line reports the measured median.
bool c10(std::string& d) {
    TargetVector A = TargetVector::parse("sqrt(2)");
    Rng rng(7);
    std::vector<TargetVector> betas;
    for (int i = 0; i < 20; ++i) betas.push_back(TargetVector::parse(rat_str(rng.dyadic(20))));
    TransferReport rep = check_transfer(A, betas, 100000, 300);
    size_t passed = 0;
    for (const auto& c : rep.cases) passed += c.pass ? 1 : 0;
    bool floor_ok = passed == rep.cases.size();
    bool med_ok = rep.median.lo >= mpq_class(9, 10) && rep.median.hi <= mpq_class(11, 10);
    d = "cases " + std::to_string(passed) + "/" + std::to_string(rep.cases.size()) +
        " meet the floor; median " + irange(rep.median) + (med_ok ? " within" : " outside") +
        " [0.9, 1.1]";
    return floor_ok && med_ok;
}

// C11: closed-form bounds match hand arithmetic, including the boundary limit.
bool c11(std::string& d) {
    struct E2 {
        mpq_class v;
        unsigned n;
        mpq_class w, want;
    };
    const E2 e2[] = {
        {3, 1, 1, mpq_class(2, 3)},
        {2, 2, 2, mpq_class(3, 2)},
        {2, 1, 1, mpq_class(3, 4)},
        {mpq_class(5, 2), 1, 2, mpq_class(7, 15)},
        {3, 2, 2, mpq_class(13, 9)},
        {mpq_class(9, 5), 2, 2, mpq_class(41, 27)},
    };
    for (const E2& e : e2)
        if (bound_eq2(e.v, e.n, e.w) != e.want) {
            d = "bound_eq2 mismatch at v = " + e.v.get_str();
            return false;
        }
    struct E3 {
        mpq_class v;
        unsigned n, m;
        mpq_class want;
    };
    const E3 e3[] = {
        {2, 2, 3, mpq_class(3, 2)},
        {1, 2, 2, 2},
        {3, 1, 2, mpq_class(2, 3)},
        {mpq_class(1, 2), 2, 1, 2},
    };
    for (const E3& e : e3)
        if (bound_eq3(e.v, e.n, e.m) != e.want) {
            d = "bound_eq3 mismatch at v = " + e.v.get_str();
            return false;
        }
    if (bound_theorem1(2) != mpq_class(1, 2) || bound_theorem1(mpq_class(1, 3)) != 3) {
        d = "bound_theorem1 mismatch";
        return false;
    }

    // as v decreases to 1/omega_hat = 1/2 (n = 2), bound_eq2 climbs to n
    mpq_class prev = 0;
    mpq_class last_gap = 0;
    for (unsigned long dd = 10; dd <= 10000; dd *= 10) {
        mpq_class v = mpq_class(1, 2) + mpq_class(1, dd);
        mpq_class b = bound_eq2(v, 2, 2);
        if (b <= prev || b >= 2) {
            d = "boundary chain not increasing toward 2 at d = " + std::to_string(dd);
            return false;
        }
        prev = b;
        last_gap = 2 - b;
    }
    bool thrown = false;
    try {
        bound_eq2(mpq_class(1, 2), 2, 2);
    } catch (const DomainError&) {
        thrown = true;
    }
    if (!thrown || last_gap >= mpq_class(1, 1000)) {
        d = "boundary behavior wrong (gap " + dshort(last_gap, 8) + ")";
        return false;
    }
    d = "12 tabulated values exact; eq2 -> 2 within 1/1000 at v = 1/2 + 1/10000, domain edge throws";
    return true;
}

// C12: the full pipeline is bit-for-bit deterministic under a fixed seed.
bool c12(std::string& d) {
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "dioph_acceptance_c12";
    std::error_code ec;
    fs::remove_all(base, ec);
    const std::string d1 = (base / "run1").string(), d2 = (base / "run2").string();
    for (const std::string& dir : {d1, d2}) {
        std::ostringstream out, err;
        std::vector<std::string> args = {"pipeline", "--alpha", "sqrt(2),sqrt(3)",
                                         "--qmax",   "200000",  "--v",
                                         "9/5",      "--s",     "1/2",
                                         "--levels", "2",       "--seed",
                                         "5",        "--outdir", dir};
        int rc = cli::run(args, out, err);
        if (rc != 0) {
            d = "pipeline exited " + std::to_string(rc) + ": " + err.str();
            return false;
        }
    }
    const char* names[] = {"seq.json", "tree.json", "verify.json", "dims.csv", "dims.json"};
    size_t identical = 0;
    for (const char* name : names) {
        std::string a = json_io::read_file((fs::path(d1) / name).string());
        std::string b = json_io::read_file((fs::path(d2) / name).string());
        if (a != b) {
            d = std::string(name) + " differs between identically seeded runs";
            return false;
        }
        ++identical;
    }
    fs::remove_all(base, ec);
    d = std::to_string(identical) + " artifacts bit-identical across reruns (seed 5)";
    return true;
}

using Criterion = bool (*)(std::string&);
const Criterion kCriteria[12] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        int v = std::atoi(argv[i]);
        if (v < 1 || v > 12) {
            std::fprintf(stderr, "usage: %s [criterion number 1..12]...\n", argv[0]);
            return 2;
        }
        which.push_back(v);
    }
    if (which.empty())
        for (int i = 1; i <= 12; ++i) which.push_back(i);

    int failures = 0;
    for (int idx : which) {
        std::string detail;
        bool ok = false;
        try {
            ok = kCriteria[idx - 1](detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
            ok = false;
        }
        std::printf("C%02d %s (%s)\n", idx, ok ? "PASS" : "FAIL", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
