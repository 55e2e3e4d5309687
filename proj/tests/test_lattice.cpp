#include <doctest.h>

#include <gmpxx.h>
#include <vector>

#include "dioph/bestapprox.hpp"
#include "dioph/errors.hpp"
#include "dioph/lattice.hpp"
#include "dioph/numeric.hpp"
#include "oracle_helpers.hpp"

using namespace dioph;
using dioph::testing::Q;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("exact determinant and sup norm helpers") {
    QMat m{{Q("1/2"), Q("0")}, {Q("1/4"), Q("1/3")}};
    CHECK(det_abs(m) == Q("1/6"));
    QMat s{{Q("0"), Q("1")}, {Q("1"), Q("0")}};
    CHECK(det_abs(s) == 1);
    CHECK(sup_norm({Q("-3/4"), Q("1/2")}) == Q("3/4"));
}

TEST_CASE("torus lattice of a simultaneous record") {
    TargetVector A = TargetVector::parse("sqrt(2),sqrt(3)");
    BestApproxSequence seq = best_approx_sequence(A, 25);
    TorusLattice L = build_lattice(seq.records[1]); // q = 3, P = (4, 5)

    CHECK(L.q_k == 3);
    CHECK(det_abs(L.basis) == Q("1/3"));
    CHECK(det_abs(L.basis) * L.q_k == 1);

    REQUIRE(L.minima.size() == 2);
    CHECK(L.minima[0].lambda >= Q("1/3"));
    CHECK(L.minima[0].lambda <= Q("2/3"));
    CHECK(L.minima[0].lambda <= L.minima[1].lambda);

    // Minkowski bracket, exact arithmetic
    mpq_class prod = L.minima[0].lambda * L.minima[1].lambda * L.q_k;
    CHECK(prod >= Q("1/2"));
    CHECK(prod <= 1);

    // each witness attains its lambda and lies in the lattice's torus classes
    for (const auto& me : L.minima) CHECK(sup_norm(me.witness) == me.lambda);

    // recomputation is idempotent
    auto minima2 = successive_minima(L);
    REQUIRE(minima2.size() == L.minima.size());
    for (size_t i = 0; i < minima2.size(); ++i)
        CHECK(minima2[i].lambda == L.minima[i].lambda);
    CHECK(reduce_basis(L) == L.reduced_basis);

    // reduction certificates: |e_i| >= lambda_i with a recorded worst ratio
    REQUIRE(L.reduced_ratios.size() == 2);
    mpq_class worst = 0;
    for (size_t i = 0; i < 2; ++i) {
        CHECK(L.reduced_ratios[i] >= 1);
        CHECK(sup_norm(L.reduced_basis[i]) == L.reduced_ratios[i] * L.minima[i].lambda);
        if (L.reduced_ratios[i] > worst) worst = L.reduced_ratios[i];
    }
    CHECK(L.c_red == worst);
    CHECK(L.quasi_c > 0);
}

TEST_CASE("lattice invariants hold along a sequence") {
    for (const char* t : {"sqrt(2)", "sqrt(2),sqrt(3)"}) {
        BestApproxSequence seq = best_approx_sequence(TargetVector::parse(t), 2000);
        for (size_t k = 1; k < seq.records.size(); ++k) {
            TorusLattice L = build_lattice(seq.records[k]);
            CHECK(det_abs(L.basis) * L.q_k == 1);
            mpq_class prod = L.q_k;
            for (const auto& me : L.minima) prod *= me.lambda;
            mpq_class fact = 1;
            for (size_t i = 2; i <= L.n(); ++i) fact *= static_cast<long>(i);
            CHECK(prod >= 1 / fact);
            CHECK(prod <= 1);
            CHECK(lambda_rho_bracket(seq, k, L));
        }
    }
}

TEST_CASE("degenerate records are rejected") {
    BestApproxRecord fake;
    fake.k = 1;
    fake.q = 4;
    fake.P = {mpz_class(2)};
    fake.rho_next = Interval(Q("1/10"));
    CHECK_THROWS_AS(build_lattice(fake), DegenerateLattice);
}

TEST_CASE("exact orbit counts match hand enumeration") {
    TargetVector A = TargetVector::parse("sqrt(2)");
    BestApproxSequence seq = best_approx_sequence(A, 30); // q = 1, 2, 5, 12, 29

    // Gamma_5 = {0, .414, .828, .243, .657}; ball B(0, 1/5) catches q = 0, 2
    BallQuery B{{Q("0")}, Q("1/5")};
    CountResult c = count_gamma_in_ball(seq, 2, B, CountMode::Exact);
    CHECK(c.lower == 2);
    CHECK(c.upper == 2);
    CHECK(c.witnesses == std::vector<mpz_class>{0, 2});

    BallQuery B2{{Q("1/3")}, Q("1/4")};
    CountResult c2 = count_gamma_in_ball(seq, 4, B2, CountMode::Exact);
    CHECK(c2.lower == 14);
    CHECK(c2.upper == 14);
    CHECK(c2.witnesses.size() == 14);

    // the lattice-fast bracket must contain the exact count
    CountResult f2 = count_gamma_in_ball(seq, 4, B2, CountMode::LatticeFast);
    CHECK(f2.lower <= 14);
    CHECK(f2.upper >= 14);
    CHECK(f2.witnesses.size() == static_cast<size_t>(f2.lower.get_ui()));
}

TEST_CASE("fast and exact counts agree across sampled balls") {
    TargetVector A = TargetVector::parse("sqrt(2),sqrt(3)");
    BestApproxSequence seq = best_approx_sequence(A, 500);
    size_t k = seq.records.size() - 1;
    for (int i = 1; i <= 6; ++i) {
        BallQuery B{{Q("1/7") * i, Q("2/11") * i}, mpq_class(1, 2 + i)};
        // centers reduce mod 1 internally
        CountResult e = count_gamma_in_ball(seq, k, B, CountMode::Exact);
        CountResult f = count_gamma_in_ball(seq, k, B, CountMode::LatticeFast);
        CHECK(e.lower == e.upper);
        CHECK(f.lower <= e.lower);
        CHECK(e.upper <= f.upper);
    }
}

TEST_CASE("ball queries are validated") {
    BestApproxSequence seq = best_approx_sequence(TargetVector::parse("sqrt(2)"), 30);
    CHECK_THROWS_AS(count_gamma_in_ball(seq, 2, BallQuery{{Q("0"), Q("0")}, Q("1/5")},
                                        CountMode::Exact),
                    DomainError);
    CHECK_THROWS_AS(count_gamma_in_ball(seq, 2, BallQuery{{Q("0")}, Q("3/5")}, CountMode::Exact),
                    DomainError);
    CHECK_THROWS_AS(count_gamma_in_ball(seq, 2, BallQuery{{Q("0")}, Q("0")}, CountMode::Exact),
                    DomainError);
    CHECK_THROWS_AS(count_gamma_in_ball(seq, 99, BallQuery{{Q("0")}, Q("1/5")}, CountMode::Exact),
                    IndexOutOfRange);
}

TEST_CASE("lemma 1 bound forms and regimes") {
    TargetVector A = TargetVector::parse("sqrt(2)");
    BestApproxSequence seq = best_approx_sequence(A, 30);
    TorusLattice L = build_lattice(seq.records[4]); // q = 29, lambda_1 = 1/29

    REQUIRE(L.minima.size() == 1);
    CHECK(L.minima[0].lambda == Q("1/29"));

    Lemma1Bound below = lemma1_bound(L, Q("1/58"), 1);
    CHECK(below.regime == 1);
    CHECK(below.form_a == 1); // C * empty product
    CHECK(below.form_b == 1); // C * q * lambda_1

    Lemma1Bound above = lemma1_bound(L, Q("1/4"), 1);
    CHECK(above.regime == 2);
    CHECK(above.form_a == Q("29/4")); // C * q * r^n
    CHECK(above.form_b == Q("29/4"));

    // nondecreasing in r, scaling linear in C
    CHECK(lemma1_bound(L, Q("1/8"), 1).form_a <= lemma1_bound(L, Q("1/4"), 1).form_a);
    CHECK(lemma1_bound(L, Q("1/4"), Q("7/2")).form_a == Q("7/2") * above.form_a);
    CHECK_THROWS_AS(lemma1_bound(L, Q("0"), 1), DomainError);
}

TEST_CASE("calibration is seeded and prefix-monotone") {
    TargetVector A = TargetVector::parse("sqrt(2),sqrt(3)");
    BestApproxSequence seq = best_approx_sequence(A, 2000);

    mpq_class c1 = calibrate_C(seq, 200, 11);
    mpq_class c2 = calibrate_C(seq, 200, 11);
    CHECK(c1 == c2);
    CHECK(c1 > 0);

    // same seed, more samples: the max runs over a superset of draws
    mpq_class c3 = calibrate_C(seq, 400, 11);
    CHECK(c3 >= c1);

    CHECK_THROWS_AS(calibrate_C(seq, 100, 11, 0), DomainError); // nothing eligible
}

TEST_SUITE_END();
