#include <doctest.h>

#include <gmpxx.h>
#include <vector>

#include "dioph/bestapprox.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/numeric.hpp"
#include "oracle_helpers.hpp"

using namespace dioph;
using dioph::testing::Q;
using dioph::testing::within;

TEST_SUITE_BEGIN("exponents");

TEST_CASE("uniform column estimate for sqrt(2)") {
    BestApproxSequence seq = best_approx_sequence(TargetVector::parse("sqrt(2)"), 100);
    ExponentEstimate e = omega_hat_column(seq);
    CHECK(e.kind == ExponentKind::UniformColumn);
    REQUIRE(e.samples.size() == 5); // scales 2, 5, 12, 29, 70
    CHECK(e.samples[0].scale == 2);
    CHECK(within(e.samples[0].ratio, "1.2715533", "1.2715534"));
    CHECK(within(e.samples[1].ratio, "1.0952564", "1.0952565"));
    CHECK(within(e.estimate, "1.0372773", "1.0372774"));
    CHECK(e.window == "tail half: q_k in [12, 70]");
    CHECK_FALSE(e.infinite);
}

TEST_CASE("uniform column estimate for a simultaneous pair") {
    BestApproxSequence seq = best_approx_sequence(TargetVector::parse("sqrt(2),sqrt(3)"), 100000);
    ExponentEstimate e = omega_hat_column(seq);
    CHECK(within(e.estimate, "0.5649", "0.5650"));
    CHECK(e.window == "tail half: q_k in [1183, 20586]");
    // n = 2 squeeze: 1/n <= omega-hat <= 1 up to estimator noise
    CHECK(e.estimate.lo > Q("45/100"));
    CHECK(e.estimate.hi < 1);
}

TEST_CASE("uniform row estimate by exhaustive dual enumeration") {
    CHECK(default_grid(300) ==
          std::vector<mpz_class>({10, 20, 40, 80, 160, 300}));
    CHECK(default_grid(10) == std::vector<mpz_class>({10}));

    DualForm F{TargetVector::parse("sqrt(2),sqrt(3)")};
    ExponentEstimate e = omega_hat_row(F, default_grid(300));
    CHECK(e.kind == ExponentKind::UniformRow);
    REQUIRE(e.samples.size() == 6);
    CHECK(within(e.samples[0].ratio, "3.137", "3.138"));
    CHECK(within(e.samples[1].ratio, "2.411", "2.412"));
    CHECK(within(e.samples[2].ratio, "2.673", "2.674"));
    CHECK(within(e.samples[3].ratio, "2.742", "2.743"));
    CHECK(within(e.samples[4].ratio, "2.367", "2.368"));
    CHECK(within(e.samples[5].ratio, "2.106", "2.107"));
    CHECK(within(e.estimate, "2.1067", "2.1068"));
    CHECK(e.window == "tail half: Q in [80, 300]");
    CHECK(e.estimate.lo > 2 - Q("2/10")); // Dirichlet floor n/m = 2 with tolerance
}

TEST_CASE("inhomogeneous estimate for a rational offset") {
    ExponentEstimate e = omega_inhom(TargetVector::parse("sqrt(2)"),
                                     TargetVector::parse("1/2"), 100000);
    CHECK(e.kind == ExponentKind::Inhomogeneous);
    CHECK(within(e.estimate, "1.3426", "1.3427"));
    CHECK(e.window == "records with q > 316");
    CHECK_FALSE(e.infinite);
}

TEST_CASE("inhomogeneous estimate with the target as its own offset") {
    // ||q*sqrt(2) - sqrt(2)|| vanishes at q = 1; records sit at q_k + 1 and
    // the undecidable q = 1 distance is reported, not silently dropped
    ExponentEstimate e = omega_inhom(TargetVector::parse("sqrt(2)"),
                                     TargetVector::parse("sqrt(2)"), 10000);
    CHECK(within(e.estimate, "1.2012", "1.2013"));
    CHECK_FALSE(e.anomalies.empty());
}

TEST_CASE("monotonicity anomalies flag certified decreases only") {
    TargetVector A = TargetVector::parse("sqrt(2)");
    TargetVector b = TargetVector::parse("1/2");
    ExponentEstimate small = omega_inhom(A, b, 10000);

    // unchanged or grown estimates raise nothing
    CHECK(monotonicity_anomalies(small, small).empty());
    ExponentEstimate grown = small;
    grown.estimate = small.estimate + Interval(Q("1/10"));
    CHECK(monotonicity_anomalies(small, grown).empty());

    ExponentEstimate shrunk = small;
    shrunk.estimate = Interval(Q("1/10"));
    CHECK(monotonicity_anomalies(small, shrunk).size() == 1);
    CHECK_THROWS_AS(monotonicity_anomalies(small, omega_hat_column(
                        best_approx_sequence(A, 100))), DomainError);
}

TEST_CASE("closed-form bounds match hand arithmetic") {
    CHECK(bound_theorem1(Q("2")) == Q("1/2"));
    CHECK(bound_theorem1(Q("1/3")) == 3);
    CHECK_THROWS_AS(bound_theorem1(Q("0")), DomainError);

    CHECK(bound_eq2(Q("3"), 1, Q("1")) == Q("2/3"));
    CHECK(bound_eq2(Q("2"), 2, Q("2")) == Q("3/2"));
    CHECK(bound_eq2(Q("2"), 1, Q("1")) == Q("3/4"));
    CHECK(bound_eq2(Q("5/2"), 1, Q("2")) == Q("7/15"));
    CHECK(bound_eq2(Q("3"), 2, Q("2")) == Q("13/9"));
    CHECK(bound_eq2(Q("9/5"), 2, Q("2")) == Q("41/27"));
    CHECK_THROWS_AS(bound_eq2(Q("1/2"), 1, Q("2")), DomainError); // v*w = 1 exactly

    CHECK(bound_eq3(Q("2"), 2, 3) == Q("3/2"));
    CHECK(bound_eq3(Q("1"), 2, 2) == 2);
    CHECK(bound_eq3(Q("3"), 1, 2) == Q("2/3"));
    CHECK(bound_eq3(Q("1/2"), 2, 1) == 2);
    CHECK_THROWS_AS(bound_eq3(Q("0"), 2, 1), DomainError);
}

TEST_CASE("bound (2) tends to n at the lower v boundary") {
    // at v = 1/w the bound is undefined; just above it approaches n
    CHECK(bound_eq2(Q("51/100"), 2, Q("2")) == Q("304/153"));
    mpq_class prev = 0;
    for (long d = 10; d <= 10000; d *= 10) {
        mpq_class v = Q("1/2") + mpq_class(1, d);
        mpq_class b = bound_eq2(v, 2, Q("2"));
        CHECK(b > prev);
        CHECK(b < 2);
        prev = b;
    }
    CHECK(2 - prev < Q("1/1000"));
}

TEST_CASE("transfer report wiring") {
    TargetVector A = TargetVector::parse("sqrt(2),sqrt(3)");
    std::vector<TargetVector> betas{TargetVector::parse("1/3,1/7"),
                                    TargetVector::parse("2/5,3/11"),
                                    TargetVector::parse("1/8,5/9")};
    TransferReport rep = check_transfer(A, betas, 500, 40);
    CHECK(within(rep.row_estimate.estimate, "2.411", "2.412"));
    CHECK(within(rep.bound, "0.414", "0.415"));
    CHECK(rep.tol == Q("1/10"));
    REQUIRE(rep.cases.size() == 3);
    CHECK(rep.low_confidence); // q_max 500 < 1000
    for (const auto& c : rep.cases) {
        CHECK_FALSE(c.beta_text.empty());
        bool expect = c.estimate.infinite ||
                      c.estimate.estimate.lo >= Q("9/10") * rep.bound.hi;
        CHECK(c.pass == expect);
    }
    CHECK(rep.median.valid());
    CHECK_FALSE(rep.anomalies.empty()); // carries the low-confidence marker

    TransferReport rep2 = check_transfer(A, betas, 500, 40);
    CHECK(icmp(rep2.median, rep.median) == 0); // deterministic
}

TEST_CASE("corollary crosscheck fires only on inconsistent pairs") {
    ExponentEstimate col;
    col.kind = ExponentKind::UniformColumn;
    col.estimate = Interval(Q("1/2"));
    ExponentEstimate row;
    row.kind = ExponentKind::UniformRow;
    row.estimate = Interval(Q("3"));
    CHECK(corollary_crosscheck(col, row, 2).has_value());
    row.estimate = Interval(Q("2"));
    CHECK_FALSE(corollary_crosscheck(col, row, 2).has_value());
    col.estimate = Interval(Q("7/10")); // column nowhere near 1/n
    row.estimate = Interval(Q("5"));
    CHECK_FALSE(corollary_crosscheck(col, row, 2).has_value());
}

TEST_SUITE_END();
