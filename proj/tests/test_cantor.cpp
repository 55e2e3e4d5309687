#include <doctest.h>

#include <gmpxx.h>
#include <string>
#include <vector>

#include "dioph/bestapprox.hpp"
#include "dioph/cantor.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "oracle_helpers.hpp"

using namespace dioph;
using dioph::testing::Q;
using dioph::testing::within;

namespace {

const BestApproxSequence& seq_sqrt2() {
    static BestApproxSequence s = best_approx_sequence(TargetVector::parse("sqrt(2)"), 100);
    return s;
}

const BestApproxSequence& seq_pair() {
    static BestApproxSequence s =
        best_approx_sequence(TargetVector::parse("sqrt(2),sqrt(3)"), 200000);
    return s;
}

size_t index_of_q(const BestApproxSequence& s, long q) {
    for (size_t i = 0; i < s.records.size(); ++i)
        if (s.records[i].q == q) return i;
    REQUIRE(false);
    return 0;
}

CantorConfig pair_config(unsigned J) {
    CantorConfig c;
    c.v = Q("9/5");
    c.s = Q("1/2");
    c.J = J;
    c.mode = TreeMode::Relaxed;
    return c;
}

// greedy relaxed chain on (sqrt(2), sqrt(3)): q = 3, 34, 171484, all N = 1
const CantorTree& chain_tree() {
    static CantorTree t = build_tree(seq_pair(), pair_config(2));
    return t;
}

// branching 1-D tree: sqrt(2), v = 3/2, scales 2 and 29, N_1 = 10
const CantorTree& branching_tree() {
    static CantorTree t = [] {
        CantorConfig c;
        c.v = Q("3/2");
        c.s = Q("1/2");
        c.J = 1;
        c.mode = TreeMode::Relaxed;
        c.q_list = {mpz_class(2), mpz_class(29)};
        return build_tree(seq_sqrt2(), c);
    }();
    return t;
}

} // namespace

TEST_SUITE_BEGIN("cantor");

TEST_CASE("condition (4) margins match hand values") {
    size_t k5 = index_of_q(seq_sqrt2(), 5);
    Condition4 a = check_condition4(seq_sqrt2(), k5, Q("2"));
    CHECK(a.holds);
    CHECK(within(a.margin, "1.0723304", "1.0723305")); // rho * 25 / 4

    Condition4 b = check_condition4(seq_sqrt2(), k5, Q("1"));
    CHECK_FALSE(b.holds);
    CHECK(within(b.margin, "0.2144660", "0.2144661"));

    BestApproxSequence pair25 =
        best_approx_sequence(TargetVector::parse("sqrt(2),sqrt(3)"), 100);
    size_t k7 = index_of_q(pair25, 7);
    CHECK_FALSE(check_condition4(pair25, k7, Q("1")).holds);
    CHECK(within(check_condition4(pair25, k7, Q("1")).margin, "0.4246212", "0.4246213"));
    CHECK(check_condition4(pair25, k7, Q("9/5")).holds);
    CHECK(within(check_condition4(pair25, k7, Q("9/5")).margin, "2.0140957", "2.0140958"));
}

TEST_CASE("children counts evaluate the floor exactly") {
    CHECK(children_count(100, 100000, 2, Q("1")) == 20); // boundary: exact division
    CHECK(children_count(100, 99999, 2, Q("1")) == 19);
    CHECK(children_count(2, 29, 1, Q("3/2")) == 10); // floor(29 / 2^1.5)
    CHECK(children_count(1, 5, 1, Q("2")) == 5);
    CHECK(children_count(10, 5, 1, Q("2")) == 0); // shrinking scales give no children
}

TEST_CASE("strict growth threshold matches hand arithmetic") {
    CHECK(strict_threshold(3, 1, 2, Q("1"), Q("4/5"), Q("1")) == 59049); // 9^5
    CHECK(strict_threshold(2, 1, 1, Q("1"), Q("1/2"), Q("1")) == 4);     // 2^2
    CHECK(strict_threshold(5, 2, 1, Q("1"), Q("2/3"), Q("1")) == 16);    // ceil((5/2)^3)
    CHECK(strict_threshold(2, 1, 1, Q("1"), Q("1/2"), Q("3/2")) == 6);   // safety * 4
}

TEST_CASE("config validation") {
    auto with = [](mpq_class v, mpq_class s, mpq_class safety) {
        CantorConfig c;
        c.v = std::move(v);
        c.s = std::move(s);
        c.J = 1;
        c.safety = std::move(safety);
        return c;
    };
    const BestApproxSequence& s = seq_sqrt2();
    CHECK_THROWS_AS(select_subsequence(s, with(Q("0"), Q("1/2"), Q("1"))), DomainError);
    CHECK_THROWS_AS(select_subsequence(s, with(Q("2"), Q("0"), Q("1"))), DomainError);
    CHECK_THROWS_AS(select_subsequence(s, with(Q("2"), Q("1/2"), Q("1"))), DomainError); // s*v >= 1
    CHECK_THROWS_AS(select_subsequence(s, with(Q("1/2"), Q("1"), Q("1"))), DomainError); // s >= n
    CHECK_THROWS_AS(select_subsequence(s, with(Q("3/2"), Q("1/2"), Q("1/2"))), DomainError);

    CantorConfig c = with(Q("3/2"), Q("1/2"), Q("1"));
    c.q_list = {mpz_class(2)}; // J + 1 = 2 scales required
    CHECK_THROWS_AS(select_subsequence(s, c), DomainError);
}

TEST_CASE("greedy selection walks the admissible records") {
    SubseqAudit audit = select_subsequence(seq_pair(), pair_config(2));
    REQUIRE(audit.levels.size() == 3);
    CHECK(audit.levels[0].q == 3);
    CHECK(audit.levels[1].q == 34);
    CHECK(audit.levels[2].q == 171484);
    CHECK(audit.levels[0].N == 1);
    CHECK(audit.levels[1].N == 1);
    CHECK(audit.levels[2].N == 1);

    // relaxed mode records the strict thresholds without enforcing them
    CHECK(audit.levels[1].g1_required_q == mpz_class("150094635296999121"));
    CHECK_FALSE(audit.levels[1].g1_ok);
    REQUIRE(audit.levels[1].cond4_margin.has_value());
    CHECK(audit.levels[1].cond4_margin->lo > 1);
    REQUIRE(audit.levels[2].cond4_margin.has_value());
    CHECK(audit.levels[2].cond4_margin->lo > 1);
    CHECK(audit.levels[1].g2_lambda_n > 0); // lambda_n audit ran (n = 2)
}

TEST_CASE("selection failure modes") {
    CHECK_THROWS_AS(build_tree(seq_pair(), pair_config(3)), SequenceExhausted);
    try {
        build_tree(seq_pair(), pair_config(3));
    } catch (const SequenceExhausted& e) {
        CHECK(std::string(e.what()).find("q_max = 200000") != std::string::npos);
    }

    // strict greedy cannot reach the G1 threshold at this budget
    CantorConfig strict = pair_config(1);
    strict.mode = TreeMode::Strict;
    CHECK_THROWS_AS(select_subsequence(seq_pair(), strict), SequenceExhausted);

    // strict mode needs v strictly above the uniform-column estimate
    CantorConfig lowv = pair_config(1);
    lowv.mode = TreeMode::Strict;
    lowv.v = omega_hat_column(seq_pair()).estimate.hi;
    lowv.s = Q("1/2");
    CHECK_THROWS_AS(select_subsequence(seq_pair(), lowv), DomainError);

    // q_list entries must be actual records, strictly increasing
    CantorConfig bad = pair_config(1);
    bad.q_list = {mpz_class(3), mpz_class(10)};
    CHECK_THROWS_AS(select_subsequence(seq_pair(), bad), DomainError);
    CantorConfig rev = pair_config(1);
    rev.q_list = {mpz_class(7), mpz_class(3)};
    CHECK_THROWS_AS(select_subsequence(seq_pair(), rev), DomainError);
}

TEST_CASE("insufficient children abort the build") {
    CantorConfig c;
    c.v = Q("2");
    c.s = Q("1/3");
    c.J = 2;
    c.mode = TreeMode::Relaxed;
    c.q_list = {mpz_class(1), mpz_class(5), mpz_class(29)};
    try {
        build_tree(seq_sqrt2(), c);
        CHECK(false);
    } catch (const InsufficientChildren& e) {
        CHECK(std::string(e.what()).find("found 4, needed 5") != std::string::npos);
    }
}

TEST_CASE("branching tree builds and certifies") {
    const CantorTree& t = branching_tree();
    REQUIRE(t.levels.size() == 2);
    CHECK(t.levels[0].q == 2);
    CHECK(t.levels[1].q == 29);
    CHECK(t.levels[1].N == 10);
    CHECK(t.levels[1].balls.size() == 10);
    for (const auto& b : t.levels[1].balls) {
        CHECK(b.q_witness >= 1);
        CHECK(b.q_witness < 29);
        CHECK(b.parent == 0);
    }

    MembershipReport mr = verify_membership(t);
    CHECK(mr.balls_checked == 10);
    CHECK(mr.anomalies.empty());
    REQUIRE(mr.worst_margin.size() == 2);
    for (const auto& m : mr.worst_margin) CHECK(m.hi <= 1);

    StructureReport sr = verify_structure(t);
    CHECK(sr.balls == 11);
    CHECK(sr.disjoint_pairs == 45);
    CHECK(sr.nestings == 10);
    CHECK(sr.undecided == 0);
    REQUIRE(sr.messages.size() == 1);
    CHECK(sr.messages[0] == "all structural certificates hold");
}

TEST_CASE("tampered trees fail verification") {
    CantorTree bad = branching_tree();
    bad.levels[1].radius.lo *= 3;
    bad.levels[1].radius.hi *= 3;
    CHECK_THROWS_AS(verify_membership(bad), CertificateFailure);
    CHECK_THROWS_AS(verify_structure(bad), CertificateFailure);

    CantorTree bad2 = branching_tree();
    bad2.levels[1].balls[3].center[0] += Q("1/1000");
    CHECK_THROWS_AS(verify_structure(bad2), CertificateFailure);

    CantorTree bad3 = branching_tree();
    bad3.levels[1].balls[2].q_witness += 1;
    bool caught = false;
    try {
        verify_membership(bad3);
        verify_structure(bad3);
    } catch (const CertificateFailure&) {
        caught = true;
    }
    CHECK(caught);
}

TEST_CASE("chain tree shape and certificates") {
    const CantorTree& t = chain_tree();
    REQUIRE(t.levels.size() == 3);
    CHECK(t.levels[0].q == 3);
    CHECK(t.levels[1].q == 34);
    CHECK(t.levels[2].q == 171484);
    for (const auto& lv : t.levels) {
        CHECK(lv.N == 1);
        CHECK(lv.balls.size() == 1);
    }
    CHECK(t.levels[0].balls[0].q_witness == 1);

    CHECK(verify_membership(t).balls_checked == 1);
    StructureReport sr = verify_structure(t);
    CHECK(sr.balls == 3);
    CHECK(sr.undecided == 0);
    CHECK(sr.nestings == 2);
}

TEST_CASE("mass measure weights and ball lookups") {
    MassMeasure M{&chain_tree()};
    CHECK(M.level_weight(0) == 1);
    CHECK(M.level_weight(1) == 1);
    CHECK(M.level_weight(2) == 1);
    CHECK_THROWS_AS(M.level_weight(3), IndexOutOfRange);

    CantorTree handmade;
    handmade.levels.resize(3);
    handmade.levels[0].N = 1;
    handmade.levels[1].N = 22;
    handmade.levels[2].N = 2;
    for (auto& lv : handmade.levels) lv.balls.resize(1);
    MassMeasure Mh{&handmade};
    CHECK(Mh.level_weight(1) == Q("1/22"));
    CHECK(measure_of_ball(Mh, 2, 0) == Q("1/44"));
    CHECK_THROWS_AS(measure_of_ball(Mh, 2, 5), UnknownBall);
}

TEST_CASE("measure upper bounds respect the scale window") {
    const CantorTree& t = chain_tree();
    MassMeasure M{&t};

    BallQuery near{t.levels[2].balls[0].center, t.levels[2].radius.hi * 2};
    CHECK(mu_upper(M, near) == 1);

    BallQuery away{{Q("77/100"), Q("13/100")}, t.levels[2].radius.hi * 2};
    CHECK(mu_upper(M, away) == 0);

    CHECK_THROWS_AS(mu_upper(M, BallQuery{away.center, Q("1/2")}), ScaleWindow);
    CHECK_THROWS_AS(mu_upper(M, BallQuery{away.center, Q("1/100000000000")}), ScaleWindow);
}

TEST_CASE("sampled mass ratios are seeded and reproducible") {
    const CantorTree& t = chain_tree();
    MassMeasure M{&t};

    Lemma2Report r = verify_lemma2(t, M, 32, 11);
    CHECK(r.samples == 32);
    CHECK(r.seed == 11);
    CHECK(r.zero_hits == 27);
    CHECK(r.c_emp.hi >= parse_decimal("24235.221"));
    CHECK(r.c_emp.hi < parse_decimal("24235.222"));
    REQUIRE(r.per_regime.size() == 1);
    CHECK(r.per_regime.count(1) == 1);

    Lemma2Report r2 = verify_lemma2(t, M, 32, 11);
    CHECK(r2.zero_hits == r.zero_hits);
    CHECK(icmp(r2.c_emp, r.c_emp) == 0);

    // more samples with the same seed replay the same prefix of draws
    Lemma2Report r3 = verify_lemma2(t, M, 64, 11);
    CHECK(r3.c_emp.hi >= r.c_emp.hi);

    // a single-level tree offers no scales to sample
    CantorConfig c0;
    c0.v = Q("3/2");
    c0.s = Q("1/2");
    c0.J = 0;
    c0.q_list = {mpz_class(2)};
    CantorTree flat = build_tree(seq_sqrt2(), c0);
    MassMeasure Mf{&flat};
    CHECK_THROWS_AS(verify_lemma2(flat, Mf, 8, 1), DomainError);
}

TEST_SUITE_END();
