#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dioph/bestapprox.hpp"
#include "dioph/interval.hpp"
#include "dioph/lattice.hpp"
#include "dioph/numeric.hpp"

namespace dioph {

enum class TreeMode { Strict, Relaxed };

// Parameters of the nested-ball construction. v is the approximation exponent
// (radii are q^{-v}), s the mass-distribution parameter; both exact rationals.
struct CantorConfig {
    mpq_class v;
    mpq_class s;
    unsigned J = 0;                // deepest level index; levels run 0..J
    TreeMode mode = TreeMode::Relaxed;
    mpq_class safety = 1;          // >= 1, multiplies the strict growth thresholds
    std::vector<mpz_class> q_list; // explicit q_{k_j} values; empty = greedy choice
};

// Certified test of rho_k >= 4*q_k^{-v}, the within-level disjointness condition.
struct Condition4 {
    bool holds;
    Interval margin; // rho_k * q_k^v / 4; the condition holds iff margin >= 1
};
Condition4 check_condition4(const BestApproxSequence& seq, size_t k, const mpq_class& v);

// N_{j+1} = floor(2^{n-1} * q_next * q_prev^{-n v}), evaluated exactly.
mpz_class children_count(const mpz_class& q_prev, const mpz_class& q_next, unsigned n,
                         const mpq_class& v);

// Smallest integer q' with q' >= safety * (q^{n v} / prodN)^{1/(1 - s v)}.
mpz_class strict_threshold(const mpz_class& q, const mpz_class& prodN, unsigned n,
                           const mpq_class& v, const mpq_class& s, const mpq_class& safety);

struct SubseqLevel {
    unsigned j = 0;
    size_t k = 0;                         // index into seq.records
    mpz_class q;                          // q_{k_j}
    mpz_class N;                          // children per parent (N_0 = 1)
    std::optional<Interval> cond4_margin; // absent at j = 0
    mpz_class g1_required_q;              // G1 threshold for this step (0 at j = 0)
    bool g1_ok = true;
    bool g2_ok = true;
    mpq_class g2_lambda_n;                // lambda_n of the level lattice when computed
};

struct SubseqAudit {
    std::vector<SubseqLevel> levels;
    std::vector<std::string> notes;
};

// Strict mode enforces condition (4), the q-growth bound G1 and the
// lambda_n-smallness bound G2 (scaled by config.safety); relaxed mode enforces
// (4) only and reports the rest as audit margins.
SubseqAudit select_subsequence(const BestApproxSequence& seq, const CantorConfig& config);

struct Ball {
    std::vector<mpq_class> center; // dyadic representative of q_witness*A mod Z^n
    mpz_class q_witness;           // in [1, q_{k_j}); 0 only for a q_{k_0} = 1 root
    long parent = -1;              // index into the previous level's balls
};

struct LevelRecord {
    unsigned j = 0;
    size_t k = 0;
    mpz_class q;
    Interval radius; // certified q^{-v}
    mpz_class N;
    std::vector<Ball> balls;
};

struct CantorTree {
    CantorConfig config;
    TargetVector target;
    std::vector<LevelRecord> levels;
    SubseqAudit audit;
    std::vector<std::string> anomalies;

    size_t n() const { return target.n(); }
};

CantorTree build_tree(const BestApproxSequence& seq, const CantorConfig& config);

// The natural probability measure: every level has total mass 1 and each ball
// splits its weight equally among its N_{j+1} children.
struct MassMeasure {
    const CantorTree* tree = nullptr;
    mpq_class level_weight(unsigned j) const; // 1/(N_0 * ... * N_j)
};

mpq_class measure_of_ball(const MassMeasure& M, unsigned level, size_t index);

// Exact upper bound on mu(B(x, r)): weight of the deepest applicable level
// times the number of its balls not certifiably disjoint from the query.
mpq_class mu_upper(const MassMeasure& M, const BallQuery& B);

struct MembershipReport {
    size_t balls_checked = 0;
    std::vector<Interval> worst_margin; // per ancestor level: max dist/(w^{-v})
    std::vector<std::string> anomalies;
};
MembershipReport verify_membership(const CantorTree& tree);

struct StructureReport {
    size_t balls = 0;
    size_t disjoint_pairs = 0;
    size_t nestings = 0;
    size_t undecided = 0;
    std::vector<std::string> messages;
};
StructureReport verify_structure(const CantorTree& tree);

struct Lemma2Report {
    size_t samples = 0;
    std::uint64_t seed = 0;
    Interval c_emp;                          // max over samples of mu_upper/r^s
    std::map<unsigned, Interval> per_regime; // keyed by the Lemma 1 regime index
    size_t zero_hits = 0;                    // samples with mu_upper = 0
};
Lemma2Report verify_lemma2(const CantorTree& tree, const MassMeasure& M, size_t sample_count,
                           std::uint64_t seed);

} // namespace dioph
