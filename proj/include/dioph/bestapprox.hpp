#pragma once

#include <gmpxx.h>
#include <optional>
#include <vector>

#include "dioph/interval.hpp"
#include "dioph/numeric.hpp"

namespace dioph {

// One best approximation: q such that ||p·A|| > ||q·A|| for all 0 < p < q
// (q_0 = 1 opens the sequence by convention).
struct BestApproxRecord {
    long k = 0;
    mpz_class q;
    std::vector<mpz_class> P;     // nearest integer vector to q·A
    Interval rho_next;            // ||q_k·A||
    std::optional<Interval> rho_k; // ||q_{k-1}·A||, absent at k = 0
};

struct BestApproxSequence {
    TargetVector target;
    mpz_class q_max;
    std::vector<BestApproxRecord> records;
    Interval dirichlet_c; // max over k of rho_{k+1}·q_k^{1/n}
    std::vector<std::string> anomalies;
};

inline constexpr unsigned long kScanLimit = 10000000; // supported desk scale

// Exhaustive certified scan over q = 1..q_max.
BestApproxSequence best_approx_sequence(const TargetVector& A, const mpz_class& q_max);

// Independent n = 1 oracle: denominators of continued-fraction convergents
// <= q_max (classically the best approximations).
std::vector<mpz_class> cf_denominators(const RealConstant& alpha, const mpz_class& q_max);

// rho_k = ||q_{k-1}·A|| = min over 0 < q < q_k (k >= 1).
Interval rho(const BestApproxSequence& seq, size_t k);

struct AuditReport {
    unsigned long records_checked = 0;
    unsigned long comparisons = 0;
    unsigned long violations = 0;
};

// Exhaustive defining-property re-verification for records with q_k <= q_cap:
// every 0 < p < q_k satisfies ||p·A|| > ||q_k·A||, decided with certificates.
AuditReport audit_defining_property(const BestApproxSequence& seq, const mpz_class& q_cap);

} // namespace dioph
