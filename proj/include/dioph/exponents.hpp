#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

#include "dioph/bestapprox.hpp"
#include "dioph/interval.hpp"
#include "dioph/numeric.hpp"

namespace dioph {

enum class ExponentKind { UniformColumn, UniformRow, Inhomogeneous };

struct ExponentSample {
    mpz_class scale; // q_k, Q, or record q
    Interval ratio;  // log(1/dist)/log(scale)
};

// Finite-data exponent estimate. The underlying exponents are limits; the
// estimator exposes its sample window so the proxy is falsifiable.
struct ExponentEstimate {
    ExponentKind kind = ExponentKind::UniformColumn;
    std::vector<ExponentSample> samples;
    Interval estimate;     // tail-min (uniform) or windowed max (inhomogeneous)
    bool infinite = false; // certified-zero distance encountered
    std::string window;
    std::vector<std::string> anomalies;
};

// 1×n transpose of a column target (the dual linear form q -> tA·q).
struct DualForm {
    TargetVector row;
};

// liminf proxy of log(1/rho_k)/log q_k over records (k >= 1), tail-min over
// the trailing half of the samples.
ExponentEstimate omega_hat_column(const BestApproxSequence& seq);

// m(Q) = min_{0 < |q| <= Q} ||tA·q|| by exhaustive certified enumeration for
// each grid Q; sample exponent log(1/m(Q))/log Q, tail-min estimate.
ExponentEstimate omega_hat_row(const DualForm& F, const std::vector<mpz_class>& Q_grid);

// Doubling grid 10, 20, 40, ... capped and terminated at Q_max.
std::vector<mpz_class> default_grid(const mpz_class& Q_max);

// Running-record scan of ||q·A - beta||; estimate = max sample ratio over
// q > sqrt(q_max). beta components may be any grammar constants.
ExponentEstimate omega_inhom(const TargetVector& A, const TargetVector& beta,
                             const mpz_class& q_max);

// Closed-form bounds (exact rational arithmetic).
mpq_class bound_theorem1(const mpq_class& omega_hat_row);                  // 1/w
mpq_class bound_eq2(const mpq_class& v, unsigned n, const mpq_class& omega_hat_row);
mpq_class bound_eq3(const mpq_class& v, unsigned n, unsigned m);           // min(n, m/v)

struct TransferCase {
    std::string beta_text;
    ExponentEstimate estimate;
    bool pass = false;
};

struct TransferReport {
    ExponentEstimate row_estimate; // shared omega-hat of the dual form
    Interval bound;                // 1/row_estimate (0 when infinite)
    mpq_class tol;                 // pass threshold factor is (1 - tol)
    std::vector<TransferCase> cases;
    Interval median;               // of case estimates, lower-middle element
    bool low_confidence = false;   // budget too small to trust the proxies
    std::vector<std::string> anomalies;
};

TransferReport check_transfer(const TargetVector& A, const std::vector<TargetVector>& betas,
                              const mpz_class& q_max, const mpz_class& Q_max);

// Expected: growing the budget never decreases the inhomogeneous estimate and
// never increases a uniform tail-min. Violations are reported, not fatal.
std::vector<std::string> monotonicity_anomalies(const ExponentEstimate& small_budget,
                                                const ExponentEstimate& large_budget);

// When the column estimate sits near 1/n, the row estimate should sit near n.
std::optional<std::string> corollary_crosscheck(const ExponentEstimate& column,
                                                const ExponentEstimate& row, unsigned n);

} // namespace dioph
