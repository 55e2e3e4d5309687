#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <string>
#include <vector>

#include "dioph/bestapprox.hpp"
#include "dioph/interval.hpp"

namespace dioph {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

mpq_class sup_norm(const QVec& v);
mpq_class det_abs(const QMat& m);

struct MinimaEntry {
    mpq_class lambda; // sup-norm successive minimum
    QVec witness;     // attaining lattice vector, sign-canonical
};

// The lattice Z·(P_k/q_k) + Z^n scaled out of the torus. basis rows generate
// it; |det| = 1/q_k exactly for non-degenerate records.
struct TorusLattice {
    mpz_class q_k;
    std::vector<mpz_class> P_k;
    QMat basis;                      // upper-triangular (Hermite rows / q_k)
    std::vector<MinimaEntry> minima; // ascending
    QMat reduced_basis;              // rows e_1..e_n, sorted by sup norm
    std::vector<mpq_class> reduced_ratios; // |e_i| / lambda_i, exact
    mpq_class c_red = 0;             // max ratio, recorded certificate
    mpq_class quasi_c = 0;           // min sampled |sum x_i e_i| / max |x_i e_i|

    size_t n() const { return basis.size(); }
};

// Exact construction + analysis (minima, reduced basis, certificates).
// Throws DegenerateLattice when gcd(gcd(P_k), q_k) > 1.
TorusLattice build_lattice(const BestApproxRecord& rec);

// Recompute pieces of an already-built lattice (pure; used for cross-checks).
std::vector<MinimaEntry> successive_minima(const TorusLattice& L);
QMat reduce_basis(const TorusLattice& L);

struct BallQuery {
    QVec center;     // torus representative, reduced into [0,1)^n
    mpq_class radius; // 0 < r <= 1/2, closed sup-norm ball
};

enum class CountMode { Exact, LatticeFast };

struct CountResult {
    mpz_class lower, upper;           // certified bracket; equal in exact mode
    std::vector<mpz_class> witnesses; // q values inside (lower-bound set), ascending
    CountMode mode = CountMode::Exact;
};

// Card(Gamma_k cap B) with Gamma_k = { q·A + Z^n : 0 <= q < q_k }. Exact mode
// scans q; lattice-fast counts Lambda_k points at radius r -/+ rho_{k+1} and
// recovers q values by modular inversion.
CountResult count_gamma_in_ball(const BestApproxSequence& seq, size_t k,
                                const BallQuery& B, CountMode mode);

struct Lemma1Bound {
    mpq_class form_a; // C·prod_{j<i}(r/lambda_j); C·q·r^n once r > lambda_n
    mpq_class form_b; // C·(q·prod_{j>=i} lambda_j)·r^(i-1); equals form_a at regime n+1
    unsigned regime;  // i in 1..n for lambda_{i-1} <= r <= lambda_i; n+1 above lambda_n
};

Lemma1Bound lemma1_bound(const TorusLattice& L, const mpq_class& r, const mpq_class& C_cal);

// Empirical calibration: max over seeded (x, r, k) samples of
// exact count / form_a(C = 1). Only records with q_k <= q_eligible enter.
mpq_class calibrate_C(const BestApproxSequence& seq, unsigned long samples,
                      std::uint64_t seed, const mpz_class& q_eligible = 100000);

// Certified check of rho_k - rho_{k+1} <= lambda_{1,k} <= rho_k + rho_{k+1}.
bool lambda_rho_bracket(const BestApproxSequence& seq, size_t k, const TorusLattice& L);

} // namespace dioph
