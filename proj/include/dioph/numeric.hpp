#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dioph/expr.hpp"
#include "dioph/interval.hpp"

namespace dioph {

// A target constant: parsed expression plus its source text (kept verbatim
// for round-tripping through artifacts).
struct RealConstant {
    std::string text;
    ExprPtr ast;

    static RealConstant parse(const std::string& s);
    std::optional<mpq_class> rational() const { return exact_rational(*ast); }
    bool is_refinable() const { return refinable(*ast); }
};

struct TargetVector {
    std::vector<RealConstant> comp;

    // Splits on top-level commas: "sqrt(2),sqrt(3)".
    static TargetVector parse(const std::string& csv);
    size_t n() const { return comp.size(); }
    bool all_rational() const;
    std::string text() const;
};

// Working-precision policy: refinement starts at 64 bits and doubles up to the
// cap (default 256, override via DIOPH_PRECISION_CAP).
inline constexpr unsigned long kPrecisionStart = 64;
unsigned long precision_cap();

// Enclosure of width <= 2^-p, or PrecisionExhausted.
Interval approx(const RealConstant& x, unsigned long p);
std::vector<Interval> approx_vec(const TargetVector& A, unsigned long p);

// Distance to the nearest integer (scalar) / nearest integer vector in the
// sup norm. Always a subinterval of [0, 1/2]; inputs wider than 1 collapse to
// the trivial enclosure [0, 1/2].
Interval torus_dist1(const Interval& t);
Interval torus_dist(const std::vector<Interval>& t);

enum class Cmp { Less, Equal, Greater };

// Certified order of two constants. Equal is only reported for exact rational
// agreement; an undecided comparison at the precision cap raises
// PrecisionExhausted rather than guessing.
Cmp certified_compare(const RealConstant& a, const RealConstant& b);

// ||q·A - beta|| as a certified interval of width <= 2^-p (beta exact
// rationals, may be null for the homogeneous distance).
Interval dist_qA(const TargetVector& A, const mpz_class& q,
                 const std::vector<mpq_class>* beta, unsigned long p);

// Certified integer extraction from a refinable enclosure producer f(prec).
mpz_class certified_floor(const std::function<Interval(unsigned long)>& f);
// Nearest integer; an exact half-integer tie raises PrecisionExhausted.
mpz_class certified_nearest(const std::function<Interval(unsigned long)>& f);

// Fractional parts frac(alpha_i) as enclosures of width <= 2^-p inside [0, 1).
std::vector<Interval> fractional_parts(const TargetVector& A, unsigned long p);

} // namespace dioph
