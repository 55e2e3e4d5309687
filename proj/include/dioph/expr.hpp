#pragma once

#include <gmpxx.h>
#include <memory>
#include <optional>
#include <string>

#include "dioph/interval.hpp"

namespace dioph {

// Expression grammar for target constants:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '(' expr ')' | 'sqrt' '(' <posint> ')' | 'phi' | 'pi' | 'e'
//           | <int> | <int>/<posint> | <decimal>~<error-exponent>
// sqrt() accepts non-square positive integers only; a decimal literal d~e is
// the closed interval d ± 10^-e and cannot be refined past that radius.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Rational, Decimal, SqrtInt, Phi, Pi, E, Add, Sub, Mul, Div };
    Kind kind;
    mpq_class value;   // Rational: exact value; Decimal: center
    mpq_class radius;  // Decimal only
    unsigned long arg = 0; // SqrtInt
    ExprPtr a, b;      // binary nodes
};

ExprPtr parse_expr(const std::string& text);

// Enclosure of the expression value; leaves evaluated at prec bits with
// directed rounding, interior arithmetic exact. Enclosures are nested in prec.
Interval eval_expr(const Expr& e, unsigned long prec);

// Exact value when the expression is rational arithmetic throughout
// (declared-precision decimals are not exact).
std::optional<mpq_class> exact_rational(const Expr& e);

// False iff the expression contains a decimal literal (whose radius is a
// floor on achievable width).
bool refinable(const Expr& e);

} // namespace dioph
