#include "dioph/expr.hpp"

#include <mpfr.h>

#include <cctype>
#include <vector>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, End } kind;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (i_ >= s_.size()) return {Token::Kind::End, ""};
        char c = s_[i_];
        if (c == '(') { ++i_; return {Token::Kind::LParen, "("}; }
        if (c == ')') { ++i_; return {Token::Kind::RParen, ")"}; }
        if (c == '+' || c == '-' || c == '*' || c == '/') {
            ++i_;
            return {Token::Kind::Op, std::string(1, c)};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t j = i_;
            bool dot = false, tilde = false;
            while (j < s_.size()) {
                char d = s_[j];
                if (std::isdigit(static_cast<unsigned char>(d))) { ++j; continue; }
                if (d == '.' && !dot && !tilde) { dot = true; ++j; continue; }
                if (d == '~' && !tilde) { tilde = true; ++j; continue; }
                break;
            }
            Token t{Token::Kind::Number, s_.substr(i_, j - i_)};
            i_ = j;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i_;
            while (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j]))) ++j;
            Token t{Token::Kind::Ident, s_.substr(i_, j - i_)};
            i_ = j;
            return t;
        }
        throw UnsupportedExpression("unexpected character '" + std::string(1, c) +
                                    "' in expression: " + s_);
    }

private:
    const std::string& s_;
    size_t i_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& s) : src_(s), lex_(s) { advance(); }

    ExprPtr parse() {
        ExprPtr e = expr();
        if (cur_.kind != Token::Kind::End)
            throw UnsupportedExpression("trailing input after expression: " + src_);
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    ExprPtr make_bin(Expr::Kind k, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(a);
        e->b = std::move(b);
        return e;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (cur_.kind == Token::Kind::Op && (cur_.text == "+" || cur_.text == "-")) {
            std::string op = cur_.text;
            advance();
            e = make_bin(op == "+" ? Expr::Kind::Add : Expr::Kind::Sub, e, term());
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (cur_.kind == Token::Kind::Op && (cur_.text == "*" || cur_.text == "/")) {
            std::string op = cur_.text;
            advance();
            e = make_bin(op == "*" ? Expr::Kind::Mul : Expr::Kind::Div, e, factor());
        }
        return e;
    }

    ExprPtr factor() {
        if (cur_.kind == Token::Kind::Op && cur_.text == "-") {
            advance();
            auto zero = std::make_shared<Expr>();
            zero->kind = Expr::Kind::Rational;
            zero->value = 0;
            return make_bin(Expr::Kind::Sub, zero, factor());
        }
        if (cur_.kind == Token::Kind::LParen) {
            advance();
            ExprPtr e = expr();
            if (cur_.kind != Token::Kind::RParen)
                throw UnsupportedExpression("missing ')' in expression: " + src_);
            advance();
            return e;
        }
        if (cur_.kind == Token::Kind::Ident) {
            std::string id = cur_.text;
            advance();
            if (id == "sqrt") return sqrt_factor();
            auto e = std::make_shared<Expr>();
            if (id == "phi") e->kind = Expr::Kind::Phi;
            else if (id == "pi") e->kind = Expr::Kind::Pi;
            else if (id == "e") e->kind = Expr::Kind::E;
            else throw UnsupportedExpression("unknown constant '" + id + "'");
            return e;
        }
        if (cur_.kind == Token::Kind::Number) return number_factor();
        throw UnsupportedExpression("malformed expression: " + src_);
    }

    ExprPtr sqrt_factor() {
        if (cur_.kind != Token::Kind::LParen)
            throw UnsupportedExpression("sqrt requires a parenthesized positive integer");
        advance();
        if (cur_.kind != Token::Kind::Number || cur_.text.find('.') != std::string::npos ||
            cur_.text.find('~') != std::string::npos)
            throw UnsupportedExpression("sqrt argument must be a positive integer");
        mpz_class k(cur_.text, 10);
        advance();
        if (cur_.kind != Token::Kind::RParen)
            throw UnsupportedExpression("missing ')' after sqrt argument");
        advance();
        if (k <= 0)
            throw UnsupportedExpression("sqrt argument must be positive");
        if (mpz_perfect_square_p(k.get_mpz_t()))
            throw UnsupportedExpression("sqrt(" + k.get_str() +
                                        ") is rational; write the integer instead");
        if (!k.fits_ulong_p())
            throw UnsupportedExpression("sqrt argument too large");
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::SqrtInt;
        e->arg = k.get_ui();
        return e;
    }

    ExprPtr number_factor() {
        std::string t = cur_.text;
        advance();
        auto e = std::make_shared<Expr>();
        size_t tilde = t.find('~');
        if (tilde != std::string::npos) {
            std::string mant = t.substr(0, tilde), expo = t.substr(tilde + 1);
            if (expo.empty())
                throw UnsupportedExpression("decimal literal missing error exponent: " + t);
            e->kind = Expr::Kind::Decimal;
            e->value = parse_decimal(mant);
            mpz_class p10;
            mpz_ui_pow_ui(p10.get_mpz_t(), 10, std::stoul(expo));
            e->radius = mpq_class(1, p10);
            e->radius.canonicalize();
            return e;
        }
        if (t.find('.') != std::string::npos)
            throw UnsupportedExpression(
                "bare decimal '" + t + "': declare its precision as <decimal>~<digits> "
                "or use an exact rational p/q");
        e->kind = Expr::Kind::Rational;
        e->value = mpq_class(mpz_class(t, 10));
        return e;
    }

    const std::string& src_;
    Lexer lex_;
    Token cur_;
};

Interval mpfr_leaf(void (*set)(mpfr_t, mpfr_rnd_t), unsigned long prec) {
    mpfr_t lo, hi;
    mpfr_init2(lo, static_cast<mpfr_prec_t>(prec));
    mpfr_init2(hi, static_cast<mpfr_prec_t>(prec));
    set(lo, MPFR_RNDD);
    set(hi, MPFR_RNDU);
    mpq_class qlo, qhi;
    mpfr_get_q(qlo.get_mpq_t(), lo);
    mpfr_get_q(qhi.get_mpq_t(), hi);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return {qlo, qhi};
}

thread_local unsigned long g_sqrt_arg = 0;

void set_sqrt(mpfr_t x, mpfr_rnd_t r) { mpfr_sqrt_ui(x, g_sqrt_arg, r); }
void set_pi(mpfr_t x, mpfr_rnd_t r) { mpfr_const_pi(x, r); }
void set_e(mpfr_t x, mpfr_rnd_t r) {
    mpfr_t one;
    mpfr_init2(one, 8);
    mpfr_set_ui(one, 1, MPFR_RNDN);
    mpfr_exp(x, one, r);
    mpfr_clear(one);
}

} // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse(); }

Interval eval_expr(const Expr& e, unsigned long prec) {
    switch (e.kind) {
    case Expr::Kind::Rational: return Interval(e.value);
    case Expr::Kind::Decimal: return {e.value - e.radius, e.value + e.radius};
    case Expr::Kind::SqrtInt:
        g_sqrt_arg = e.arg;
        return mpfr_leaf(set_sqrt, prec);
    case Expr::Kind::Pi: return mpfr_leaf(set_pi, prec);
    case Expr::Kind::E: return mpfr_leaf(set_e, prec);
    case Expr::Kind::Phi: {
        g_sqrt_arg = 5;
        Interval s5 = mpfr_leaf(set_sqrt, prec);
        return (Interval(mpq_class(1)) + s5) / Interval(mpq_class(2));
    }
    case Expr::Kind::Add: return eval_expr(*e.a, prec) + eval_expr(*e.b, prec);
    case Expr::Kind::Sub: return eval_expr(*e.a, prec) - eval_expr(*e.b, prec);
    case Expr::Kind::Mul: return eval_expr(*e.a, prec) * eval_expr(*e.b, prec);
    case Expr::Kind::Div: return eval_expr(*e.a, prec) / eval_expr(*e.b, prec);
    }
    throw DomainError("unreachable expression kind");
}

std::optional<mpq_class> exact_rational(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Rational: return e.value;
    case Expr::Kind::Decimal:
    case Expr::Kind::SqrtInt:
    case Expr::Kind::Pi:
    case Expr::Kind::E:
    case Expr::Kind::Phi: return std::nullopt;
    default: break;
    }
    auto a = exact_rational(*e.a), b = exact_rational(*e.b);
    if (!a || !b) return std::nullopt;
    switch (e.kind) {
    case Expr::Kind::Add: return *a + *b;
    case Expr::Kind::Sub: return *a - *b;
    case Expr::Kind::Mul: return *a * *b;
    case Expr::Kind::Div:
        if (*b == 0) throw DomainError("division by zero in expression");
        return *a / *b;
    default: break;
    }
    return std::nullopt;
}

bool refinable(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Decimal: return false;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return refinable(*e.a) && refinable(*e.b);
    default: return true;
    }
}

} // namespace dioph
