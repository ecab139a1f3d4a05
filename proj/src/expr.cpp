#include "mdet/expr.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mdet/errors.hpp"
#include "mdet/quadrature.hpp"

namespace mdet::expr {

Expr constant(double v) { return std::make_shared<const Node>(Node{Op::Const, v, {}}); }
Expr variable() { return std::make_shared<const Node>(Node{Op::Var, 0.0, {}}); }
Expr unary(Op op, Expr a) { return std::make_shared<const Node>(Node{op, 0.0, {std::move(a)}}); }
Expr binary(Op op, Expr a, Expr b) {
    return std::make_shared<const Node>(Node{op, 0.0, {std::move(a), std::move(b)}});
}

bool equal(const Expr& a, const Expr& b) {
    if (a->op != b->op || a->args.size() != b->args.size()) return false;
    if (a->op == Op::Const && a->value != b->value) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!equal(a->args[i], b->args[i])) return false;
    }
    return true;
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string text;
    double number = 0.0;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Number: return "number '" + t.text + "'";
        case Tok::Ident: return "identifier '" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
            while (i < src.size() && is_digit(src[i])) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && is_digit(src[i])) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && is_digit(src[j])) {
                    i = j;
                    while (i < src.size() && is_digit(src[i])) ++i;
                }
            }
            Token t{Tok::Number, start, std::string(src.substr(start, i - start))};
            const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
            if (res.ec != std::errc() || !std::isfinite(t.number)) {
                throw ParseError(start, "invalid number '" + t.text + "'");
            }
            out.push_back(std::move(t));
            continue;
        }
        if (is_alpha(c)) {
            while (i < src.size() && (is_alpha(src[i]) || is_digit(src[i]))) ++i;
            out.push_back(Token{Tok::Ident, start, std::string(src.substr(start, i - start))});
            continue;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ',': kind = Tok::Comma; break;
            default: throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
        out.push_back(Token{kind, start, std::string(1, c)});
        ++i;
    }
    out.push_back(Token{Tok::End, src.size(), ""});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Expr parse_all() {
        Expr e = expr();
        if (peek().kind == Tok::RParen) throw ParseError(peek().pos, "unbalanced parenthesis: unexpected ')'");
        if (peek().kind != Tok::End) {
            throw ParseError(peek().pos, "expected operator or end of input, found " + describe(peek()));
        }
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept(Tok::Plus)) {
                lhs = binary(Op::Add, lhs, term());
            } else if (accept(Tok::Minus)) {
                lhs = binary(Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = unary_expr();
        for (;;) {
            if (accept(Tok::Star)) {
                lhs = binary(Op::Mul, lhs, unary_expr());
            } else if (accept(Tok::Slash)) {
                lhs = binary(Op::Div, lhs, unary_expr());
            } else {
                return lhs;
            }
        }
    }

    Expr unary_expr() {
        if (accept(Tok::Minus)) return unary(Op::Neg, unary_expr());
        return power();
    }

    Expr power() {
        Expr lhs = primary();
        while (accept(Tok::Caret)) lhs = binary(Op::Pow, lhs, power_arg());
        return lhs;
    }

    Expr power_arg() {
        if (accept(Tok::Minus)) return unary(Op::Neg, power_arg());
        return primary();
    }

    Expr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: next(); return constant(t.number);
            case Tok::LParen: {
                const std::size_t open = t.pos;
                next();
                Expr e = expr();
                if (!accept(Tok::RParen)) {
                    throw ParseError(peek().pos, "unbalanced parenthesis: '(' at position " +
                                                     std::to_string(open) + " expects ')', found " +
                                                     describe(peek()));
                }
                return e;
            }
            case Tok::Ident: {
                next();
                if (t.text == "x") return variable();
                Op op;
                if (t.text == "exp") {
                    op = Op::Exp;
                } else if (t.text == "log") {
                    op = Op::Log;
                } else if (t.text == "abs") {
                    op = Op::Abs;
                } else {
                    throw ParseError(t.pos, "unknown identifier '" + t.text + "'");
                }
                if (!accept(Tok::LParen)) {
                    throw ParseError(peek().pos, "expected '(' after " + t.text + ", found " + describe(peek()));
                }
                if (peek().kind == Tok::RParen) {
                    throw ParseError(peek().pos, "arity error: " + t.text + " takes 1 argument, got 0");
                }
                Expr arg = expr();
                if (peek().kind == Tok::Comma) {
                    int count = 1;
                    while (accept(Tok::Comma)) {
                        expr();
                        ++count;
                    }
                    throw ParseError(t.pos, "arity error: " + t.text + " takes 1 argument, got " +
                                                std::to_string(count));
                }
                if (!accept(Tok::RParen)) {
                    throw ParseError(peek().pos, "unbalanced parenthesis: expected ')' after argument of " +
                                                     t.text + ", found " + describe(peek()));
                }
                return unary(op, arg);
            }
            default:
                throw ParseError(t.pos, "expected number, 'x', function or '(', found " + describe(t));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void check_finite(const SignedLog& s) {
    if (std::isnan(s.log_mag) || s.log_mag == kPosInf) {
        throw DomainError("non-finite intermediate value");
    }
}

}  // namespace

Expr parse(std::string_view src) {
    if (src.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw ParseError(0, "empty expression");
    }
    return Parser(lex(src)).parse_all();
}

std::string print(const Expr& e) {
    switch (e->op) {
        case Op::Const: return format_number(e->value);
        case Op::Var: return "x";
        case Op::Neg: return "(-" + print(e->args[0]) + ")";
        case Op::Exp: return "exp(" + print(e->args[0]) + ")";
        case Op::Log: return "log(" + print(e->args[0]) + ")";
        case Op::Abs: return "abs(" + print(e->args[0]) + ")";
        case Op::Add: return "(" + print(e->args[0]) + " + " + print(e->args[1]) + ")";
        case Op::Sub: return "(" + print(e->args[0]) + " - " + print(e->args[1]) + ")";
        case Op::Mul: return "(" + print(e->args[0]) + " * " + print(e->args[1]) + ")";
        case Op::Div: return "(" + print(e->args[0]) + " / " + print(e->args[1]) + ")";
        case Op::Pow: return "(" + print(e->args[0]) + " ^ " + print(e->args[1]) + ")";
    }
    return {};
}

double eval_plain(const Expr& e, double x) {
    const auto& a = e->args;
    switch (e->op) {
        case Op::Const: return e->value;
        case Op::Var: return x;
        case Op::Add: return eval_plain(a[0], x) + eval_plain(a[1], x);
        case Op::Sub: return eval_plain(a[0], x) - eval_plain(a[1], x);
        case Op::Mul: return eval_plain(a[0], x) * eval_plain(a[1], x);
        case Op::Div: return eval_plain(a[0], x) / eval_plain(a[1], x);
        case Op::Pow: return std::pow(eval_plain(a[0], x), eval_plain(a[1], x));
        case Op::Neg: return -eval_plain(a[0], x);
        case Op::Exp: return std::exp(eval_plain(a[0], x));
        case Op::Log: {
            // log|u| from the log-space route stays exact where u underflows.
            const SignedLog u = eval_signed_log(a[0], x);
            if (u.sign <= 0) throw DomainError("log of a non-positive value");
            return u.log_mag;
        }
        case Op::Abs: return std::fabs(eval_plain(a[0], x));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

SignedLog eval_signed_log(const Expr& e, double x) {
    const auto& a = e->args;
    SignedLog r;
    switch (e->op) {
        case Op::Const: r = SignedLog::from_value(e->value); break;
        case Op::Var: r = SignedLog::from_value(x); break;
        case Op::Add: r = eval_signed_log(a[0], x) + eval_signed_log(a[1], x); break;
        case Op::Sub: r = eval_signed_log(a[0], x) - eval_signed_log(a[1], x); break;
        case Op::Mul: r = eval_signed_log(a[0], x) * eval_signed_log(a[1], x); break;
        case Op::Div: {
            const SignedLog den = eval_signed_log(a[1], x);
            if (den.is_zero()) throw DomainError("division by zero");
            r = eval_signed_log(a[0], x) / den;
            break;
        }
        case Op::Neg: r = -eval_signed_log(a[0], x); break;
        case Op::Abs: {
            r = eval_signed_log(a[0], x);
            if (r.sign < 0) r.sign = 1;
            break;
        }
        case Op::Exp: {
            const double u = eval_plain(a[0], x);
            if (std::isnan(u)) throw DomainError("non-finite intermediate value");
            r = u == kNegInf ? SignedLog{} : SignedLog{u, 1};
            break;
        }
        case Op::Log: {
            const SignedLog u = eval_signed_log(a[0], x);
            if (u.sign <= 0) throw DomainError("log of a non-positive value");
            r = SignedLog::from_value(u.log_mag);
            break;
        }
        case Op::Pow: {
            const SignedLog base = eval_signed_log(a[0], x);
            const double c = eval_plain(a[1], x);
            if (!std::isfinite(c)) throw DomainError("non-finite exponent");
            if (c == 0.0) {
                r = SignedLog{0.0, 1};
            } else if (base.is_zero()) {
                if (c < 0.0) throw DomainError("zero raised to a negative power");
                r = SignedLog{};
            } else if (base.sign > 0) {
                r = SignedLog{c * base.log_mag, 1};
            } else {
                if (c != std::floor(c)) throw DomainError("negative base with non-integer exponent");
                const bool odd = std::fmod(std::fabs(c), 2.0) == 1.0;
                r = SignedLog{c * base.log_mag, odd ? -1 : 1};
            }
            if (r.log_mag == kNegInf) r = SignedLog{};
            break;
        }
    }
    check_finite(r);
    return r;
}

double eval_log(const Expr& e, double x) {
    const SignedLog s = eval_signed_log(e, x);
    if (s.sign < 0) throw DomainError("expression is negative");
    return s.sign == 0 ? kNegInf : s.log_mag;
}

TailDensity make_expr_density(const std::string& src, SupportKind support, double x0,
                              bool normalize) {
    Expr ast = parse(src);
    // Inside (-x0, x0) the kernel may be undefined; that region carries no mass.
    LogDensityFn log_f = [ast, x0](double x) {
        try {
            return eval_log(ast, x);
        } catch (const DomainError&) {
            if (std::fabs(x) < x0) return kNegInf;
            throw;
        }
    };
    TailDensity raw(support, x0, log_f, src, {}, false);
    if (!normalize) return raw;

    auto side = [&](double sign) {
        return log_integrate([&](double x) { return log_f(sign * x); }, 0.0).log_value;
    };
    double log_mass = side(1.0);
    if (support == SupportKind::Hamburger) log_mass = log_add(log_mass, side(-1.0));
    if (!std::isfinite(log_mass)) throw DomainError("expression density has zero or infinite mass");
    return raw.scaled(-log_mass, true);
}

}  // namespace mdet::expr
