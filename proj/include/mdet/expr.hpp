#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mdet/density.hpp"
#include "mdet/log_math.hpp"

namespace mdet::expr {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Abs };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    double value = 0.0;  ///< Const only
    std::vector<Expr> args;
};

Expr constant(double v);
Expr variable();
Expr unary(Op op, Expr a);
Expr binary(Op op, Expr a, Expr b);

/// Structural equality; constants compare bitwise.
bool equal(const Expr& a, const Expr& b);

/// Grammar (EBNF, see docs/expression-grammar.md):
///   expr    = term { ("+" | "-") term } ;
///   term    = unary { ("*" | "/") unary } ;
///   unary   = "-" unary | power ;
///   power   = primary { "^" powarg } ;
///   powarg  = "-" powarg | primary ;
///   primary = number | "x" | func "(" expr ")" | "(" expr ")" ;
///   func    = "exp" | "log" | "abs" ;
/// Throws ParseError with the byte offset of the offending token.
Expr parse(std::string_view src);

/// Canonical, fully parenthesised text that parses back to an equal tree.
std::string print(const Expr& e);

/// Direct floating-point evaluation.
double eval_plain(const Expr& e, double x);

/// Signed log-magnitude of the expression value. exp(u) contributes the
/// plain value of u, u^c contributes c*log|u|, products and quotients add
/// log-magnitudes and sums combine by signed log-sum-exp, so that
/// exp(-x^2/2) at x = 40 gives exactly -800. Throws DomainError.
SignedLog eval_signed_log(const Expr& e, double x);

/// log of the expression value; -inf for zero. Throws DomainError when the
/// value is negative or an intermediate is not finite.
double eval_log(const Expr& e, double x);

/// Wraps a parsed kernel as a tail density. With normalize = true the kernel
/// is divided by its quadrature mass over the support.
TailDensity make_expr_density(const std::string& src, SupportKind support, double x0,
                              bool normalize);

}  // namespace mdet::expr
