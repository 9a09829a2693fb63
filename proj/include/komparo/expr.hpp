#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "komparo/errors.hpp"

namespace komparo {

enum class BuiltinFn { Abs, Min, Max, Norm };
enum class CmpOp { Le, Lt, Ge, Gt, Eq };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Comparison {
    ExprPtr lhs;
    CmpOp op;
    ExprPtr rhs;
};

// A piecewise branch; an empty guard marks the mandatory trailing "else".
struct Branch {
    std::vector<Comparison> guard;
    ExprPtr body;
};

// Immutable expression node. Trees are shared freely across threads;
// evaluation never mutates.
class Expr {
  public:
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Call, Piecewise };

    static ExprPtr constant(double v);
    static ExprPtr variable(int index);  // 1-based
    static ExprPtr binary(Kind op, ExprPtr lhs, ExprPtr rhs);
    static ExprPtr pow(ExprPtr base, int exponent);
    static ExprPtr call(BuiltinFn fn, std::vector<ExprPtr> args);
    static ExprPtr piecewise(std::vector<Branch> branches);

    Kind kind() const { return kind_; }
    double constant_value() const { return constant_; }
    int variable_index() const { return var_index_; }
    int exponent() const { return exponent_; }
    BuiltinFn fn() const { return fn_; }
    const std::vector<ExprPtr>& operands() const { return operands_; }
    const std::vector<Branch>& branches() const { return branches_; }

    int max_variable_index() const;

  private:
    Kind kind_;
    double constant_ = 0.0;
    int var_index_ = 0;
    int exponent_ = 0;
    BuiltinFn fn_ = BuiltinFn::Abs;
    std::vector<ExprPtr> operands_;
    std::vector<Branch> branches_;
};

// A real-valued function of x1..xd. Values are immutable after construction
// and evaluation is pure, so concurrent use needs no synchronization.
class FuncExpr {
  public:
    FuncExpr(int dimension, ExprPtr body, std::string label = "");

    int dimension() const { return dimension_; }
    const ExprPtr& body() const { return body_; }

    // Deterministic pointwise evaluation; throws EvalError on division by
    // zero, 0 raised to a negative power, or a non-finite result.
    double eval(std::span<const double> point) const;

    // Canonical text form; parse(print()) evaluates identically.
    std::string print() const;

    // Provenance identifier: the builtin name when there is one, else the
    // canonical printed form.
    std::string id() const { return label_.empty() ? print() : label_; }

    // (-1) * f, as an expression.
    FuncExpr negate() const;

  private:
    int dimension_;
    ExprPtr body_;
    std::string label_;
};

// Parses the expression grammar:
//   expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
//   factor := atom ('^' integer)? ; atom := number | var | '(' expr ')' | call | piecewise ;
//   var := 'x' integer ; call := ident '(' expr (',' expr)* ')' , ident in {abs,min,max,norm} ;
//   piecewise := 'piecewise' '{' (guard ':' expr ';')+ 'else' ':' expr '}' ;
//   guard := comparison ('&&' comparison)* ; comparison := expr ('<='|'<'|'>='|'>'|'==') expr.
// Numeric literals may carry a leading '-'.
FuncExpr parse(std::string_view text, int dimension);

// Fixture catalog: euclid_norm(d), sum_squares(d), exmupper_f, identity_1d,
// double_well. Unknown names raise ConfigError listing the catalog.
FuncExpr builtin(std::string_view name);
std::vector<std::string> builtin_catalog();

std::string print_expr(const Expr& e);

}  // namespace komparo
