#include "komparo/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "komparo/extreal.hpp"

namespace komparo {

// ---------------------------------------------------------------------------
// Expr construction

ExprPtr Expr::constant(double v) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Constant;
    e->constant_ = v;
    return e;
}

ExprPtr Expr::variable(int index) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Variable;
    e->var_index_ = index;
    return e;
}

ExprPtr Expr::binary(Kind op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind_ = op;
    e->operands_ = {std::move(lhs), std::move(rhs)};
    return e;
}

ExprPtr Expr::pow(ExprPtr base, int exponent) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Pow;
    e->exponent_ = exponent;
    e->operands_ = {std::move(base)};
    return e;
}

ExprPtr Expr::call(BuiltinFn fn, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Call;
    e->fn_ = fn;
    e->operands_ = std::move(args);
    return e;
}

ExprPtr Expr::piecewise(std::vector<Branch> branches) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Piecewise;
    e->branches_ = std::move(branches);
    return e;
}

int Expr::max_variable_index() const {
    int m = 0;
    switch (kind_) {
        case Kind::Variable:
            m = var_index_;
            break;
        case Kind::Piecewise:
            for (const auto& br : branches_) {
                for (const auto& cmp : br.guard) {
                    m = std::max({m, cmp.lhs->max_variable_index(), cmp.rhs->max_variable_index()});
                }
                m = std::max(m, br.body->max_variable_index());
            }
            break;
        default:
            for (const auto& op : operands_) m = std::max(m, op->max_variable_index());
            break;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Precedence levels: additive 1, multiplicative 2, power base 3, atom 4.
int precedence(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
            return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div:
            return 2;
        case Expr::Kind::Pow:
            return 3;
        default:
            return 4;
    }
}

void print_node(const Expr& e, int min_prec, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
    if (precedence(child) < min_prec) {
        out += '(';
        print_node(child, 0, out);
        out += ')';
    } else {
        print_node(child, 0, out);
    }
}

const char* cmp_token(CmpOp op) {
    switch (op) {
        case CmpOp::Le: return "<=";
        case CmpOp::Lt: return "<";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
        default: return "==";
    }
}

void print_node(const Expr& e, int /*min_prec*/, std::string& out) {
    switch (e.kind()) {
        case Expr::Kind::Constant:
            out += format_double(e.constant_value());
            break;
        case Expr::Kind::Variable:
            out += 'x';
            out += std::to_string(e.variable_index());
            break;
        case Expr::Kind::Add:
            print_child(*e.operands()[0], 1, out);
            out += " + ";
            print_child(*e.operands()[1], 2, out);
            break;
        case Expr::Kind::Sub:
            print_child(*e.operands()[0], 1, out);
            out += " - ";
            print_child(*e.operands()[1], 2, out);
            break;
        case Expr::Kind::Mul:
            print_child(*e.operands()[0], 2, out);
            out += " * ";
            print_child(*e.operands()[1], 3, out);
            break;
        case Expr::Kind::Div:
            print_child(*e.operands()[0], 2, out);
            out += " / ";
            print_child(*e.operands()[1], 3, out);
            break;
        case Expr::Kind::Pow:
            print_child(*e.operands()[0], 4, out);
            out += '^';
            out += std::to_string(e.exponent());
            break;
        case Expr::Kind::Call: {
            switch (e.fn()) {
                case BuiltinFn::Abs: out += "abs"; break;
                case BuiltinFn::Min: out += "min"; break;
                case BuiltinFn::Max: out += "max"; break;
                case BuiltinFn::Norm: out += "norm"; break;
            }
            out += '(';
            for (std::size_t i = 0; i < e.operands().size(); ++i) {
                if (i) out += ", ";
                print_node(*e.operands()[i], 0, out);
            }
            out += ')';
            break;
        }
        case Expr::Kind::Piecewise: {
            out += "piecewise { ";
            for (const auto& br : e.branches()) {
                if (br.guard.empty()) {
                    out += "else : ";
                    print_node(*br.body, 0, out);
                } else {
                    for (std::size_t i = 0; i < br.guard.size(); ++i) {
                        if (i) out += " && ";
                        print_node(*br.guard[i].lhs, 0, out);
                        out += ' ';
                        out += cmp_token(br.guard[i].op);
                        out += ' ';
                        print_node(*br.guard[i].rhs, 0, out);
                    }
                    out += " : ";
                    print_node(*br.body, 0, out);
                    out += " ; ";
                }
            }
            out += " }";
            break;
        }
    }
}

}  // namespace

std::string print_expr(const Expr& e) {
    std::string out;
    print_node(e, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_node(const Expr& e, std::span<const double> x);

bool eval_comparison(const Comparison& c, std::span<const double> x) {
    const double a = eval_node(*c.lhs, x);
    const double b = eval_node(*c.rhs, x);
    switch (c.op) {
        case CmpOp::Le: return a <= b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Ge: return a >= b;
        case CmpOp::Gt: return a > b;
        default: return a == b;
    }
}

double int_pow(double base, int exponent, const Expr& node) {
    const bool negative = exponent < 0;
    const int n = negative ? -exponent : exponent;
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= base;
    if (negative) {
        if (r == 0.0) throw EvalError("zero raised to a negative power", print_expr(node));
        r = 1.0 / r;
    }
    return r;
}

double eval_node(const Expr& e, std::span<const double> x) {
    switch (e.kind()) {
        case Expr::Kind::Constant:
            return e.constant_value();
        case Expr::Kind::Variable:
            return x[static_cast<std::size_t>(e.variable_index() - 1)];
        case Expr::Kind::Add:
            return eval_node(*e.operands()[0], x) + eval_node(*e.operands()[1], x);
        case Expr::Kind::Sub:
            return eval_node(*e.operands()[0], x) - eval_node(*e.operands()[1], x);
        case Expr::Kind::Mul:
            return eval_node(*e.operands()[0], x) * eval_node(*e.operands()[1], x);
        case Expr::Kind::Div: {
            const double a = eval_node(*e.operands()[0], x);
            const double b = eval_node(*e.operands()[1], x);
            if (b == 0.0) throw EvalError("division by zero", print_expr(e));
            return a / b;
        }
        case Expr::Kind::Pow:
            return int_pow(eval_node(*e.operands()[0], x), e.exponent(), e);
        case Expr::Kind::Call: {
            switch (e.fn()) {
                case BuiltinFn::Abs:
                    return std::fabs(eval_node(*e.operands()[0], x));
                case BuiltinFn::Min: {
                    double m = eval_node(*e.operands()[0], x);
                    for (std::size_t i = 1; i < e.operands().size(); ++i) {
                        m = std::min(m, eval_node(*e.operands()[i], x));
                    }
                    return m;
                }
                case BuiltinFn::Max: {
                    double m = eval_node(*e.operands()[0], x);
                    for (std::size_t i = 1; i < e.operands().size(); ++i) {
                        m = std::max(m, eval_node(*e.operands()[i], x));
                    }
                    return m;
                }
                default: {  // Norm
                    double s = 0.0;
                    for (const auto& arg : e.operands()) {
                        const double v = eval_node(*arg, x);
                        s += v * v;
                    }
                    return std::sqrt(s);
                }
            }
        }
        case Expr::Kind::Piecewise:
            for (const auto& br : e.branches()) {
                bool taken = true;
                for (const auto& cmp : br.guard) {
                    if (!eval_comparison(cmp, x)) {
                        taken = false;
                        break;
                    }
                }
                if (taken) return eval_node(*br.body, x);
            }
            // Unreachable: construction guarantees a trailing default branch.
            throw EvalError("piecewise fell through every branch", print_expr(e));
    }
    throw EvalError("unknown node kind", "?");
}

}  // namespace

FuncExpr::FuncExpr(int dimension, ExprPtr body, std::string label)
    : dimension_(dimension), body_(std::move(body)), label_(std::move(label)) {
    if (dimension_ < 1) throw InputError("FuncExpr dimension must be positive");
    const int used = body_->max_variable_index();
    if (used > dimension_) {
        throw ParseError("unbound variable x" + std::to_string(used) + ": dimension is " +
                             std::to_string(dimension_),
                         0);
    }
}

double FuncExpr::eval(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != dimension_) {
        throw InputError("evaluation point has length " + std::to_string(point.size()) +
                         ", expected " + std::to_string(dimension_));
    }
    const double v = eval_node(*body_, point);
    if (!std::isfinite(v)) throw EvalError("non-finite result", print());
    return v;
}

std::string FuncExpr::print() const { return print_expr(*body_); }

FuncExpr FuncExpr::negate() const {
    auto neg = Expr::binary(Expr::Kind::Mul, Expr::constant(-1.0), body_);
    std::string label = label_.empty() ? std::string() : "neg(" + label_ + ")";
    return FuncExpr(dimension_, std::move(neg), std::move(label));
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok {
    Number, Ident, Plus, Minus, Star, Slash, Caret,
    LParen, RParen, LBrace, RBrace, Comma, Colon, Semi,
    AndAnd, Le, Lt, Ge, Gt, EqEq, End
};

struct Token {
    Tok type;
    double number = 0.0;
    std::string ident;
    std::size_t pos = 0;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t pos = i;
        auto push = [&](Tok t) { out.push_back({t, 0.0, {}, pos}); };
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            double v = 0.0;
            auto res = std::from_chars(text.data() + i, text.data() + n, v);
            if (res.ec != std::errc()) throw ParseError("malformed number", pos);
            i = static_cast<std::size_t>(res.ptr - text.data());
            out.push_back({Tok::Number, v, {}, pos});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            out.push_back({Tok::Ident, 0.0, std::string(text.substr(i, j - i)), pos});
            i = j;
            continue;
        }
        switch (c) {
            case '+': push(Tok::Plus); ++i; break;
            case '-': push(Tok::Minus); ++i; break;
            case '*': push(Tok::Star); ++i; break;
            case '/': push(Tok::Slash); ++i; break;
            case '^': push(Tok::Caret); ++i; break;
            case '(': push(Tok::LParen); ++i; break;
            case ')': push(Tok::RParen); ++i; break;
            case '{': push(Tok::LBrace); ++i; break;
            case '}': push(Tok::RBrace); ++i; break;
            case ',': push(Tok::Comma); ++i; break;
            case ':': push(Tok::Colon); ++i; break;
            case ';': push(Tok::Semi); ++i; break;
            case '&':
                if (i + 1 < n && text[i + 1] == '&') {
                    push(Tok::AndAnd);
                    i += 2;
                } else {
                    throw ParseError("single '&' (expected '&&')", pos);
                }
                break;
            case '<':
                if (i + 1 < n && text[i + 1] == '=') {
                    push(Tok::Le);
                    i += 2;
                } else {
                    push(Tok::Lt);
                    ++i;
                }
                break;
            case '>':
                if (i + 1 < n && text[i + 1] == '=') {
                    push(Tok::Ge);
                    i += 2;
                } else {
                    push(Tok::Gt);
                    ++i;
                }
                break;
            case '=':
                if (i + 1 < n && text[i + 1] == '=') {
                    push(Tok::EqEq);
                    i += 2;
                } else {
                    throw ParseError("single '=' (expected '==')", pos);
                }
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
    }
    out.push_back({Tok::End, 0.0, {}, n});
    return out;
}

class Parser {
  public:
    Parser(std::vector<Token> tokens, int dimension)
        : toks_(std::move(tokens)), dim_(dimension) {}

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (peek().type == Tok::Plus || peek().type == Tok::Minus) {
            const bool plus = next().type == Tok::Plus;
            ExprPtr rhs = parse_term();
            lhs = Expr::binary(plus ? Expr::Kind::Add : Expr::Kind::Sub, std::move(lhs),
                               std::move(rhs));
        }
        return lhs;
    }

    void expect_end() {
        if (peek().type != Tok::End) throw ParseError("trailing input", peek().pos);
    }

  private:
    const Token& peek() const { return toks_[idx_]; }
    const Token& next() { return toks_[idx_++]; }

    void expect(Tok t, const char* what) {
        if (peek().type != t) throw ParseError(std::string("expected ") + what, peek().pos);
        ++idx_;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        while (peek().type == Tok::Star || peek().type == Tok::Slash) {
            const bool mul = next().type == Tok::Star;
            ExprPtr rhs = parse_factor();
            lhs = Expr::binary(mul ? Expr::Kind::Mul : Expr::Kind::Div, std::move(lhs),
                               std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_atom();
        if (peek().type == Tok::Caret) {
            next();
            bool neg = false;
            if (peek().type == Tok::Minus) {
                next();
                neg = true;
            }
            if (peek().type != Tok::Number) throw ParseError("expected integer exponent", peek().pos);
            const Token& t = next();
            const double v = t.number;
            if (v != std::floor(v) || std::fabs(v) > 10000.0) {
                throw ParseError("exponent must be an integer with magnitude <= 10000", t.pos);
            }
            int e = static_cast<int>(v);
            if (neg) e = -e;
            return Expr::pow(std::move(base), e);
        }
        return base;
    }

    ExprPtr parse_atom() {
        const Token& t = peek();
        switch (t.type) {
            case Tok::Number:
                next();
                return Expr::constant(t.number);
            case Tok::Minus: {
                // Signed numeric literal.
                next();
                if (peek().type != Tok::Number) {
                    throw ParseError("expected a number after unary '-'", peek().pos);
                }
                const Token& num = next();
                return Expr::constant(-num.number);
            }
            case Tok::LParen: {
                next();
                ExprPtr inner = parse_expr();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident:
                return parse_ident();
            default:
                throw ParseError("expected a number, variable, call, '(' or piecewise", t.pos);
        }
    }

    ExprPtr parse_ident() {
        const Token t = next();
        const std::string& name = t.ident;
        if (name == "piecewise") return parse_piecewise(t.pos);
        if (name == "abs" || name == "min" || name == "max" || name == "norm") {
            BuiltinFn fn = BuiltinFn::Abs;
            if (name == "min") fn = BuiltinFn::Min;
            else if (name == "max") fn = BuiltinFn::Max;
            else if (name == "norm") fn = BuiltinFn::Norm;
            expect(Tok::LParen, "'('");
            std::vector<ExprPtr> args;
            args.push_back(parse_expr());
            while (peek().type == Tok::Comma) {
                next();
                args.push_back(parse_expr());
            }
            expect(Tok::RParen, "')'");
            if (fn == BuiltinFn::Abs && args.size() != 1) {
                throw ParseError("abs takes exactly one argument", t.pos);
            }
            return Expr::call(fn, std::move(args));
        }
        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            const int idx = std::stoi(name.substr(1));
            if (idx < 1 || idx > dim_) {
                throw ParseError("unbound variable " + name + ": dimension is " +
                                     std::to_string(dim_),
                                 t.pos);
            }
            return Expr::variable(idx);
        }
        throw ParseError("unknown identifier '" + name + "'", t.pos);
    }

    ExprPtr parse_piecewise(std::size_t pos) {
        expect(Tok::LBrace, "'{'");
        std::vector<Branch> branches;
        bool saw_default = false;
        while (true) {
            if (peek().type == Tok::Ident && peek().ident == "else") {
                if (branches.empty()) {
                    throw ParseError("piecewise needs at least one guarded branch before 'else'",
                                     peek().pos);
                }
                next();
                expect(Tok::Colon, "':'");
                ExprPtr body = parse_expr();
                branches.push_back({{}, std::move(body)});
                saw_default = true;
                break;
            }
            std::vector<Comparison> guard;
            guard.push_back(parse_comparison());
            while (peek().type == Tok::AndAnd) {
                next();
                guard.push_back(parse_comparison());
            }
            expect(Tok::Colon, "':'");
            ExprPtr body = parse_expr();
            expect(Tok::Semi, "';'");
            branches.push_back({std::move(guard), std::move(body)});
        }
        if (!saw_default) {
            throw ParseError("piecewise is missing the mandatory 'else' default branch", pos);
        }
        expect(Tok::RBrace, "'}'");
        return Expr::piecewise(std::move(branches));
    }

    Comparison parse_comparison() {
        ExprPtr lhs = parse_expr();
        CmpOp op;
        switch (peek().type) {
            case Tok::Le: op = CmpOp::Le; break;
            case Tok::Lt: op = CmpOp::Lt; break;
            case Tok::Ge: op = CmpOp::Ge; break;
            case Tok::Gt: op = CmpOp::Gt; break;
            case Tok::EqEq: op = CmpOp::Eq; break;
            default:
                throw ParseError("expected a comparison operator", peek().pos);
        }
        next();
        ExprPtr rhs = parse_expr();
        return {std::move(lhs), op, std::move(rhs)};
    }

    std::vector<Token> toks_;
    int dim_;
    std::size_t idx_ = 0;
};

}  // namespace

FuncExpr parse(std::string_view text, int dimension) {
    if (dimension < 1) throw InputError("dimension must be positive");
    Parser p(lex(text), dimension);
    ExprPtr body = p.parse_expr();
    p.expect_end();
    return FuncExpr(dimension, std::move(body));
}

// ---------------------------------------------------------------------------
// Fixture catalog

namespace {

// Parses "name(d)" with 1 <= d <= 64; returns 0 when the shape does not match.
int parametric_dimension(std::string_view name, std::string_view prefix) {
    if (name.size() < prefix.size() + 3) return 0;
    if (name.substr(0, prefix.size()) != prefix) return 0;
    if (name[prefix.size()] != '(' || name.back() != ')') return 0;
    const std::string_view inner = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    int d = 0;
    auto res = std::from_chars(inner.data(), inner.data() + inner.size(), d);
    if (res.ec != std::errc() || res.ptr != inner.data() + inner.size()) return 0;
    if (d < 1 || d > 64) throw ConfigError("builtin dimension out of range [1,64]");
    return d;
}

}  // namespace

std::vector<std::string> builtin_catalog() {
    return {"double_well", "euclid_norm(d)", "exmupper_f", "identity_1d", "sum_squares(d)"};
}

FuncExpr builtin(std::string_view name) {
    if (int d = parametric_dimension(name, "euclid_norm"); d > 0) {
        std::vector<ExprPtr> args;
        for (int i = 1; i <= d; ++i) args.push_back(Expr::variable(i));
        return FuncExpr(d, Expr::call(BuiltinFn::Norm, std::move(args)), std::string(name));
    }
    if (int d = parametric_dimension(name, "sum_squares"); d > 0) {
        ExprPtr acc = Expr::pow(Expr::variable(1), 2);
        for (int i = 2; i <= d; ++i) {
            acc = Expr::binary(Expr::Kind::Add, std::move(acc), Expr::pow(Expr::variable(i), 2));
        }
        return FuncExpr(d, std::move(acc), std::string(name));
    }
    if (name == "exmupper_f") {
        FuncExpr f = parse("piecewise { x1 <= 0 : 1 ; else : x1^2 }", 1);
        return FuncExpr(1, f.body(), "exmupper_f");
    }
    if (name == "identity_1d") {
        return FuncExpr(1, Expr::variable(1), "identity_1d");
    }
    if (name == "double_well") {
        ExprPtr body = Expr::binary(Expr::Kind::Sub, Expr::pow(Expr::variable(1), 4),
                                    Expr::pow(Expr::variable(1), 2));
        return FuncExpr(1, std::move(body), "double_well");
    }
    std::string msg = "unknown builtin '" + std::string(name) + "'; catalog:";
    for (const auto& item : builtin_catalog()) msg += " " + item;
    throw ConfigError(msg);
}

}  // namespace komparo
