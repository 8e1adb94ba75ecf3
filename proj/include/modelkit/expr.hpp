#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "modelkit/errors.hpp"
#include "modelkit/text.hpp"

namespace modelkit {

// A pure arithmetic expression of one variable (x or t), used as the body of
// rule functions and as the operand of the numeric calculus operators.
//
// Grammar (documented in the README):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          -- right-associative, binds above neg
//   atom   := number | 'x' | 't' | fn '(' expr ')' | '(' expr ')'
//   fn     := 'sin' | 'cos' | 'exp' | 'ln' | 'sqrt' | 'abs'
//   number := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]

enum class ExprOp : char {
    constant,
    variable,
    negate,
    add,
    sub,
    mul,
    div,
    pow,
    call,
};

enum class BuiltinFn : char { sin, cos, exp, ln, sqrt, abs };

inline const char* builtin_fn_name(BuiltinFn f) {
    switch (f) {
        case BuiltinFn::sin: return "sin";
        case BuiltinFn::cos: return "cos";
        case BuiltinFn::exp: return "exp";
        case BuiltinFn::ln: return "ln";
        case BuiltinFn::sqrt: return "sqrt";
        case BuiltinFn::abs: return "abs";
    }
    return "?";
}

struct ExprNode;

/// Immutable expression handle. Copies share the underlying tree.
class Expr {
public:
    Expr() = default;

    static Expr constant(double v);
    static Expr variable(char name);
    static Expr negate(Expr a);
    static Expr binary(char op, Expr a, Expr b);
    static Expr call(BuiltinFn fn, Expr a);

    bool empty() const noexcept { return node_ == nullptr; }
    const ExprNode& node() const { return *node_; }

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    ExprOp op = ExprOp::constant;
    double number = 0.0;          // constant
    char var = 'x';               // variable
    char binop = '+';             // add/sub/mul/div/pow
    BuiltinFn fn = BuiltinFn::sin;  // call
    Expr a, b;                    // children: a for negate/call, a+b for binary
};

inline Expr Expr::constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::constant;
    n->number = v;
    return Expr(std::move(n));
}

inline Expr Expr::variable(char name) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::variable;
    n->var = name;
    return Expr(std::move(n));
}

inline Expr Expr::negate(Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::negate;
    n->a = std::move(a);
    return Expr(std::move(n));
}

inline Expr Expr::binary(char op, Expr a, Expr b) {
    auto n = std::make_shared<ExprNode>();
    switch (op) {
        case '+': n->op = ExprOp::add; break;
        case '-': n->op = ExprOp::sub; break;
        case '*': n->op = ExprOp::mul; break;
        case '/': n->op = ExprOp::div; break;
        case '^': n->op = ExprOp::pow; break;
        default: fail(Errc::syntax, std::string("unknown operator '") + op + "'");
    }
    n->binop = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::move(n));
}

inline Expr Expr::call(BuiltinFn fn, Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::call;
    n->fn = fn;
    n->a = std::move(a);
    return Expr(std::move(n));
}

namespace detail {

class ExprParser {
public:
    explicit ExprParser(const std::string& text) : text_(text) {}

    Expr parse() {
        skip_ws();
        if (pos_ >= text_.size()) fail(Errc::syntax, "empty expression", 0);
        Expr e = parse_add();
        skip_ws();
        if (pos_ < text_.size())
            fail(Errc::syntax, trailing_message(), pos_);
        return e;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    std::string trailing_message() const {
        return std::string("unexpected '") + text_[pos_] + "' at offset " + std::to_string(pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr parse_add() {
        Expr lhs = parse_mul();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            lhs = Expr::binary(c, std::move(lhs), parse_mul());
        }
    }

    Expr parse_mul() {
        Expr lhs = parse_unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            lhs = Expr::binary(c, std::move(lhs), parse_unary());
        }
    }

    Expr parse_unary() {
        if (peek() == '-') {
            ++pos_;
            return Expr::negate(parse_unary());
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (peek() == '^') {
            ++pos_;
            return Expr::binary('^', std::move(base), parse_unary());
        }
        return base;
    }

    Expr parse_atom() {
        char c = peek();
        std::size_t start = pos_;
        if (c == '(') {
            ++pos_;
            Expr inner = parse_add();
            if (peek() != ')') fail(Errc::syntax, "expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
                name += text_[pos_++];
            if (name == "x" || name == "t") return Expr::variable(name[0]);
            std::optional<BuiltinFn> fn = lookup_builtin(name);
            if (!fn) fail(Errc::syntax, "unknown name '" + name + "'", start);
            if (peek() != '(') fail(Errc::syntax, "expected '(' after '" + name + "'", pos_);
            ++pos_;
            Expr arg = parse_add();
            if (peek() != ')') fail(Errc::syntax, "expected ')'", pos_);
            ++pos_;
            return Expr::call(*fn, std::move(arg));
        }
        if (c == '\0') fail(Errc::syntax, "unexpected end of expression", pos_);
        fail(Errc::syntax, trailing_message(), pos_);
    }

    static std::optional<BuiltinFn> lookup_builtin(const std::string& name) {
        if (name == "sin") return BuiltinFn::sin;
        if (name == "cos") return BuiltinFn::cos;
        if (name == "exp") return BuiltinFn::exp;
        if (name == "ln") return BuiltinFn::ln;
        if (name == "sqrt") return BuiltinFn::sqrt;
        if (name == "abs") return BuiltinFn::abs;
        return std::nullopt;
    }

    Expr parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                pos_ = mark;  // "2e" is "2" followed by a stray name, caught later
            } else {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        double v = std::strtod(text_.c_str() + start, nullptr);
        return Expr::constant(v);
    }
};

}  // namespace detail

inline Expr parse_expr(const std::string& text) {
    return detail::ExprParser(text).parse();
}

/// Variable bindings for evaluation. Unset slots make references to that
/// variable an UnboundVariable error.
struct ExprEnv {
    std::optional<double> x;
    std::optional<double> t;

    static ExprEnv with_x(double v) { return ExprEnv{v, std::nullopt}; }
    static ExprEnv with_t(double v) { return ExprEnv{std::nullopt, v}; }
};

inline double eval_expr(const Expr& e, const ExprEnv& env) {
    const ExprNode& n = e.node();
    switch (n.op) {
        case ExprOp::constant:
            return n.number;
        case ExprOp::variable: {
            const std::optional<double>& slot = n.var == 'x' ? env.x : env.t;
            if (!slot) fail(Errc::unbound_variable, std::string("variable '") + n.var + "' is not bound");
            return *slot;
        }
        case ExprOp::negate:
            return -eval_expr(n.a, env);
        case ExprOp::add:
            return eval_expr(n.a, env) + eval_expr(n.b, env);
        case ExprOp::sub:
            return eval_expr(n.a, env) - eval_expr(n.b, env);
        case ExprOp::mul:
            return eval_expr(n.a, env) * eval_expr(n.b, env);
        case ExprOp::div: {
            double num = eval_expr(n.a, env);
            double den = eval_expr(n.b, env);
            if (den == 0.0) fail(Errc::math_domain, "division by zero");
            return num / den;
        }
        case ExprOp::pow: {
            double base = eval_expr(n.a, env);
            double exp = eval_expr(n.b, env);
            if (base < 0.0 && exp != std::floor(exp))
                fail(Errc::math_domain, "negative base with non-integer exponent");
            if (base == 0.0 && exp < 0.0) fail(Errc::math_domain, "zero base with negative exponent");
            return std::pow(base, exp);
        }
        case ExprOp::call: {
            double arg = eval_expr(n.a, env);
            switch (n.fn) {
                case BuiltinFn::sin: return std::sin(arg);
                case BuiltinFn::cos: return std::cos(arg);
                case BuiltinFn::exp: return std::exp(arg);
                case BuiltinFn::ln:
                    if (arg <= 0.0) fail(Errc::math_domain, "ln of non-positive value");
                    return std::log(arg);
                case BuiltinFn::sqrt:
                    if (arg < 0.0) fail(Errc::math_domain, "sqrt of negative value");
                    return std::sqrt(arg);
                case BuiltinFn::abs: return std::fabs(arg);
            }
            fail(Errc::math_domain, "unknown builtin");
        }
    }
    fail(Errc::math_domain, "malformed expression node");
}

namespace detail {

// Printing precedence levels; parenthesization compares these. A negative
// constant prints with a leading '-', so it carries unary precedence.
inline int expr_precedence(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.op) {
        case ExprOp::add:
        case ExprOp::sub: return 1;
        case ExprOp::mul:
        case ExprOp::div: return 2;
        case ExprOp::negate: return 3;
        case ExprOp::pow: return 4;
        case ExprOp::constant: return n.number < 0 ? 3 : 5;
        case ExprOp::variable:
        case ExprOp::call: return 5;
    }
    return 5;
}

inline void print_to(const Expr& e, std::string& out) {
    const ExprNode& n = e.node();
    auto child = [&out](const Expr& c, bool parens) {
        if (parens) out += '(';
        print_to(c, out);
        if (parens) out += ')';
    };
    switch (n.op) {
        case ExprOp::constant:
            out += number_text(n.number);
            return;
        case ExprOp::variable:
            out += n.var;
            return;
        case ExprOp::negate:
            out += '-';
            child(n.a, expr_precedence(n.a) < 3);
            return;
        case ExprOp::call:
            out += builtin_fn_name(n.fn);
            out += '(';
            print_to(n.a, out);
            out += ')';
            return;
        case ExprOp::pow:
            // Left operand of '^' must be an atom; exponent may be unary.
            child(n.a, expr_precedence(n.a) < 5);
            out += '^';
            child(n.b, expr_precedence(n.b) < 3);
            return;
        default: {
            // Left-associative binary operator. The right operand keeps its
            // parentheses at equal precedence so evaluation order survives
            // the round trip.
            int prec = expr_precedence(e);
            child(n.a, expr_precedence(n.a) < prec);
            out += n.binop;
            child(n.b, expr_precedence(n.b) <= prec);
            return;
        }
    }
}

}  // namespace detail

inline std::string print_expr(const Expr& e) {
    std::string out;
    detail::print_to(e, out);
    return out;
}

}  // namespace modelkit
