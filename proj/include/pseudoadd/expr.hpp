#pragma once

// Arithmetic expressions in one real variable.
//
// Grammar (lowest to highest precedence):
//   expr    := mul (('+'|'-') mul)*
//   mul     := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          -- right associative
//   primary := NUMBER | IDENT | IDENT '(' expr (',' expr)? ')' | '(' expr ')'
//
// '^' binds tighter than unary minus, so "-2^2" is -(2^2). There is no
// implicit multiplication: "2q" is a syntax error.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pseudoadd {

/// Syntax or lookup failure while parsing; offset is 0-based into the input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + what),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation left the function's domain (log of non-positive value,
/// division by zero, fractional power of a negative base).
class EvalError : public std::runtime_error {
public:
    EvalError(std::string subexpr, double point, const std::string& what)
        : std::runtime_error(what + " in '" + subexpr + "' at x=" + std::to_string(point)),
          subexpr_(std::move(subexpr)),
          point_(point) {}

    const std::string& subexpr() const noexcept { return subexpr_; }
    double point() const noexcept { return point_; }

private:
    std::string subexpr_;
    double point_;
};

namespace detail {

enum class NodeKind { number, variable, constant, negate, add, subtract, multiply, divide, power, call };

enum class Func { ln, log2, exp, abs, pow };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind{};
    double number = 0.0;     // number literal or named-constant value
    std::string name;        // variable, constant, or function name
    Func func{};
    NodePtr lhs, rhs;        // unary operand lives in lhs
    std::size_t begin = 0, end = 0;  // source span, diagnostics only
};

template <class F>
F checked_pow(F base, F exponent, const ExprNode& node, const std::string& source, double point) {
    auto text = [&] { return source.substr(node.begin, node.end - node.begin); };
    if (base > F(0))
        return std::pow(base, exponent);
    if (base == F(0)) {
        if (exponent > F(0)) return F(0);
        if (exponent == F(0)) return F(1);
        throw EvalError(text(), point, "zero raised to a negative power");
    }
    // negative base: integer exponents only
    if (std::isfinite(static_cast<double>(exponent)) && std::nearbyint(exponent) == exponent)
        return std::pow(base, exponent);
    throw EvalError(text(), point, "negative base with non-integer exponent");
}

template <class F>
F eval_node(const ExprNode& n, F x, const std::string& source) {
    auto text = [&] { return source.substr(n.begin, n.end - n.begin); };
    switch (n.kind) {
        case NodeKind::number:
        case NodeKind::constant: return static_cast<F>(n.number);
        case NodeKind::variable: return x;
        case NodeKind::negate: return -eval_node(*n.lhs, x, source);
        case NodeKind::add: return eval_node(*n.lhs, x, source) + eval_node(*n.rhs, x, source);
        case NodeKind::subtract: return eval_node(*n.lhs, x, source) - eval_node(*n.rhs, x, source);
        case NodeKind::multiply: return eval_node(*n.lhs, x, source) * eval_node(*n.rhs, x, source);
        case NodeKind::divide: {
            F num = eval_node(*n.lhs, x, source);
            F den = eval_node(*n.rhs, x, source);
            if (den == F(0)) throw EvalError(text(), static_cast<double>(x), "division by zero");
            return num / den;
        }
        case NodeKind::power:
            return checked_pow(eval_node(*n.lhs, x, source), eval_node(*n.rhs, x, source), n, source,
                               static_cast<double>(x));
        case NodeKind::call: {
            F a = eval_node(*n.lhs, x, source);
            switch (n.func) {
                case Func::ln:
                    if (!(a > F(0))) throw EvalError(text(), static_cast<double>(x), "log of non-positive value");
                    return std::log(a);
                case Func::log2:
                    if (!(a > F(0))) throw EvalError(text(), static_cast<double>(x), "log of non-positive value");
                    return std::log2(a);
                case Func::exp: return std::exp(a);
                case Func::abs: return std::fabs(a);
                case Func::pow:
                    return checked_pow(a, eval_node(*n.rhs, x, source), n, source, static_cast<double>(x));
            }
            break;
        }
    }
    throw std::logic_error("corrupt expression node");
}

}  // namespace detail

/// Immutable parsed expression in one free variable. Cheap to copy and safe
/// to evaluate concurrently.
class Expr {
public:
    static Expr parse(std::string_view text, std::string_view variable = "q");

    double eval(double x) const { return detail::eval_node(*root_, x, *source_); }

    /// Same tree walked in extended precision; used where the caller has to
    /// fight cancellation (phi near its root at q = 1).
    long double eval_ld(long double x) const { return detail::eval_node(*root_, x, *source_); }

    /// Canonical text: parsing it again yields a structurally identical tree.
    std::string print() const;

    const std::string& source() const noexcept { return *source_; }
    const std::string& variable() const noexcept { return *variable_; }

    friend bool structurally_equal(const Expr& a, const Expr& b);

private:
    Expr(detail::NodePtr root, std::shared_ptr<const std::string> source,
         std::shared_ptr<const std::string> variable)
        : root_(std::move(root)), source_(std::move(source)), variable_(std::move(variable)) {}

    detail::NodePtr root_;
    std::shared_ptr<const std::string> source_;
    std::shared_ptr<const std::string> variable_;
};

namespace detail {

struct NamedConstant {
    std::string_view name;
    double value;
};

inline constexpr NamedConstant kConstants[] = {
    {"pi", std::numbers::pi},
    {"e", std::numbers::e},
    {"ln2", std::numbers::ln2},
};

struct NamedFunc {
    std::string_view name;
    Func func;
    int arity;
};

inline constexpr NamedFunc kFunctions[] = {
    {"ln", Func::ln, 1}, {"log2", Func::log2, 1}, {"exp", Func::exp, 1},
    {"abs", Func::abs, 1}, {"pow", Func::pow, 2},
};

class Parser {
public:
    Parser(std::string_view text, std::string_view variable) : text_(text), variable_(variable) {}

    std::shared_ptr<ExprNode> run() {
        if (text_.empty()) throw ParseError(0, "expected operand, got empty input");
        auto node = parse_add();
        skip_space();
        if (pos_ != text_.size()) throw ParseError(pos_, "expected operator or end of input");
        return node;
    }

private:
    using Node = std::shared_ptr<ExprNode>;

    std::string_view text_;
    std::string_view variable_;
    std::size_t pos_ = 0;

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Node parse_add() {
        auto lhs = parse_mul();
        for (;;) {
            if (eat('+'))
                lhs = binary(NodeKind::add, std::move(lhs), parse_mul());
            else if (eat('-'))
                lhs = binary(NodeKind::subtract, std::move(lhs), parse_mul());
            else
                return lhs;
        }
    }

    Node parse_mul() {
        auto lhs = parse_unary();
        for (;;) {
            if (eat('*'))
                lhs = binary(NodeKind::multiply, std::move(lhs), parse_unary());
            else if (eat('/'))
                lhs = binary(NodeKind::divide, std::move(lhs), parse_unary());
            else
                return lhs;
        }
    }

    Node parse_unary() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            std::size_t start = pos_++;
            auto operand = parse_unary();
            auto node = std::make_shared<ExprNode>();
            node->kind = NodeKind::negate;
            node->begin = start;
            node->end = operand->end;
            node->lhs = std::move(operand);
            return node;
        }
        return parse_power();
    }

    Node parse_power() {
        auto base = parse_primary();
        if (eat('^')) {
            auto exponent = parse_unary();  // right associative, may carry its own sign
            return binary(NodeKind::power, std::move(base), std::move(exponent));
        }
        return base;
    }

    Node parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(pos_, "expected operand");
        char c = text_[pos_];
        if (c == '(') {
            std::size_t open = pos_++;
            auto inner = parse_add();
            if (!eat(')')) throw ParseError(pos_, "expected ')'");
            inner->begin = open;
            inner->end = pos_;
            return inner;
        }
        if (c >= '0' && c <= '9') return parse_number();
        if (is_ident_start(c)) return parse_identifier();
        throw ParseError(pos_, "expected operand");
    }

    Node parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9')
                throw ParseError(pos_, "expected digit after decimal point");
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9')
                throw ParseError(mark + 1, "expected digit in exponent");
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec == std::errc::result_out_of_range) throw ParseError(start, "number out of range");
        if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError(start, "malformed number");
        auto node = std::make_shared<ExprNode>();
        node->kind = NodeKind::number;
        node->number = value;
        node->begin = start;
        node->end = pos_;
        return node;
    }

    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_ident_char(char c) {
        return is_ident_start(c) || (c >= '0' && c <= '9');
    }

    Node parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);

        if (peek() == '(') {
            for (const auto& f : kFunctions) {
                if (name == f.name) return parse_call(f, start);
            }
            throw ParseError(start, "unknown function '" + std::string(name) + "'");
        }
        auto node = std::make_shared<ExprNode>();
        node->begin = start;
        node->end = start + name.size();
        node->name = std::string(name);
        if (name == variable_) {
            node->kind = NodeKind::variable;
            return node;
        }
        for (const auto& k : kConstants) {
            if (name == k.name) {
                node->kind = NodeKind::constant;
                node->number = k.value;
                return node;
            }
        }
        throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
    }

    Node parse_call(const NamedFunc& f, std::size_t start) {
        eat('(');
        auto node = std::make_shared<ExprNode>();
        node->kind = NodeKind::call;
        node->func = f.func;
        node->name = std::string(f.name);
        node->begin = start;
        node->lhs = parse_add();
        if (f.arity == 2) {
            if (!eat(',')) throw ParseError(pos_, "expected ','");
            node->rhs = parse_add();
        }
        if (!eat(')')) throw ParseError(pos_, f.arity == 2 ? "expected ')'" : "expected ')' or ','");
        node->end = pos_;
        return node;
    }

    static Node binary(NodeKind kind, Node lhs, Node rhs) {
        auto node = std::make_shared<ExprNode>();
        node->kind = kind;
        node->begin = lhs->begin;
        node->end = rhs->end;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }
};

// Precedence levels for the printer; parens are inserted exactly where the
// parse would otherwise reassociate.
inline int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::add:
        case NodeKind::subtract: return 1;
        case NodeKind::multiply:
        case NodeKind::divide: return 2;
        case NodeKind::negate: return 3;
        case NodeKind::power: return 4;
        default: return 5;
    }
}

inline std::string print_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

inline void print_node(const ExprNode& n, std::string& out) {
    auto child = [&](const ExprNode& c, int min_prec) {
        if (precedence(c.kind) < min_prec) {
            out += '(';
            print_node(c, out);
            out += ')';
        } else {
            print_node(c, out);
        }
    };
    int prec = precedence(n.kind);
    switch (n.kind) {
        case NodeKind::number: out += print_number(n.number); break;
        case NodeKind::variable:
        case NodeKind::constant: out += n.name; break;
        case NodeKind::negate:
            out += '-';
            child(*n.lhs, prec + 1);
            break;
        case NodeKind::add:
        case NodeKind::subtract:
        case NodeKind::multiply:
        case NodeKind::divide:
            child(*n.lhs, prec);
            out += n.kind == NodeKind::add      ? " + "
                   : n.kind == NodeKind::subtract ? " - "
                   : n.kind == NodeKind::multiply ? " * "
                                                  : " / ";
            child(*n.rhs, prec + 1);  // left associative: right child re-parenthesized on ties
            break;
        case NodeKind::power:
            child(*n.lhs, prec + 1);  // right associative
            out += '^';
            child(*n.rhs, 3);         // exponent may be a sign chain or another power
            break;
        case NodeKind::call:
            out += n.name;
            out += '(';
            print_node(*n.lhs, out);
            if (n.rhs) {
                out += ", ";
                print_node(*n.rhs, out);
            }
            out += ')';
            break;
    }
}

inline bool nodes_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::number: return a.number == b.number;
        case NodeKind::variable: return true;
        case NodeKind::constant: return a.name == b.name;
        case NodeKind::negate: return nodes_equal(*a.lhs, *b.lhs);
        case NodeKind::call:
            if (a.func != b.func || !nodes_equal(*a.lhs, *b.lhs)) return false;
            if (!a.rhs != !b.rhs) return false;
            return !a.rhs || nodes_equal(*a.rhs, *b.rhs);
        default: return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    }
}

}  // namespace detail

inline Expr Expr::parse(std::string_view text, std::string_view variable) {
    auto root = detail::Parser(text, variable).run();
    return Expr(std::move(root), std::make_shared<const std::string>(text),
                std::make_shared<const std::string>(variable));
}

inline std::string Expr::print() const {
    std::string out;
    detail::print_node(*root_, out);
    return out;
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
    return detail::nodes_equal(*a.root_, *b.root_);
}

}  // namespace pseudoadd
