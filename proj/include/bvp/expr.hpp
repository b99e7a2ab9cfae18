#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bvp {

enum class ParseErrorKind { lexical, syntax, unknown_variable };

// Parse failure; offset() is the byte offset into the source string.
class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::size_t offset, const std::string& what);
    ParseErrorKind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

private:
    ParseErrorKind kind_;
    std::size_t offset_;
};

// Evaluation hit a domain error (log of a non-positive value, division by
// zero, fractional power of a negative base).  Overflow is not an error:
// eval() returns an infinity and the caller decides.
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Immutable arithmetic expression in one named variable.
//
// Grammar: + - * / ^ with ^ binding tightest and right-associative, unary
// minus between ^ and */, the constant pi, and the functions sin, cos, exp,
// log, atan, abs, sqrt (unary) and max, min (binary).
class Expr {
public:
    static Expr parse(std::string_view source, std::string_view variable);

    double eval(double value) const;
    double operator()(double value) const { return eval(value); }

    const std::string& variable() const { return variable_; }
    const std::string& source() const { return source_; }

    // Round-trippable rendering: parse(to_string()) evaluates identically.
    std::string to_string() const;

private:
    enum class Kind : std::uint8_t {
        number, variable, constant_pi,
        negate, add, sub, mul, div, pow,
        call1, call2,
    };
    enum class Func : std::uint8_t { sin, cos, exp, log, atan, abs, sqrt, max, min };

    struct Node {
        Kind kind;
        Func func;
        double number;
        std::int32_t a, b;    // child indices, -1 when unused
    };

    Expr() = default;

    double eval_node(std::int32_t i, double value) const;
    void print_node(std::int32_t i, int parent_prec, bool rhs_of_pow, std::string& out) const;

    std::vector<Node> nodes_;   // root is nodes_.back()
    std::string variable_;
    std::string source_;

    friend class ExprParser;
};

}  // namespace bvp
