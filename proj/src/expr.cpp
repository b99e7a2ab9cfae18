#include "bvp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>

namespace bvp {

namespace {

std::string kind_label(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::lexical: return "lexical error";
        case ParseErrorKind::syntax: return "syntax error";
        case ParseErrorKind::unknown_variable: return "unknown variable";
    }
    return "error";
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(kind_label(kind) + " at offset " + std::to_string(offset) + ": " + what),
      kind_(kind),
      offset_(offset) {}

namespace {

enum class Tok : std::uint8_t {
    number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end,
};

struct Token {
    Tok kind;
    std::size_t offset;
    double number = 0.0;
    std::string_view text;
};

}  // namespace

class ExprParser {
public:
    ExprParser(std::string_view src, std::string_view variable)
        : src_(src), variable_(variable) {
        next_token();
    }

    Expr run() {
        Expr e;
        e.variable_ = std::string(variable_);
        e.source_ = std::string(src_);
        nodes_ = &e.nodes_;
        std::int32_t root = parse_expr(0);
        if (tok_.kind != Tok::end)
            throw ParseError(ParseErrorKind::syntax, tok_.offset, "unexpected '" + describe(tok_) + "'");
        (void)root;   // root is nodes_.back() by construction
        return e;
    }

private:
    // Binding powers; ^ is right-associative and binds above unary minus.
    static constexpr int bp_add = 10;
    static constexpr int bp_mul = 20;
    static constexpr int bp_neg = 30;
    static constexpr int bp_pow = 40;

    std::string_view src_;
    std::string_view variable_;
    std::size_t pos_ = 0;
    Token tok_;
    std::vector<Expr::Node>* nodes_ = nullptr;

    static std::string describe(const Token& t) {
        if (t.kind == Tok::end) return "end of input";
        return std::string(t.text);
    }

    [[noreturn]] void fail_syntax(const std::string& what) {
        throw ParseError(ParseErrorKind::syntax, tok_.offset, what);
    }

    void next_token() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::end, pos_, 0.0, {}};
            return;
        }
        char c = src_[pos_];
        auto single = [&](Tok k) {
            tok_ = {k, pos_, 0.0, src_.substr(pos_, 1)};
            ++pos_;
        };
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            const char* begin = src_.data() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin)
                throw ParseError(ParseErrorKind::lexical, pos_, "malformed number");
            std::size_t len = static_cast<std::size_t>(end - begin);
            tok_ = {Tok::number, pos_, v, src_.substr(pos_, len)};
            pos_ += len;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_ = {Tok::ident, start, 0.0, src_.substr(start, pos_ - start)};
            return;
        }
        switch (c) {
            case '+': single(Tok::plus); return;
            case '-': single(Tok::minus); return;
            case '*': single(Tok::star); return;
            case '/': single(Tok::slash); return;
            case '^': single(Tok::caret); return;
            case '(': single(Tok::lparen); return;
            case ')': single(Tok::rparen); return;
            case ',': single(Tok::comma); return;
        }
        throw ParseError(ParseErrorKind::lexical, pos_,
                         std::string("unexpected character '") + c + "'");
    }

    std::int32_t push(Expr::Node n) {
        nodes_->push_back(n);
        return static_cast<std::int32_t>(nodes_->size() - 1);
    }

    std::int32_t parse_expr(int min_bp) {
        std::int32_t lhs = parse_prefix();
        for (;;) {
            Expr::Kind op;
            int bp;
            bool right_assoc = false;
            switch (tok_.kind) {
                case Tok::plus: op = Expr::Kind::add; bp = bp_add; break;
                case Tok::minus: op = Expr::Kind::sub; bp = bp_add; break;
                case Tok::star: op = Expr::Kind::mul; bp = bp_mul; break;
                case Tok::slash: op = Expr::Kind::div; bp = bp_mul; break;
                case Tok::caret: op = Expr::Kind::pow; bp = bp_pow; right_assoc = true; break;
                default: return lhs;
            }
            if (bp < min_bp) return lhs;
            next_token();
            std::int32_t rhs = parse_expr(right_assoc ? bp : bp + 1);
            lhs = push({op, Expr::Func::sin, 0.0, lhs, rhs});
        }
    }

    std::int32_t parse_prefix() {
        switch (tok_.kind) {
            case Tok::number: {
                double v = tok_.number;
                next_token();
                return push({Expr::Kind::number, Expr::Func::sin, v, -1, -1});
            }
            case Tok::minus: {
                next_token();
                std::int32_t operand = parse_expr(bp_neg);
                return push({Expr::Kind::negate, Expr::Func::sin, 0.0, operand, -1});
            }
            case Tok::lparen: {
                next_token();
                std::int32_t inner = parse_expr(0);
                if (tok_.kind != Tok::rparen) fail_syntax("expected ')'");
                next_token();
                return inner;
            }
            case Tok::ident:
                return parse_ident();
            default:
                fail_syntax("expected expression, got '" + describe(tok_) + "'");
        }
    }

    std::int32_t parse_ident() {
        static const std::map<std::string_view, std::pair<Expr::Func, int>> functions = {
            {"sin", {Expr::Func::sin, 1}},  {"cos", {Expr::Func::cos, 1}},
            {"exp", {Expr::Func::exp, 1}},  {"log", {Expr::Func::log, 1}},
            {"atan", {Expr::Func::atan, 1}}, {"abs", {Expr::Func::abs, 1}},
            {"sqrt", {Expr::Func::sqrt, 1}}, {"max", {Expr::Func::max, 2}},
            {"min", {Expr::Func::min, 2}},
        };
        Token name = tok_;
        next_token();
        if (tok_.kind == Tok::lparen) {
            auto it = functions.find(name.text);
            if (it == functions.end())
                throw ParseError(ParseErrorKind::lexical, name.offset,
                                 "unknown function '" + std::string(name.text) + "'");
            next_token();
            std::int32_t a = parse_expr(0);
            std::int32_t b = -1;
            if (it->second.second == 2) {
                if (tok_.kind != Tok::comma)
                    fail_syntax("'" + std::string(name.text) + "' takes two arguments");
                next_token();
                b = parse_expr(0);
            }
            if (tok_.kind != Tok::rparen) fail_syntax("expected ')'");
            next_token();
            Expr::Kind k = it->second.second == 2 ? Expr::Kind::call2 : Expr::Kind::call1;
            return push({k, it->second.first, 0.0, a, b});
        }
        if (name.text == "pi")
            return push({Expr::Kind::constant_pi, Expr::Func::sin, 0.0, -1, -1});
        if (name.text == variable_)
            return push({Expr::Kind::variable, Expr::Func::sin, 0.0, -1, -1});
        throw ParseError(ParseErrorKind::unknown_variable, name.offset,
                         "'" + std::string(name.text) + "' (expected '" + std::string(variable_) + "')");
    }
};

Expr Expr::parse(std::string_view source, std::string_view variable) {
    return ExprParser(source, variable).run();
}

double Expr::eval(double value) const {
    return eval_node(static_cast<std::int32_t>(nodes_.size() - 1), value);
}

double Expr::eval_node(std::int32_t i, double x) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.kind) {
        case Kind::number: return n.number;
        case Kind::variable: return x;
        case Kind::constant_pi: return std::numbers::pi;
        case Kind::negate: return -eval_node(n.a, x);
        case Kind::add: return eval_node(n.a, x) + eval_node(n.b, x);
        case Kind::sub: return eval_node(n.a, x) - eval_node(n.b, x);
        case Kind::mul: return eval_node(n.a, x) * eval_node(n.b, x);
        case Kind::div: {
            double num = eval_node(n.a, x), den = eval_node(n.b, x);
            if (den == 0.0) throw EvalError("division by zero");
            return num / den;
        }
        case Kind::pow: {
            double base = eval_node(n.a, x), expo = eval_node(n.b, x);
            if (base == 0.0 && expo < 0.0) throw EvalError("zero raised to a negative power");
            double r = std::pow(base, expo);
            if (std::isnan(r) && !std::isnan(base) && !std::isnan(expo))
                throw EvalError("fractional power of a negative base");
            return r;
        }
        case Kind::call1: {
            double a = eval_node(n.a, x);
            switch (n.func) {
                case Func::sin: return std::sin(a);
                case Func::cos: return std::cos(a);
                case Func::exp: return std::exp(a);
                case Func::log:
                    if (a <= 0.0) throw EvalError("log of a non-positive value");
                    return std::log(a);
                case Func::atan: return std::atan(a);
                case Func::abs: return std::fabs(a);
                case Func::sqrt:
                    if (a < 0.0) throw EvalError("sqrt of a negative value");
                    return std::sqrt(a);
                default: break;
            }
            break;
        }
        case Kind::call2: {
            double a = eval_node(n.a, x), b = eval_node(n.b, x);
            switch (n.func) {
                case Func::max: return std::fmax(a, b);
                case Func::min: return std::fmin(a, b);
                default: break;
            }
            break;
        }
    }
    throw EvalError("malformed expression node");
}

namespace {

const char* func_name(int f) {
    static const char* names[] = {"sin", "cos", "exp", "log", "atan", "abs", "sqrt", "max", "min"};
    return names[f];
}

}  // namespace

std::string Expr::to_string() const {
    std::string out;
    print_node(static_cast<std::int32_t>(nodes_.size() - 1), 0, false, out);
    return out;
}

void Expr::print_node(std::int32_t i, int parent_prec, bool rhs_of_pow, std::string& out) const {
    // Precedence levels mirror the parser: 10 add, 20 mul, 30 negate, 40 pow.
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    auto child = [&](std::int32_t c, int prec, bool pow_rhs) { print_node(c, prec, pow_rhs, out); };
    auto wrap = [&](int prec, auto&& body) {
        bool parens = prec < parent_prec || (prec == 40 && parent_prec == 40 && !rhs_of_pow);
        if (parens) out += '(';
        body();
        if (parens) out += ')';
    };
    switch (n.kind) {
        case Kind::number: {
            double v = n.number;
            if (v < 0)
                wrap(30, [&] { out += format17(v); });
            else
                out += format17(v);
            return;
        }
        case Kind::variable: out += variable_; return;
        case Kind::constant_pi: out += "pi"; return;
        case Kind::negate:
            wrap(30, [&] { out += '-'; child(n.a, 30, false); });
            return;
        case Kind::add:
            wrap(10, [&] { child(n.a, 10, false); out += '+'; child(n.b, 11, false); });
            return;
        case Kind::sub:
            wrap(10, [&] { child(n.a, 10, false); out += '-'; child(n.b, 11, false); });
            return;
        case Kind::mul:
            wrap(20, [&] { child(n.a, 20, false); out += '*'; child(n.b, 21, false); });
            return;
        case Kind::div:
            wrap(20, [&] { child(n.a, 20, false); out += '/'; child(n.b, 21, false); });
            return;
        case Kind::pow:
            wrap(40, [&] { child(n.a, 41, false); out += '^'; child(n.b, 40, true); });
            return;
        case Kind::call1:
            out += func_name(static_cast<int>(n.func));
            out += '(';
            child(n.a, 0, false);
            out += ')';
            return;
        case Kind::call2:
            out += func_name(static_cast<int>(n.func));
            out += '(';
            child(n.a, 0, false);
            out += ',';
            child(n.b, 0, false);
            out += ')';
            return;
    }
}

}  // namespace bvp
