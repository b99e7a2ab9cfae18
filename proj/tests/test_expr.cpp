#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "bvp/expr.hpp"
#include "doctest.h"

using bvp::EvalError;
using bvp::Expr;
using bvp::ParseError;
using bvp::ParseErrorKind;

namespace {

double also(const std::string& src, const std::string& var, double at) {
    return Expr::parse(src, var).eval(at);
}

}  // namespace

TEST_CASE("known closed-form values") {
    const double pi = std::numbers::pi;
    CHECK(also("sin(3*pi*x)", "x", 1.0 / 6.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(also("sin(3*pi*x)", "x", 0.5) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(also("max(0,100*s*atan(abs(s)))", "s", 0.0) == 0.0);
    CHECK(also("max(0,100*s*atan(abs(s)))", "s", 1.0) ==
          doctest::Approx(25.0 * pi).epsilon(1e-14));
    CHECK(also("x^2 - 2*x + 1", "x", 1.0) == 0.0);
}

TEST_CASE("precedence is exact") {
    CHECK(also("2+3*4", "x", 0.0) == 14.0);
    CHECK(also("2^3^2", "x", 0.0) == 512.0);
    CHECK(also("-2^2", "x", 0.0) == -4.0);
    CHECK(also("2*3^2", "x", 0.0) == 18.0);
    CHECK(also("(2+3)*4", "x", 0.0) == 20.0);
    CHECK(also("2-3-4", "x", 0.0) == -5.0);
    CHECK(also("16/4/2", "x", 0.0) == 2.0);
    CHECK(also("-x^2", "x", 3.0) == -9.0);
    CHECK(also("(-x)^2", "x", 3.0) == 9.0);
}

TEST_CASE("functions and the pi constant") {
    const double pi = std::numbers::pi;
    CHECK(also("pi", "x", 0.0) == pi);
    CHECK(also("cos(pi)", "x", 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(also("exp(1)", "x", 0.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(also("log(exp(2))", "x", 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(also("sqrt(16)", "x", 0.0) == 4.0);
    CHECK(also("abs(0-7)", "x", 0.0) == 7.0);
    CHECK(also("min(3,max(1,2))", "x", 0.0) == 2.0);
    CHECK(also("atan(1)", "x", 0.0) == doctest::Approx(pi / 4.0).epsilon(1e-15));
}

TEST_CASE("parse errors carry kind and byte offset") {
    auto kind_at = [](const std::string& src, const std::string& var, ParseErrorKind kind,
                      std::size_t offset) {
        try {
            Expr::parse(src, var);
            return false;
        } catch (const ParseError& e) {
            return e.kind() == kind && e.offset() == offset;
        }
    };
    CHECK(kind_at("sin(", "x", ParseErrorKind::syntax, 4));
    CHECK(kind_at("(1+2", "x", ParseErrorKind::syntax, 4));
    CHECK(kind_at("1+*2", "x", ParseErrorKind::syntax, 2));
    CHECK(kind_at("sin(3*pi*y)", "x", ParseErrorKind::unknown_variable, 9));
    CHECK(kind_at("foo(x)", "x", ParseErrorKind::lexical, 0));
    CHECK(kind_at("x $ 2", "x", ParseErrorKind::lexical, 2));
    CHECK_THROWS_AS(Expr::parse("max(1)", "x"), ParseError);
    CHECK_THROWS_AS(Expr::parse("sin(1,2)", "x"), ParseError);
    CHECK_THROWS_AS(Expr::parse("", "x"), ParseError);
    try {
        Expr::parse("sin(3*pi*y)", "x");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("offset 9") != std::string::npos);
    }
}

TEST_CASE("domain errors throw, overflow propagates as infinity") {
    CHECK_THROWS_AS(also("log(0-1)", "x", 0.0), EvalError);
    CHECK_THROWS_AS(also("log(x)", "x", 0.0), EvalError);
    CHECK_THROWS_AS(also("1/x", "x", 0.0), EvalError);
    CHECK_THROWS_AS(also("sqrt(0-2)", "x", 0.0), EvalError);
    CHECK_THROWS_AS(also("x^(0-1)", "x", 0.0), EvalError);
    CHECK_THROWS_AS(also("(0-2)^0.5", "x", 0.0), EvalError);
    CHECK(std::isinf(also("exp(x)", "x", 1000.0)));
    CHECK(std::isinf(also("exp(x)+1", "x", 1000.0)));
    CHECK(also("(0-2)^3", "x", 0.0) == -8.0);
}

TEST_CASE("round trip preserves evaluation") {
    const std::vector<std::string> corpus = {
        "sin(3*pi*x)",
        "max(0,100*x*atan(abs(x)))",
        "x^2 - 2*x + 1",
        "-x^2 + x*(1-x)*(x-0.4)",
        "2^x^2",
        "min(abs(x),max(x,cos(x)))",
        "sqrt(abs(x)+1) + log(1+abs(x)) - exp(-abs(x))",
        "x*min(x,1000)",
        "(x+1)*(x-1)/(x^2+1)",
        "-(-x)",
        "pi*x - x/pi",
    };
    std::mt19937 rng(20240517);
    std::uniform_real_distribution<double> pick(-3.0, 3.0);
    for (const std::string& src : corpus) {
        Expr e = Expr::parse(src, "x");
        Expr back = Expr::parse(e.to_string(), "x");
        CAPTURE(src);
        CAPTURE(e.to_string());
        for (int i = 0; i < 100; ++i) {
            double x = pick(rng);
            double v1 = e.eval(x), v2 = back.eval(x);
            CHECK(std::fabs(v1 - v2) <= 1e-15 * std::fmax(1.0, std::fabs(v1)));
        }
    }
}

TEST_CASE("round trip keeps exact precedence") {
    for (const char* src : {"2+3*4", "2^3^2", "-2^2"}) {
        Expr e = Expr::parse(src, "x");
        CHECK(Expr::parse(e.to_string(), "x").eval(0.0) == e.eval(0.0));
    }
}

TEST_CASE("evaluation is pure") {
    Expr e = Expr::parse("max(0,100*s*atan(abs(s)))", "s");
    for (double s : {0.0, 1e-8, 0.37, 2.0, 1e6}) {
        double v1 = e.eval(s), v2 = e.eval(s);
        CHECK(std::memcmp(&v1, &v2, sizeof v1) == 0);
    }
}

TEST_CASE("metadata accessors") {
    Expr e = Expr::parse("sin(3*pi*x)", "x");
    CHECK(e.variable() == "x");
    CHECK(e.source() == "sin(3*pi*x)");
    CHECK(e(1.0 / 6.0) == e.eval(1.0 / 6.0));
}
