#include <pseudoadd/expr.hpp>

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <random>
#include <string>
#include <vector>

using pseudoadd::EvalError;
using pseudoadd::Expr;
using pseudoadd::ParseError;

TEST_CASE("basic arithmetic and the variable") {
    CHECK(Expr::parse("1 - q").eval(1.0) == 0.0);
    CHECK(Expr::parse("q^2 - 1").eval(3.0) == 8.0);
    CHECK(Expr::parse("2^3^2").eval(0.0) == 512.0);  // right associative
    CHECK(Expr::parse("1-2*3").eval(0.0) == -5.0);
    CHECK(Expr::parse("-2^2").eval(0.0) == -4.0);
    CHECK(Expr::parse("(-2)^2").eval(0.0) == 4.0);
    CHECK(Expr::parse("2^-2").eval(0.0) == 0.25);
    CHECK(Expr::parse("6/3/2").eval(0.0) == 1.0);
    CHECK(Expr::parse("10 - 2 - 3").eval(0.0) == 5.0);
}

TEST_CASE("constants and functions") {
    CHECK(Expr::parse("pi").eval(0.0) == std::numbers::pi);
    CHECK(Expr::parse("e").eval(0.0) == std::numbers::e);
    CHECK(Expr::parse("ln2").eval(0.0) == std::numbers::ln2);
    CHECK(Expr::parse("ln(e)").eval(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(Expr::parse("log2(8)").eval(0.0) == 3.0);
    CHECK(Expr::parse("exp(0)").eval(0.0) == 1.0);
    CHECK(Expr::parse("abs(0 - q)").eval(2.5) == 2.5);
    CHECK(Expr::parse("pow(2, 10)").eval(0.0) == 1024.0);
}

TEST_CASE("derived values of the hc deformation expression") {
    Expr phi = Expr::parse("(1-2^(1-q))/ln(2)");
    // 0.5 / ln 2, hand arithmetic
    double expected2 = 0.5 / std::log(2.0);
    CHECK(std::abs(phi.eval(2.0) - expected2) <= 1e-12);
    CHECK(std::abs(phi.eval(2.0) - 0.72134752044448170) <= 1e-12);
    // (1 - sqrt 2) / ln 2, hand arithmetic
    double expected05 = (1.0 - std::sqrt(2.0)) / std::log(2.0);
    CHECK(std::abs(phi.eval(0.5) - expected05) <= 1e-12);
    CHECK(phi.eval(1.0) == 0.0);
}

TEST_CASE("syntax errors carry offsets and expectations") {
    CHECK_THROWS_AS(Expr::parse(""), ParseError);

    try {
        Expr::parse("2 *");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
        CHECK(std::string(e.what()).find("operand") != std::string::npos);
    }

    try {
        Expr::parse("2q");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 1);  // no implicit multiplication
    }

    try {
        Expr::parse("2*foo");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }

    CHECK_THROWS_AS(Expr::parse("(1+q"), ParseError);
    CHECK_THROWS_AS(Expr::parse("1+q)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("pow(2)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("ln()"), ParseError);
    CHECK_THROWS_AS(Expr::parse("sin(q)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("1.e3"), ParseError);
    CHECK_THROWS_AS(Expr::parse("1e"), ParseError);
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(Expr::parse("ln(q)").eval(0.0), EvalError);
    CHECK_THROWS_AS(Expr::parse("ln(q)").eval(-1.0), EvalError);
    CHECK_THROWS_AS(Expr::parse("log2(q - 1)").eval(1.0), EvalError);
    CHECK_THROWS_AS(Expr::parse("q^0.5").eval(-4.0), EvalError);
    CHECK_THROWS_AS(Expr::parse("0^(0-1)").eval(0.0), EvalError);
    CHECK(Expr::parse("q^q").eval(0.0) == 1.0);  // 0^0 in the expression language

    try {
        Expr::parse("1/(q-1)").eval(1.0);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(e.subexpr() == "1/(q-1)");
        CHECK(e.point() == 1.0);
    }

    try {
        Expr::parse("2 * ln(1 - q)").eval(3.0);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(e.subexpr() == "ln(1 - q)");
    }
}

TEST_CASE("configurable variable name") {
    CHECK(Expr::parse("p*2", "p").eval(3.0) == 6.0);
    CHECK_THROWS_AS(Expr::parse("q", "p"), ParseError);
}

TEST_CASE("precedence equalities under random substitution") {
    std::mt19937 rng(20260808);
    std::uniform_real_distribution<double> num(0.1, 9.9);
    auto lit = [&] {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", num(rng));
        return std::string(buf);
    };
    const char* pairs[][2] = {
        {"A+B*C", "A+(B*C)"}, {"A-B*C", "A-(B*C)"},   {"A*B+C", "(A*B)+C"},
        {"A-B-C", "(A-B)-C"}, {"A/B/C", "(A/B)/C"},   {"A^B^C", "A^(B^C)"},
        {"-A^B", "-(A^B)"},   {"A*B^C", "A*(B^C)"},   {"-A*B", "(-A)*B"},
        {"-A+B", "(-A)+B"},
    };
    for (int trial = 0; trial < 200; ++trial) {
        std::string a = lit(), b = lit(), c = lit();
        for (const auto& p : pairs) {
            auto substitute = [&](const std::string& s) {
                std::string out;
                for (char ch : s) {
                    if (ch == 'A') out += a;
                    else if (ch == 'B') out += b;
                    else if (ch == 'C') out += c;
                    else out += ch;
                }
                return out;
            };
            double lhs = Expr::parse(substitute(p[0])).eval(0.0);
            double rhs = Expr::parse(substitute(p[1])).eval(0.0);
            CHECK(lhs == rhs);
        }
    }
}

namespace {

// Grammar-directed generator for the print/reparse round-trip property.
std::string random_expr_text(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    std::uniform_real_distribution<double> num(0.0, 16.0);
    switch (pick(rng)) {
        case 0: {
            char buf[40];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), num(rng));
            (void)ec;
            return std::string(buf, ptr);
        }
        case 1: return "q";
        case 2: return (std::uniform_int_distribution<int>(0, 2)(rng) == 0) ? "pi" : "ln2";
        case 3: return "-" + random_expr_text(rng, depth - 1);
        case 4: return "(" + random_expr_text(rng, depth - 1) + ")";
        case 5: return random_expr_text(rng, depth - 1) + " + " + random_expr_text(rng, depth - 1);
        case 6: return random_expr_text(rng, depth - 1) + " - " + random_expr_text(rng, depth - 1);
        case 7: return random_expr_text(rng, depth - 1) + " * " + random_expr_text(rng, depth - 1);
        case 8: return random_expr_text(rng, depth - 1) + " / " + random_expr_text(rng, depth - 1);
        default: return "(" + random_expr_text(rng, depth - 1) + ")^2";
    }
}

}  // namespace

TEST_CASE("print then reparse is structurally identical and bit-exact to evaluate") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> point(0.05, 3.0);
    int evaluated = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::string text = random_expr_text(rng, 4);
        Expr original = Expr::parse(text);
        Expr reparsed = Expr::parse(original.print());
        REQUIRE(structurally_equal(original, reparsed));
        CHECK(original.print() == reparsed.print());
        double x = point(rng);
        try {
            double a = original.eval(x);
            double b = reparsed.eval(x);
            if (std::isnan(a))
                CHECK(std::isnan(b));
            else
                CHECK(a == b);
            ++evaluated;
        } catch (const EvalError&) {
            CHECK_THROWS_AS(reparsed.eval(x), EvalError);
        }
    }
    CHECK(evaluated > 100);
}

TEST_CASE("fuzzed inputs parse or fail with a positioned error, never crash") {
    std::mt19937 rng(777);
    const std::string charset = "qq0123456789..+-*/^^(()) eElnogxpabic2,";
    std::uniform_int_distribution<int> len(0, 48);
    std::uniform_int_distribution<std::size_t> ch(0, charset.size() - 1);
    std::uniform_real_distribution<double> point(-2.0, 2.0);
    int parsed = 0, rejected = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::string text;
        int n = len(rng);
        for (int i = 0; i < n; ++i) text += charset[ch(rng)];
        try {
            Expr e = Expr::parse(text);
            ++parsed;
            try {
                (void)e.eval(point(rng));
            } catch (const EvalError&) {
            }
        } catch (const ParseError& err) {
            CHECK(err.offset() <= text.size());
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 500);
    CHECK(rejected > 0);
}
