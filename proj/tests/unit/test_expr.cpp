#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <frobkit/expr.hpp>

#include <cmath>
#include <random>

using namespace frobkit;

namespace {
double ev(const char* s, Point p = {0, 0, 0})
{
    return Expression::parse(s).evaluate(p);
}
} // namespace

TEST_CASE("arithmetic and precedence")
{
    CHECK(ev("x1 + 2*x2", {1, 3, 0}) == 7.0);
    CHECK(ev("x^0.5", {4, 0, 0}) == 2.0);
    CHECK(ev("pow(x1,0.5)*z^2", {4, 0, 3}) == doctest::Approx(18.0).epsilon(1e-15));
    CHECK(ev("2+3*4^2") == 50.0);
    CHECK(ev("2^3^2") == 512.0);
    CHECK(ev("-2^2") == -4.0);
    CHECK(ev("  1 -   2 - 3 ") == -4.0);
    CHECK(ev("8/4/2") == 1.0);
    CHECK(ev("min(x,y) + max(x,y)", {2, 5, 0}) == 7.0);
    CHECK(ev("1.5e2") == 150.0);
}

TEST_CASE("functions")
{
    CHECK(ev("abs(x1)", {-2, 0, 0}) == 2.0);
    CHECK(ev("sqrt(9)") == 3.0);
    CHECK(ev("exp(0) + ln(1)") == 1.0);
    for (double x : {-3.0, -0.4, 0.0, 0.7, 11.0}) {
        CHECK(std::fabs(ev("sin(x1)^2 + cos(x1)^2", {x, 0, 0}) - 1.0) <= 1e-12);
    }
}

TEST_CASE("domain errors carry the sub-expression")
{
    try {
        ev("1 + ln(x1)", {0, 0, 0});
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.code() == ErrorCode::Domain);
        CHECK(e.subexpression().find("ln") != std::string::npos);
    }
    CHECK_THROWS_AS(ev("1/x", {0, 0, 0}), DomainError);
    CHECK_THROWS_AS(ev("sqrt(x)", {-1, 0, 0}), DomainError);
    CHECK_THROWS_AS(ev("x^0.5", {-1, 0, 0}), DomainError);
    CHECK(ev("x^2", {-3, 0, 0}) == 9.0);
    CHECK(ev("x^(-1)", {-2, 0, 0}) == -0.5);
}

TEST_CASE("parse errors")
{
    try {
        Expression::parse("1 + * 2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(Expression::parse("foo + 1"), ParseError);
    CHECK_THROWS_AS(Expression::parse("sinh(x)"), ParseError);
    CHECK_THROWS_AS(Expression::parse("pow(x)"), ParseError);
    CHECK_THROWS_AS(Expression::parse("sin(x, y)"), ParseError);
    CHECK_THROWS_AS(Expression::parse("(x + 1"), ParseError);
    CHECK_THROWS_AS(Expression::parse(""), ParseError);
    CHECK_THROWS_AS(Expression::parse("z", VariableSet::chart(2)), ParseError);
    CHECK_NOTHROW(Expression::parse("x*y", VariableSet::chart(2)));
}

TEST_CASE("variable mask")
{
    CHECK(Expression::parse("pow(x1,0.5)*z^2").variable_mask() == 0b101u);
    CHECK(Expression::parse("3").variable_mask() == 0u);
    CHECK(Expression::parse("t^2", VariableSet::scalar("t")).variable_mask() == 1u);
}

TEST_CASE("print round trip at random points")
{
    const char* corpus[] = {"x1 + 2*x2", "sin(x)^2 - cos(y*z)/3", "-abs(x)^2^0.5 + exp(-y)", "min(x, max(y, z)) * 0.1",
                            "pow(abs(x) + 1, y) - 1e-3*z", "sqrt(1 + x*x) / (2 + sin(z))", "0.1 + 0.2 - 0.3*x"};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const char* s : corpus) {
        const auto a = Expression::parse(s);
        const auto b = Expression::parse(a.print());
        for (int n = 0; n < 100; ++n) {
            const Point p{u(rng), u(rng), u(rng)};
            const double va = a.evaluate(p);
            const double vb = b.evaluate(p);
            CHECK(std::fabs(va - vb) <= 1e-12 * std::max(1.0, std::fabs(va)));
        }
    }
}

TEST_CASE("forward-mode derivative matches closed form")
{
    const auto e = Expression::parse("sin(x1)*y + x^3 - pow(y, 2.5)");
    const Point p{0.3, 1.7, 0.0};
    auto [v, dx] = e.evaluate_with_derivative(p, 0);
    CHECK(v == doctest::Approx(e.evaluate(p)));
    CHECK(dx == doctest::Approx(std::cos(0.3) * 1.7 + 3 * 0.09).epsilon(1e-14));
    auto dy = e.evaluate_with_derivative(p, 1).second;
    CHECK(dy == doctest::Approx(std::sin(0.3) - 2.5 * std::pow(1.7, 1.5)).epsilon(1e-14));
    CHECK(e.evaluate_with_derivative(p, 2).second == 0.0);
}
