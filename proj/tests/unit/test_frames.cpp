#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <frobkit/frames.hpp>

#include <cmath>
#include <random>

using namespace frobkit;

namespace {
const Chart unit3 = Chart::cube(3, {0.0, 1.0});
const Chart sym3 = Chart::cube(3, {-1.0, 1.0}, 0.1);
} // namespace

TEST_CASE("canonical frames")
{
    const Point x{0.3, 0.6, 0.2};
    auto f = canonical_frame(OneForm::analytic("0", "0", "1", unit3));
    CHECK(f.a(x) == 0.0);
    CHECK(f.b(x) == 0.0);
    f = canonical_frame(OneForm::analytic("-x2", "0", "1", unit3));
    CHECK(f.a(x) == 0.6);
    CHECK(f.b(x) == 0.0);
    f = canonical_frame(OneForm::analytic("-2*y", "-2*x", "2", unit3));
    CHECK(f.a(x) == 0.6);
    CHECK(f.b(x) == 0.3);
    CHECK(f.a.dependency_mask() == 0b010u);
}

TEST_CASE("transversality failure names the node")
{
    try {
        canonical_frame(OneForm::analytic("1", "0", "x - 0.5", unit3));
        FAIL("expected a transversality error");
    } catch (const TransversalityError& e) {
        CHECK(e.node()[0] == doctest::Approx(0.5));
    }
}

TEST_CASE("normalize")
{
    const Grid g = Grid::over(unit3, 11);
    const auto one = OneForm::analytic("x", "0", "1", unit3);
    CHECK(normalization_scale(one, g) == 1.0);
    const auto neg = OneForm::analytic("x", "y", "-0.5", unit3);
    CHECK(normalization_scale(neg, g) == -2.0);
    CHECK(normalize(neg, g).r({0.5, 0.5, 0.5}) == 1.0);
    CHECK(normalize(neg, g).p({0.5, 0.5, 0.5}) == -1.0);
    CHECK(normalization_scale(OneForm::analytic("0", "0", "1 + x1", unit3), g) == 1.0);
    CHECK_THROWS_AS(normalize(OneForm::analytic("0", "0", "x - 0.5", unit3), g), TransversalityError);
}

TEST_CASE("kernel property after normalization")
{
    const auto eta = OneForm::analytic("sin(3*y)*z", "x^2 - z", "-(2 + cos(x*y))", sym3);
    const auto n = normalize(eta, Grid::over(sym3, 9));
    const auto frame = canonical_frame(n);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const Point x{u(rng), u(rng), u(rng)};
        const double tol = 1e-10 * n.norm_at(x);
        CHECK(std::fabs(n.apply(x, frame.X().at(x))) <= tol);
        CHECK(std::fabs(n.apply(x, frame.Y().at(x))) <= tol);
    }
}

TEST_CASE("bracket magnitude")
{
    const Point x{0.3, 0.6, 0.2};
    CHECK(bracket_h(CanonicalFrame::analytic("0", "0", unit3), x) == 0.0);
    CHECK(bracket_h(CanonicalFrame::analytic("x2", "0", unit3), x) == -1.0);
    CHECK(bracket_h(CanonicalFrame::analytic("y", "x", unit3), x) == 0.0);
    // Oracle: independent hand derivative of h for a = z*sin(y), b = x*z
    const auto f = CanonicalFrame::analytic("z*sin(y)", "x*z", unit3);
    const double a = 0.2 * std::sin(0.6), b = 0.3 * 0.2;
    const double expect = 0.2 - 0.2 * std::cos(0.6) + a * 0.3 - b * std::sin(0.6);
    CHECK(bracket_h(f, x) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(bracket_h_field(f)(x) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("c*h agrees with -d eta(X, Y)")
{
    const auto eta = OneForm::analytic("-sin(y)*z*(1.5 + x)", "-x*(1.5 + x)", "1.5 + x", sym3);
    const auto frame = canonical_frame(eta);
    const auto deta = exterior_derivative(eta);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int k = 0; k < 100; ++k) {
        const Point x{u(rng), u(rng), u(rng)};
        const double lhs = eta.r(x) * bracket_h(frame, x);
        const double rhs = -deta.apply(x, frame.X().at(x), frame.Y().at(x));
        CHECK(std::fabs(lhs - rhs) <= 1e-10);
    }
}
