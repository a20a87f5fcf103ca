#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <frobkit/frames.hpp>

#include <cmath>
#include <random>

using namespace frobkit;

namespace {
const Chart unit3 = Chart::cube(3, {0.0, 1.0});
const Chart sym3 = Chart::cube(3, {-1.0, 1.0}, 0.1);

Point random_point(std::mt19937_64& rng, const Chart& c)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Chart in = c.interior();
    Point p{};
    for (int a = 0; a < 3; ++a) p[a] = in.bounds(a).lo + in.width(a) * u(rng);
    return p;
}
} // namespace

TEST_CASE("exterior derivative examples")
{
    const Point x{0.3, 0.6, 0.2};
    auto d = exterior_derivative(OneForm::analytic("0", "0", "1", unit3));
    CHECK(d.at(x) == Point{0, 0, 0});
    // eta = dx3 - x^2 dx1, x^2 being the second coordinate
    d = exterior_derivative(OneForm::analytic("-x2", "0", "1", unit3));
    CHECK(d.d1(x) == 0.0);
    CHECK(d.d2(x) == 0.0);
    CHECK(d.d3(x) == 1.0);
    d = exterior_derivative(OneForm::analytic("-y", "-x", "1", unit3));
    CHECK(d.at(x) == Point{0, 0, 0});
}

TEST_CASE("exterior derivative refuses continuous forms")
{
    const auto eta = OneForm::analytic("-abs(x)^0.5", "0", "1", sym3, Smoothness::Continuous);
    CHECK_THROWS_AS(exterior_derivative(eta), Error);
}

TEST_CASE("wedge13")
{
    const auto contact = OneForm::analytic("-x2", "0", "1", unit3);
    const auto v = wedge13(contact, exterior_derivative(contact));
    CHECK(v.v({0.1, 0.9, 0.4}) == 1.0);
    const auto closed = OneForm::analytic("-y", "-x", "1", unit3);
    CHECK(wedge13(closed, exterior_derivative(closed)).v({0.2, 0.3, 0.4}) == 0.0);

    // Oracle: eta ^ d eta for a general form, with the wedge expanded by brute force over permutations.
    const auto eta = OneForm::analytic("sin(y*z)", "x*z^2", "1 + x*y", unit3);
    const auto deta = exterior_derivative(eta);
    const Point x{0.3, 0.7, 0.5};
    const double p = std::sin(0.35), q = 0.3 * 0.25, r = 1.21;
    // dc[k][i] = d c_i / d x_k and W[i][j] = d_i c_j - d_j c_i
    const double cs = std::cos(0.35);
    const double dc[3][3] = {{0, 0.25, 0.7}, {0.5 * cs, 0, 0.3}, {0.7 * cs, 0.3, 0}};
    double W[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) W[i][j] = dc[i][j] - dc[j][i];
    const double c[3] = {p, q, r};
    const double expect = c[0] * W[1][2] + c[1] * W[2][0] + c[2] * W[0][1];
    CHECK(wedge13(eta, deta).v(x) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("sup norms")
{
    const Grid g = Grid::over(unit3, 11);
    CHECK(sup_norm(ScalarField::constant(3.0, unit3), g).value == 3.0);
    CHECK(sup_norm(OneForm::analytic("0", "0", "1", unit3), g).value == 1.0);
    const auto s = sup_norm(OneForm::analytic("x1", "0", "1", unit3), g);
    CHECK(s.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s.at[0] == 1.0);
}

TEST_CASE("cartan identity on canonical frames")
{
    std::mt19937_64 rng(11);
    const char* forms[][3] = {{"0", "0", "1"}, {"-x2", "0", "1"}, {"-y", "-x", "1"},
                              {"-sin(y)*z", "x^2", "2 + cos(x)"}, {"-z*y", "exp(x)*0.3", "1.5 + 0.2*sin(z)"}};
    for (auto& f : forms) {
        const auto eta = OneForm::analytic(f[0], f[1], f[2], sym3);
        const auto frame = canonical_frame(eta);
        for (int n = 0; n < 50; ++n) {
            const Point x = random_point(rng, sym3);
            CHECK(cartan_residual(eta, frame.X(), frame.Y(), x, 1e-4) <= 1e-6);
        }
    }
    const auto dz = OneForm::analytic("0", "0", "1", sym3);
    const auto frame = canonical_frame(dz);
    CHECK(cartan_residual(dz, frame.X(), frame.Y(), {0, 0, 0}, 1e-4) <= 1e-10);
}

TEST_CASE("cartan residual rejects fields outside the kernel")
{
    const auto eta = OneForm::analytic("0", "0", "1", sym3);
    const auto one = ScalarField::constant(1.0, sym3);
    const auto zero = ScalarField::constant(0.0, sym3);
    CHECK_THROWS_AS(cartan_residual(eta, VectorField{{zero, zero, one}}, VectorField{{zero, one, zero}}, {0, 0, 0}, 1e-4),
                    Error);
}

TEST_CASE("bracket antisymmetry")
{
    const auto frame = CanonicalFrame::analytic("sin(y)*z", "x*z", sym3);
    const Point x{0.2, -0.3, 0.4};
    const Point xy = lie_bracket(frame.X(), frame.Y(), x, 1e-4);
    const Point yx = lie_bracket(frame.Y(), frame.X(), x, 1e-4);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(xy[i] + yx[i]) <= 1e-9);
}

TEST_CASE("d of d vanishes to discretization order")
{
    const auto f = ScalarField::analytic("sin(x*y) + exp(z)*x", sym3);
    const double h = 1e-3;
    const auto eta = OneForm::make(derivative_field(f, 0, h), derivative_field(f, 1, h), derivative_field(f, 2, h));
    const auto dd = exterior_derivative(eta, h);
    // third derivatives of the test field are bounded by about 3 on the interior
    CHECK(sup_norm(dd, Grid::over_interior(sym3, 6)).value <= 10 * h * h * 3);
}

TEST_CASE("constant rescaling scales the wedge by s^2")
{
    const auto eta = OneForm::analytic("-sin(y)*z", "x^2", "2 + cos(x)", sym3);
    const Grid g = Grid::over_interior(sym3, 5);
    const double base = sup_norm(wedge13(eta, exterior_derivative(eta)), g).value;
    const auto s = eta.scaled(-3.0);
    CHECK(sup_norm(wedge13(s, exterior_derivative(s)), g).value == doctest::Approx(9.0 * base).epsilon(1e-12));
}
