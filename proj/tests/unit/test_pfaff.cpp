#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <frobkit/pfaff.hpp>

#include <cmath>

using namespace frobkit;

namespace {
Chart domain(double lo, double hi, double zlo, double zhi, double margin = 0.0)
{
    return Chart(3, {Interval{lo, hi}, Interval{lo, hi}, Interval{zlo, zhi}}, {margin, margin, margin});
}

Grid square(double lo, double hi, int n) { return Grid(2, {Interval{lo, hi}, Interval{lo, hi}}, {n, n, 1}); }

double remark_exact(double x, double y) { return 1.0 / (1.0 - (2.0 / 3.0) * (std::pow(x, 1.5) + std::pow(y, 1.5))); }

double sup_error(const ScalarField& f, const Grid& g, double (*exact)(double, double))
{
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point p = g.node(k);
        e = std::max(e, std::fabs(f(p) - exact(p[0], p[1])));
    }
    return e;
}
} // namespace

TEST_CASE("zero coefficients give the constant")
{
    const auto p = PfaffProblem::analytic("0", "0", domain(0, 1, 0, 2), {0.3, 0.4, 1.5});
    const auto g = square(0, 1, 11);
    for (auto order : {SweepOrder::XFirst, SweepOrder::YFirst}) {
        const auto f = solve(p, g, order, 1e-3);
        for (double v : *sampled_values(f)) CHECK(v == 1.5);
    }
    CHECK(uniqueness_crosscheck(p, g, 1e-3) == 0.0);
}

TEST_CASE("exponential solution")
{
    const auto p = PfaffProblem::analytic("z", "z", domain(0, 1, 0.5, 10), {0, 0, 1}, Smoothness::C2);
    const auto g = square(0, 1, 101);
    const auto f = solve(p, g, SweepOrder::XFirst, 1e-3);
    CHECK(f(g.node(0, 0)) == 1.0);
    CHECK(sup_error(f, g, [](double x, double y) { return std::exp(x + y); }) <= 1e-6);
    const auto r = residual(p, f, g);
    CHECK(r.x <= 1e-4);
    CHECK(r.y <= 1e-4);
    const auto exact = ScalarField::function([](const Point& q) { return std::exp(q[0] + q[1]); },
                                             Chart::cube(2, {0, 1}), Smoothness::C2);
    CHECK(residual(p, exact, g).x <= 1e-4);
}

TEST_CASE("negative residual control")
{
    const auto p = PfaffProblem::analytic("1", "0", domain(0, 1, -1, 3), {0, 0, 0.5});
    const auto g = square(0, 1, 11);
    const auto flat = ScalarField::constant(0.5, Chart::cube(2, {0, 1}));
    CHECK(residual(p, flat, g).x == doctest::Approx(1.0));
    CHECK(residual(p, flat, g).y == 0.0);
}

TEST_CASE("square-root family")
{
    const auto p = PfaffProblem::analytic("x^0.5*z^2", "y^0.5*z^2", domain(0, 1, 0.5, 10), {0, 0, 1});
    const auto g = square(0, 0.7, 51);
    const auto f = solve(p, g, SweepOrder::XFirst, 1e-3);
    const double e = sup_error(f, g, remark_exact);
    CHECK(e <= 1e-4);
    CHECK(uniqueness_crosscheck(p, g, 1e-3) <= 1e-4);
    const auto r = residual(p, f, g);
    CHECK(std::max(r.x, r.y) <= 1e-3);
    // fixed-step RK4 loses order on x^0.5: error ~ step^1.5
    const auto half = square(0, 0.5, 51);
    CHECK(sup_error(solve(p, half, SweepOrder::YFirst, 1e-3), half, remark_exact) <= 1e-5);
    CHECK(sup_error(solve(p, g, SweepOrder::YFirst, 1e-4), g, remark_exact) <= 2e-6);
    // the solution blows up inside [0,1]^2
    try {
        solve(p, square(0, 1, 11), SweepOrder::XFirst, 1e-3);
        FAIL("expected blow-up");
    } catch (const DomainExitError& err) {
        CHECK(std::string(err.what()).find("blow-up") != std::string::npos);
    }
}

TEST_CASE("rotational control is path dependent")
{
    const auto p = PfaffProblem::analytic("-y", "x", domain(0, 1, -2, 2), {0, 0, 0}, Smoothness::C2);
    // x-first gives xy, y-first gives -xy
    CHECK(uniqueness_crosscheck(p, square(0, 1, 21), 1e-3) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("graph of the solution is an integral surface")
{
    const auto p = PfaffProblem::analytic("z", "z", domain(0, 1, 0.5, 10), {0, 0, 1}, Smoothness::C2);
    const auto g = square(0, 1, 51);
    const auto mesh = graph_mesh(solve(p, g, SweepOrder::YFirst, 1e-3), g);
    CHECK(tangency_residual(mesh, pfaff_form(p)).sup <= 1e-3);
    CHECK_THROWS_AS(graph_mesh(ScalarField::constant(0, Chart::cube(2, {0, 1})), square(0, 1, 10)), Error);
}

TEST_CASE("structured sequence for the square-root family")
{
    const Chart c = domain(0, 0.7, 0.5, 10, 0.05);
    auto sc = StructuredCoefficients::analytic("x^0.5", "y^0.5", "z^2", 20.0, c);
    sc.F = sc.F.with_smoothness(Smoothness::C2);
    MollifierSchedule sched;
    sched.scales = {0.04, 0.02, 0.01, 0.005};
    const auto seq = structured_sequence(sc, sched);
    const Grid region = Grid::over_interior(c, 7);
    const auto rows = plain_defects(seq, region);
    double head = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].wedge_norm <= 1e-8);
        if (k < rows.size() / 2) head = std::max(head, rows[k].deta_norm);
    }
    for (const auto& r : rows) CHECK(r.deta_norm <= 1.1 * head);
    for (double d : structured_f_derivative_sups(sc, sched)) CHECK(d <= 20.0 * (1 + 1e-6));
    CHECK(rows.back().distance < rows.front().distance);
}

TEST_CASE("Lipschitz spot check")
{
    const Chart c = domain(0, 1, -1, 1, 0.05);
    CHECK_NOTHROW(StructuredCoefficients::analytic("x", "y", "abs(z)", 1.0, c).validate());
    CHECK_THROWS_AS(StructuredCoefficients::analytic("x", "y", "abs(z)", 0.5, c).validate(), Error);
    CHECK_THROWS_AS(StructuredCoefficients::analytic("x*z", "y", "z", 1.0, c).validate(), Error);
}

TEST_CASE("lipschitz F gets a bounded derivative")
{
    const Chart c = domain(0, 1, -1, 1, 0.1);
    const auto sc = StructuredCoefficients::analytic("abs(x - 0.5)", "abs(y - 0.5)", "abs(z)", 1.0, c);
    MollifierSchedule sched;
    sched.scales = {0.08, 0.04, 0.02, 0.01};
    for (double d : structured_f_derivative_sups(sc, sched)) CHECK(d <= 1.0 * (1 + 1e-6));
    const auto rows = plain_defects(structured_sequence(sc, sched), Grid::over_interior(c, 5));
    for (const auto& r : rows) CHECK(r.wedge_norm <= 1e-8);
}

TEST_CASE("separable-plus-gradient coefficients")
{
    // A = |x - 0.5| + phi_x, B = |y - 0.5|^0.5 + phi_y with phi = 0.2 sin(x) y^2
    const Chart c = domain(0, 1, -1, 1, 0.1);
    const auto sc = StructuredCoefficients::analytic("abs(x - 0.5) + 0.2*cos(x)*y^2",
                                                     "abs(y - 0.5)^0.5 + 0.4*sin(x)*y", "1", 0.0, c);
    MollifierSchedule sched;
    sched.scales = {0.08, 0.04, 0.02, 0.01};
    const Grid region(3, {Interval{0.2, 0.8}, Interval{0.2, 0.8}, Interval{0, 0.1}}, {4, 4, 2});
    std::vector<double> defect;
    for (const auto& a : structured_sequence(sc, sched).approximants) {
        const auto deta = exterior_derivative(a.form);
        defect.push_back(sup_norm(deta.d3, region).value);
    }
    for (double d : defect) CHECK(d <= 1e-8);
}
