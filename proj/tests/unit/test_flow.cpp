#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <frobkit/flow.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace frobkit;

namespace {
const Chart box = Chart::cube(3, {-1.0, 3.0}, 0.1);
} // namespace

TEST_CASE("straight and linear flows")
{
    const auto flat = CanonicalFrame::analytic("0", "0", box);
    CHECK(flow(flat, Direction::X, {0, 0, 0}, 0.5, 1e-3) == Point{0.5, 0, 0});
    const auto lin = CanonicalFrame::analytic("0", "1", box);
    const Point p = flow(lin, Direction::Y, {0, 0, 0}, 0.25, 1e-3);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 0.25);
    CHECK(std::fabs(p[2] - 0.25) <= 1e-12);
}

TEST_CASE("exponential flow and order of accuracy")
{
    const auto f = CanonicalFrame::analytic("0", "x3", box);
    const Point p = flow(f, Direction::Y, {0, 0, 1}, 1.0, 1e-3);
    CHECK(p[1] == 1.0);
    CHECK(std::fabs(p[2] - std::exp(1.0)) <= 1e-8);
    const double e1 = std::fabs(flow(f, Direction::Y, {0, 0, 1}, 1.0, 0.1)[2] - std::exp(1.0));
    const double e2 = std::fabs(flow(f, Direction::Y, {0, 0, 1}, 1.0, 0.05)[2] - std::exp(1.0));
    CHECK(e1 / e2 >= 8.0 * 0.8);
}

TEST_CASE("final partial step lands exactly")
{
    const auto f = CanonicalFrame::analytic("z", "0", box);
    const auto t = trajectory(f, Direction::X, {0, 0, 1}, 0.3333, 0.01);
    CHECK(t.times.back() == 0.3333);
    CHECK(t.points.back()[0] == 0.3333);
    CHECK(t.times.size() == 35);
    CHECK(std::fabs(t.points.back()[2] - std::exp(0.3333)) <= 1e-9);
    const auto back = trajectory(f, Direction::X, {0, 0, 1}, -0.5, 0.01);
    CHECK(back.times.size() == 51);
    CHECK(std::fabs(back.points.back()[2] - std::exp(-0.5)) <= 1e-10);
}

TEST_CASE("group law")
{
    const auto f = CanonicalFrame::analytic("sin(y + z)", "x*z - 0.5", box);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0), t(-0.5, 0.5);
    for (int n = 0; n < 20; ++n) {
        const Point x{u(rng), u(rng), u(rng)};
        const double s = t(rng), r = t(rng);
        for (auto which : {Direction::X, Direction::Y}) {
            const Point a = flow(f, which, flow(f, which, x, s, 1e-3), r, 1e-3);
            const Point b = flow(f, which, x, s + r, 1e-3);
            for (int i = 0; i < 3; ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-8);
        }
    }
}

TEST_CASE("domain exit")
{
    const auto f = CanonicalFrame::analytic("0", "x3", box);
    try {
        flow(f, Direction::Y, {0, 0, 1}, 2.5, 1e-3);
        FAIL("expected domain exit");
    } catch (const DomainExitError& e) {
        // x3 = e^t reaches 3 at t = ln 3
        CHECK(e.time() == doctest::Approx(std::log(3.0)).epsilon(2e-3));
        CHECK(box.contains(e.where()));
    }
    CHECK_THROWS_AS(flow(f, Direction::Y, {0, 0, 1}, 0.1, 0.0), Error);
    CHECK_THROWS_AS(flow(f, Direction::Y, {5, 0, 1}, 0.1, 1e-3), Error);
}

TEST_CASE("section time")
{
    const auto f = CanonicalFrame::analytic("0", "0", box);
    auto s = section_time(f, {0.2, 0.3, 0.1}, 0.0, 1e-3);
    CHECK(s.t == doctest::Approx(0.3));
    CHECK(s.base == Point{0.2, 0.0, 0.1});
    CHECK(s.bound_satisfied);
    s = section_time(f, {0.2, 0.0, 0.1}, 0.0, 1e-3);
    CHECK(s.t == 0.0);
    CHECK(s.base == Point{0.2, 0.0, 0.1});
    const auto g = CanonicalFrame::analytic("0", "1", box);
    s = section_time(g, {0.2, 0.5, 0.6}, 0.0, 1e-3);
    CHECK(std::fabs(s.base[2] - 0.1) <= 1e-12);
    CHECK_THROWS_AS(section_time(g, {0.2, 0.5, 0.6}, 10.0, 1e-3), Error);
}

TEST_CASE("averaged exterior derivative")
{
    const auto contact = OneForm::analytic("-x2", "0", "1", box);
    const auto frame = canonical_frame(contact);
    const auto d = averaged_d(exterior_derivative(contact), frame, {0.5, 0.5, 0.5}, 0.5, 1e-3);
    CHECK(d.d1 == 0.0);
    CHECK(d.d2 == 0.0);
    CHECK(d.d == 0.0);

    const auto c = Chart::cube(3, {-1.0, 1.0});
    const TwoForm w{ScalarField::constant(0.0, c), ScalarField::constant(1.0, c), ScalarField::constant(0.0, c), 3};
    const auto flat = CanonicalFrame::analytic("0", "0", c);
    const auto r = averaged_d(w, flat, {0, 0, 0}, 0.5, 1e-3);
    CHECK(std::fabs(r.d2 - 0.5) <= 1e-10);
    CHECK(r.d == r.d2);
    const auto neg = averaged_d(w, flat, {0, 0, 0}, -0.5, 1e-3);
    CHECK(std::fabs(neg.d2 + 0.5) <= 1e-10);
    CHECK(neg.d == 0.0);
    CHECK(std::fabs(neg.d_abs - 0.5) <= 1e-10);
}

TEST_CASE("averaged d is additive, batched consistently, and bounded by |t| sup |d eta|")
{
    const auto eta = OneForm::analytic("-sin(y)*z", "x^2", "2 + cos(x)", box);
    const auto frame = canonical_frame(eta);
    const auto deta = exterior_derivative(eta);
    const Point x{0.4, 0.6, 0.5};
    const double s = 0.3, t = 0.2, step = 1e-3;
    const auto whole = averaged_d(deta, frame, x, s + t, step);
    const auto first = averaged_d(deta, frame, x, s, step);
    const auto rest = averaged_d(deta, frame, flow(frame, Direction::X, x, s, step), t, step);
    CHECK(std::fabs(whole.d1 - first.d1 - rest.d1) <= 1e-6);

    const std::vector<double> ts{-0.5, -0.25, 0.0, 0.25, 0.5};
    const auto batch = averaged_d_batch(deta, frame, x, ts, step);
    const double bound = sup_norm(deta, Grid::over(box, 9)).value * 1.1;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto single = averaged_d(deta, frame, x, ts[i], step);
        CHECK(batch[i].d1 == doctest::Approx(single.d1).epsilon(1e-12));
        CHECK(batch[i].d2 == doctest::Approx(single.d2).epsilon(1e-12));
        CHECK(std::fabs(batch[i].d) <= std::fabs(ts[i]) * bound);
    }
}

TEST_CASE("trajectory CSV")
{
    const auto f = CanonicalFrame::analytic("0", "0", box);
    std::stringstream ss;
    write_csv(trajectory(f, Direction::X, {0, 0, 0}, 0.02, 0.01), ss);
    CHECK(ss.str() == "t,x1,x2,x3\n0,0,0,0\n0.01,0.01,0,0\n0.02,0.02,0,0\n");
}
