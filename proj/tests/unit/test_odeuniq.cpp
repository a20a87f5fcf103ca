#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <frobkit/odeuniq.hpp>
#include <frobkit/quadrature.hpp>

#include <cmath>

using namespace frobkit;

namespace {

Verdict verdict(const char* w, Condition c)
{
    return check(Modulus::analytic(w), c, default_ode_schedule()).verdict;
}

} // namespace

TEST_CASE("lipschitz modulus satisfies every condition")
{
    const auto all = check_all(Modulus::analytic("t"), default_ode_schedule());
    REQUIRE(all.size() == 3);
    for (const auto& v : all) CHECK(v.verdict == Verdict::Satisfied);
    // (1/eps) * eps^2/2 * e^{1/2}
    for (const auto& r : all[0].rows) {
        CHECK(r.integral == doctest::Approx(0.5 * r.eps * r.eps).epsilon(1e-10));
        CHECK(r.log_quantity == doctest::Approx(std::log(0.5 * r.eps) + 0.5).epsilon(1e-9));
    }
    // partial integrals are ln(eps_1 / eps)
    for (const auto& r : all[2].rows) {
        if (r.eps < 0.1) CHECK(r.integral == doctest::Approx(std::log(0.1 / r.eps)).epsilon(1e-10));
    }
}

TEST_CASE("holder moduli violate every condition")
{
    for (const char* w : {"t^0.5", "t^0.8"}) {
        CAPTURE(w);
        for (const auto& v : check_all(Modulus::analytic(w), default_ode_schedule())) {
            CHECK(v.verdict == Verdict::Violated);
        }
    }
}

TEST_CASE("t|ln t| separates the two forms")
{
    CHECK(verdict("t*abs(ln(t))", Condition::OdeStar) == Verdict::Satisfied);
    CHECK(verdict("t*abs(ln(t))", Condition::Osgood) == Verdict::Satisfied);
    // omega e^{omega/t} = |ln t| grows without bound
    const auto b = check(Modulus::analytic("t*abs(ln(t))"), Condition::OdeStarB, default_ode_schedule());
    CHECK(b.verdict == Verdict::Violated);
    for (const auto& r : b.rows) CHECK(std::exp(r.log_quantity) == doctest::Approx(std::fabs(std::log(r.eps))).epsilon(1e-9));
}

TEST_CASE("t ln^2 t violates every condition")
{
    for (const auto& v : check_all(Modulus::analytic("t*ln(t)^2"), default_ode_schedule())) {
        CHECK(v.verdict == Verdict::Violated);
    }
    const auto o = check(Modulus::analytic("t*ln(t)^2"), Condition::Osgood, default_ode_schedule());
    CHECK(o.rate == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("ODESTAR and ODESTARB agree on the increasing battery")
{
    for (const char* w : {"t", "2*t", "t*ln(ln(1/t))", "t^0.5", "t^0.8", "t*ln(t)^2"}) {
        CAPTURE(w);
        CHECK(verdict(w, Condition::OdeStar) == verdict(w, Condition::OdeStarB));
    }
}

TEST_CASE("quantities are monotone under domination")
{
    // t <= t^0.9 on (0, 1)
    const auto lo = check(Modulus::analytic("t"), Condition::OdeStar, default_ode_schedule());
    const auto hi = check(Modulus::analytic("t^0.9"), Condition::OdeStar, default_ode_schedule());
    for (std::size_t k = 0; k < lo.rows.size(); ++k) CHECK(lo.rows[k].log_quantity <= hi.rows[k].log_quantity);
    const auto lob = check(Modulus::analytic("t"), Condition::OdeStarB, default_ode_schedule());
    const auto hib = check(Modulus::analytic("t^0.9"), Condition::OdeStarB, default_ode_schedule());
    for (std::size_t k = 0; k < lob.rows.size(); ++k) CHECK(lob.rows[k].log_quantity <= hib.rows[k].log_quantity);
}

TEST_CASE("singular quadrature")
{
    const Quadrature q = integrate_from_zero([](double t) { return std::sqrt(t); }, 1e-3);
    CHECK(q.value == doctest::Approx(2.0 / 3.0 * std::pow(1e-3, 1.5)).epsilon(1e-9));
    const Quadrature l = integrate_from_zero([](double t) { return t * std::fabs(std::log(t)); }, 0.01);
    // eps^2/2 (|ln eps| + 1/2)
    CHECK(l.value == doctest::Approx(0.5e-4 * (std::log(100.0) + 0.5)).epsilon(1e-9));
}

TEST_CASE("input validation")
{
    const Modulus w = Modulus::analytic("t");
    CHECK_THROWS_AS(check(w, Condition::OdeStar, {0.1, 0.01, 0.001}), Error);
    CHECK_THROWS_AS(check(w, Condition::OdeStar, {0.1, 0.05, 0.02, 0.01}), Error);
    CHECK_THROWS_AS(check(w, Condition::OdeStar, {0.1, 0.01, 0.01, 1e-5, 1e-6}), Error);
    CHECK_THROWS_AS(check(Modulus::analytic("t - 0.05"), Condition::OdeStar, default_ode_schedule()), Error);
    CHECK(parse_condition("OSGOOD") == Condition::Osgood);
    CHECK_THROWS_AS(parse_condition("osgood"), Error);
    CHECK(std::string(to_string(Verdict::Inconclusive)) == "inconclusive");
}

TEST_CASE("empirical modulus")
{
    // piecewise linear through (s, 2 s): Lipschitz
    std::vector<std::pair<double, double>> s;
    for (int k = 1; k <= 9; ++k) s.emplace_back(std::pow(10.0, -k), 2.0 * std::pow(10.0, -k));
    const auto all = check_all(Modulus::empirical(s), default_ode_schedule());
    for (const auto& v : all) CHECK(v.verdict == Verdict::Satisfied);
}
