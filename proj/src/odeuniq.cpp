/*
 * Copyright 2026 The frobkit Authors.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#include <frobkit/odeuniq.hpp>
#include <frobkit/quadrature.hpp>

#include <cmath>
#include <cstdio>

namespace frobkit {

const char* to_string(Condition c)
{
    switch (c) {
    case Condition::OdeStar: return "ODESTAR";
    case Condition::OdeStarB: return "ODESTARB";
    case Condition::Osgood: return "OSGOOD";
    }
    return "?";
}

Condition parse_condition(const std::string& s)
{
    if (s == "ODESTAR") return Condition::OdeStar;
    if (s == "ODESTARB") return Condition::OdeStarB;
    if (s == "OSGOOD") return Condition::Osgood;
    throw Error(ErrorCode::InvalidArgument, "unknown condition '" + s + "' (ODESTAR, ODESTARB, OSGOOD)");
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<double> default_ode_schedule()
{
    std::vector<double> s;
    for (int k = 1; k <= 8; ++k) s.push_back(std::pow(10.0, -k));
    return s;
}

namespace {

void validate_schedule(const std::vector<double>& s)
{
    if (s.size() < 4) throw Error(ErrorCode::InvalidArgument, "the schedule needs at least four scales");
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (!(s[k] > 0.0) || (k > 0 && !(s[k] < s[k - 1]))) {
            throw Error(ErrorCode::InvalidArgument, "schedule scales must be positive and strictly decreasing");
        }
    }
    if (s.front() / s.back() < 1e4 * (1.0 - 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "the schedule must span at least four decades");
    }
}

double positive(const Modulus& w, double t)
{
    const double v = w(t);
    if (!(v > 0.0) || !std::isfinite(v)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "modulus is not positive at t = %.6g (value %.6g)", t, v);
        throw Error(ErrorCode::InvalidArgument, buf);
    }
    return v;
}

double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// lim Q = 0 along eps -> 0: ln Q falls over the last three scales with slope >= 0.1 in ln eps.
void limit_zero_verdict(ConditionVerdict& v)
{
    std::vector<double> le, lq;
    for (const auto& r : v.rows) {
        le.push_back(std::log(r.eps));
        lq.push_back(r.log_quantity);
    }
    v.rate = slope(le, lq);
    const std::size_t n = lq.size();
    const double a = lq[n - 3], b = lq[n - 2], c = lq[n - 1];
    char buf[200];
    if (b < a && c < b && v.rate >= 0.1) {
        v.verdict = Verdict::Satisfied;
        std::snprintf(buf, sizeof buf, "quantity decreases over the last three scales; ln Q ~ %.3g ln eps", v.rate);
    } else if (b >= a - 1e-12 * std::fabs(a) && c >= b - 1e-12 * std::fabs(b)) {
        v.verdict = Verdict::Violated;
        std::snprintf(buf, sizeof buf, "quantity does not decrease over the last three scales (log-slope %.3g)", v.rate);
    } else {
        v.verdict = Verdict::Inconclusive;
        std::snprintf(buf, sizeof buf, "mixed trend over the last three scales (log-slope %.3g)", v.rate);
    }
    v.rationale = buf;
}

// Partial integral over [lo, hi] cut at decades so Gauss-Kronrod sees moderate ranges.
Quadrature reciprocal_integral(const Modulus& w, double lo, double hi)
{
    Quadrature q;
    double b = hi;
    while (b > lo) {
        const double a = std::max(lo, b / 10.0);
        const Quadrature part = integrate([&](double t) { return 1.0 / positive(w, t); }, a, b);
        q.value += part.value;
        q.error += part.error;
        b = a;
    }
    return q;
}

} // namespace

ConditionVerdict check(const Modulus& omega, Condition condition, const std::vector<double>& schedule)
{
    validate_schedule(schedule);
    for (double e : schedule) positive(omega, e);
    ConditionVerdict v;
    v.condition = condition;

    if (condition == Condition::Osgood) {
        double acc = 0.0, err = 0.0;
        v.rows.push_back({schedule.front(), 0.0, 0.0, -INFINITY});
        for (std::size_t k = 1; k < schedule.size(); ++k) {
            const Quadrature q = reciprocal_integral(omega, schedule[k], schedule[k - 1]);
            acc += q.value;
            err += q.error;
            v.rows.push_back({schedule[k], acc, err, std::log(acc)});
        }
        // Increments per unit of u = ln(1/eps) decay like u^-p; the integral diverges iff p <= 1.
        std::vector<double> lu, lg;
        for (std::size_t k = 1; k < schedule.size(); ++k) {
            const double u0 = std::log(1.0 / schedule[k - 1]), u1 = std::log(1.0 / schedule[k]);
            const double g = (v.rows[k].integral - v.rows[k - 1].integral) / (u1 - u0);
            lu.push_back(std::log(0.5 * (u0 + u1)));
            lg.push_back(std::log(std::max(g, 1e-300)));
        }
        v.rate = -slope(lu, lg);
        char buf[200];
        if (v.rate <= 1.1) {
            v.verdict = Verdict::Satisfied;
            std::snprintf(buf, sizeof buf, "partial integrals keep growing: increments decay like ln(1/eps)^-%.3g (p <= 1.1)",
                          v.rate);
        } else if (v.rate >= 1.4) {
            v.verdict = Verdict::Violated;
            std::snprintf(buf, sizeof buf, "partial integrals level off: increments decay like ln(1/eps)^-%.3g (p >= 1.4)",
                          v.rate);
        } else {
            v.verdict = Verdict::Inconclusive;
            std::snprintf(buf, sizeof buf, "increment decay exponent %.3g lies between 1.1 and 1.4", v.rate);
        }
        v.rationale = buf;
        return v;
    }

    for (double e : schedule) {
        ConditionRow r;
        r.eps = e;
        if (condition == Condition::OdeStar) {
            const Quadrature q = omega.is_analytic()
                                     ? integrate_from_zero([&](double t) { return omega(t); }, e)
                                     : Quadrature{omega.integral(e), 0.0};
            r.integral = q.value;
            r.integral_error = q.error;
            if (!(q.value > 0.0)) throw Error(ErrorCode::Numerical, "integral of the modulus vanished");
            r.log_quantity = std::log(q.value / e) + q.value / (e * e);
        } else {
            const double w = omega(e);
            r.integral = w;
            r.log_quantity = std::log(w) + w / e;
        }
        v.rows.push_back(r);
    }
    limit_zero_verdict(v);
    if (condition == Condition::OdeStarB) v.rationale += "; read as equivalent to ODESTAR only for increasing moduli";
    return v;
}

std::vector<ConditionVerdict> check_all(const Modulus& omega, const std::vector<double>& schedule)
{
    return {check(omega, Condition::OdeStar, schedule), check(omega, Condition::OdeStarB, schedule),
            check(omega, Condition::Osgood, schedule)};
}

} // namespace frobkit
