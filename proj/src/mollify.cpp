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
#include <frobkit/mollify.hpp>
#include <frobkit/parallel.hpp>
#include <frobkit/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace frobkit {

// ---------------------------------------------------------------------------- Modulus

Modulus Modulus::analytic(const Expression& e)
{
    Modulus m;
    m.m_expr = e;
    return m;
}

Modulus Modulus::analytic(std::string_view text)
{
    return analytic(Expression::parse(text, VariableSet::scalar("t")));
}

Modulus Modulus::empirical(std::vector<std::pair<double, double>> samples)
{
    if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "empirical modulus needs at least one sample");
    std::sort(samples.begin(), samples.end());
    for (const auto& [t, w] : samples) {
        if (!(t > 0.0) || !(w >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "empirical modulus samples must have t > 0 and omega >= 0");
        }
    }
    Modulus m;
    m.m_samples = std::move(samples);
    return m;
}

double Modulus::operator()(double t) const
{
    if (is_analytic()) return m_expr.evaluate({t, 0.0, 0.0});
    if (t <= 0.0) return 0.0;
    double t0 = 0.0;
    double w0 = 0.0;
    for (const auto& [t1, w1] : m_samples) {
        if (t <= t1) return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
        t0 = t1;
        w0 = w1;
    }
    return w0;
}

std::string Modulus::describe() const
{
    if (is_analytic()) return m_expr.source();
    return "empirical (" + std::to_string(m_samples.size()) + " scales)";
}

double Modulus::integral(double eps) const
{
    if (is_analytic()) return integrate_from_zero([this](double t) { return (*this)(t); }, eps).value;
    double acc = 0.0;
    double t0 = 0.0;
    double w0 = 0.0;
    for (const auto& [t1, w1] : m_samples) {
        if (t1 >= eps) {
            const double we = w0 + (w1 - w0) * (eps - t0) / (t1 - t0);
            return acc + 0.5 * (eps - t0) * (w0 + we);
        }
        acc += 0.5 * (t1 - t0) * (w0 + w1);
        t0 = t1;
        w0 = w1;
    }
    return acc + (eps - t0) * w0;
}

void MollifierSchedule::validate() const
{
    if (scales.empty()) throw Error(ErrorCode::InvalidArgument, "mollifier schedule is empty");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "mollifier scales must be positive");
        if (i > 0 && !(scales[i] < scales[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "mollifier scales must be strictly decreasing");
        }
    }
}

// ---------------------------------------------------------------------------- mollify

namespace {

std::vector<int> active_axes(unsigned mask, int dim)
{
    std::vector<int> axes;
    for (int a = 0; a < dim; ++a) {
        if (mask & (1u << a)) axes.push_back(a);
    }
    return axes;
}

class MollifiedSource final : public FieldSource
{
public:
    MollifiedSource(ScalarField g, double eps)
        : m_g(std::move(g))
        , m_eps(eps)
        , m_delta(eps * kLatticeFraction)
        , m_axes(active_axes(m_g.dependency_mask(), m_g.chart().dim()))
    {
        build_cache();
    }

    double value(const Point& x) const override { return sum(x, -1); }

    double partial(int axis, const Point& x, double, const Chart&) const override
    {
        if (std::find(m_axes.begin(), m_axes.end(), axis) == m_axes.end()) return 0.0;
        return sum(x, axis);
    }

    unsigned dependency_mask() const override { return m_g.dependency_mask(); }

    std::string describe() const override
    {
        char buf[48];
        std::snprintf(buf, sizeof buf, ", %.6g)", m_eps);
        return "mollify(" + m_g.describe() + buf;
    }

private:
    // g at the (clamped) lattice node with integer coordinates idx on the active axes.
    double g_at(const Point& x, const std::array<long, 3>& idx) const
    {
        if (!m_cache.empty()) {
            std::size_t flat = 0;
            for (std::size_t k = 0; k < m_axes.size(); ++k) {
                flat = flat * m_cache_count[k] + static_cast<std::size_t>(idx[k] - m_cache_lo[k]);
            }
            return m_cache[flat];
        }
        Point y = x;
        for (std::size_t k = 0; k < m_axes.size(); ++k) {
            const int a = m_axes[k];
            const Interval& b = m_g.chart().bounds(a);
            y[a] = std::clamp(static_cast<double>(idx[k]) * m_delta, b.lo, b.hi);
        }
        return m_g(y);
    }

    void build_cache()
    {
        const Chart& c = m_g.chart();
        std::size_t total = 1;
        for (std::size_t k = 0; k < m_axes.size(); ++k) {
            const Interval& b = c.bounds(m_axes[k]);
            m_cache_lo[k] = static_cast<long>(std::floor((b.lo - m_eps) / m_delta)) - 1;
            const long hi = static_cast<long>(std::ceil((b.hi + m_eps) / m_delta)) + 1;
            m_cache_count[k] = static_cast<std::size_t>(hi - m_cache_lo[k] + 1);
            total *= m_cache_count[k];
        }
        if (total > 2'000'000) return;
        std::vector<double> values(total);
        const Point mid{c.bounds(0).mid(), c.bounds(1).mid(), c.dim() == 3 ? c.bounds(2).mid() : 0.0};
        parallel_for(total, [&](std::size_t flat) {
            std::array<long, 3> idx{};
            std::size_t rest = flat;
            for (std::size_t k = m_axes.size(); k-- > 0;) {
                idx[k] = m_cache_lo[k] + static_cast<long>(rest % m_cache_count[k]);
                rest /= m_cache_count[k];
            }
            values[flat] = g_at(mid, idx);
        });
        m_cache = std::move(values);
    }

    // Normalised kernel sum; axis < 0 gives the value, otherwise the exact partial.
    double sum(const Point& x, int axis) const
    {
        const std::size_t k = m_axes.size();
        std::array<long, 3> lo{}, hi{}, idx{};
        for (std::size_t i = 0; i < k; ++i) {
            const double xa = x[m_axes[i]];
            lo[i] = static_cast<long>(std::ceil((xa - m_eps) / m_delta));
            hi[i] = static_cast<long>(std::floor((xa + m_eps) / m_delta));
            idx[i] = lo[i];
        }
        std::size_t slot = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (m_axes[i] == axis) slot = i;
        }
        double n = 0.0, d = 0.0, na = 0.0, da = 0.0;
        const double inv = 1.0 / m_eps;
        for (;;) {
            double s = 0.0;
            std::array<double, 3> u{};
            for (std::size_t i = 0; i < k; ++i) {
                u[i] = (x[m_axes[i]] - static_cast<double>(idx[i]) * m_delta) * inv;
                s += u[i] * u[i];
            }
            if (s < 1.0) {
                const double w = std::exp(-1.0 / (1.0 - s));
                const double g = g_at(x, idx);
                n += w * g;
                d += w;
                if (axis >= 0) {
                    const double one_minus = 1.0 - s;
                    const double wa = w * (-2.0 * u[slot] * inv / (one_minus * one_minus));
                    na += wa * g;
                    da += wa;
                }
            }
            std::size_t i = k;
            while (i-- > 0) {
                if (++idx[i] <= hi[i]) break;
                idx[i] = lo[i];
            }
            if (i == static_cast<std::size_t>(-1)) break;
        }
        if (!(d > 0.0)) throw Error(ErrorCode::Numerical, "mollifier kernel has no lattice support");
        if (axis < 0) return n / d;
        return (na * d - n * da) / (d * d);
    }

    ScalarField m_g;
    double m_eps;
    double m_delta;
    std::vector<int> m_axes;
    std::vector<double> m_cache;
    std::array<long, 3> m_cache_lo{};
    std::array<std::size_t, 3> m_cache_count{};
};

} // namespace

ScalarField mollify(const ScalarField& g, double eps)
{
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "mollifier radius must be positive");
    const Chart& c = g.chart();
    const auto axes = active_axes(g.dependency_mask(), c.dim());
    if (axes.empty()) return g.with_smoothness(Smoothness::C2);
    for (int a : axes) {
        if (eps > c.margin(a) * (1.0 + 1e-12)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "mollifier radius %.6g exceeds the chart margin %.6g on axis %d", eps,
                          c.margin(a), a + 1);
            throw Error(ErrorCode::InvalidArgument, buf);
        }
    }
    return ScalarField(std::make_shared<MollifiedSource>(g, eps), c, Smoothness::C2);
}

// ---------------------------------------------------------------------------- bounds

namespace {

// Odd node count per axis so that n^k >= min_samples.
int nodes_per_axis(std::size_t min_samples, std::size_t k)
{
    int n = static_cast<int>(std::ceil(std::pow(static_cast<double>(min_samples), 1.0 / static_cast<double>(k))));
    while (std::pow(static_cast<double>(n), static_cast<double>(k)) < static_cast<double>(min_samples)) ++n;
    return n | 1;
}

std::vector<Point> lattice_points(const Chart& region, const std::vector<int>& axes, int n)
{
    Point mid{region.bounds(0).mid(), region.bounds(1).mid(), region.dim() == 3 ? region.bounds(2).mid() : 0.0};
    std::vector<Point> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < axes.size(); ++i) total *= static_cast<std::size_t>(n);
    out.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Point p = mid;
        std::size_t rest = flat;
        for (int a : axes) {
            const auto i = static_cast<int>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
            const Interval& b = region.bounds(a);
            p[a] = i == n - 1 ? b.hi : b.lo + b.width() * i / (n - 1);
        }
        out.push_back(p);
    }
    return out;
}

double distance(const Point& x, const Point& y)
{
    return std::sqrt((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]) + (x[2] - y[2]) * (x[2] - y[2]));
}

void check_modulus(const ScalarField& g, const Modulus& omega, const Chart& region, const std::vector<int>& axes,
                   std::size_t pairs, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double min_width = region.width(axes[0]);
    for (int a : axes) min_width = std::min(min_width, region.width(a));
    const Point mid{region.bounds(0).mid(), region.bounds(1).mid(), region.dim() == 3 ? region.bounds(2).mid() : 0.0};
    for (std::size_t n = 0; n < pairs; ++n) {
        Point x = mid, y = mid;
        for (int a : axes) x[a] = region.bounds(a).lo + region.width(a) * u(rng);
        if (n % 2 == 0) {
            for (int a : axes) y[a] = region.bounds(a).lo + region.width(a) * u(rng);
        } else {
            const double len = 0.05 * min_width * u(rng);
            Point dir{};
            double norm = 0.0;
            for (int a : axes) {
                dir[a] = gauss(rng);
                norm += dir[a] * dir[a];
            }
            norm = std::sqrt(norm);
            if (norm == 0.0) continue;
            for (int a : axes) y[a] = std::clamp(x[a] + len * dir[a] / norm, region.bounds(a).lo, region.bounds(a).hi);
        }
        const double r = distance(x, y);
        if (r == 0.0) continue;
        const double inc = std::fabs(g(x) - g(y));
        const double w = omega(r);
        if (inc > w * (1.0 + 1e-9) + 1e-12) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "modulus violated: |g(x) - g(y)| = %.6g > omega(%.6g) = %.6g for x = ", inc,
                          r, w);
            throw Error(ErrorCode::ModulusViolation,
                        buf + format_point(x, region.dim()) + ", y = " + format_point(y, region.dim()));
        }
    }
}

double log_slope(const std::vector<double>& xs, const std::vector<double>& ys)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > 0.0 && ys[i] > 0.0) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    }
    if (lx.size() < 2) return std::nan("");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::nan("");
}

double ratio(double observed, double unit)
{
    if (observed == 0.0) return 0.0;
    if (unit <= 0.0) return std::numeric_limits<double>::infinity();
    return observed / unit;
}

} // namespace

MollifierBoundReport verify_mollifier_bounds(const ScalarField& g, const Modulus& omega,
                                             const MollifierSchedule& schedule, const MollifierCheckOptions& opt)
{
    schedule.validate();
    const Chart region = g.chart().interior();
    const auto axes = active_axes(g.dependency_mask(), g.chart().dim());
    MollifierBoundReport report;
    if (!axes.empty()) check_modulus(g, omega, region, axes, opt.modulus_pairs, opt.seed);
    report.modulus_pairs_checked = axes.empty() ? 0 : opt.modulus_pairs;

    const auto points = axes.empty() ? std::vector<Point>{}
                                     : lattice_points(region, axes, nodes_per_axis(opt.min_samples, axes.size()));
    report.sample_points = points.size();
    std::vector<double> gv(points.size());
    parallel_for(points.size(), [&](std::size_t i) { gv[i] = g(points[i]); });

    std::vector<double> eps_list, deriv_list;
    for (double eps : schedule.scales) {
        MollifierRow row;
        row.eps = eps;
        row.omega_integral = omega.integral(eps);
        row.err_bound_unit = row.omega_integral / eps;
        row.deriv_bound_unit = row.omega_integral / (eps * eps);
        if (!axes.empty()) {
            const ScalarField m = mollify(g, eps);
            std::vector<double> err(points.size()), der(points.size());
            parallel_for(points.size(), [&](std::size_t i) {
                err[i] = std::fabs(m(points[i]) - gv[i]);
                double s = 0.0;
                for (int a : axes) {
                    const double da = partial(m, a, points[i]);
                    s += da * da;
                }
                der[i] = std::sqrt(s);
            });
            row.sup_err = *std::max_element(err.begin(), err.end());
            row.sup_deriv = *std::max_element(der.begin(), der.end());
        }
        row.k_err = ratio(row.sup_err, row.err_bound_unit);
        row.k_deriv = ratio(row.sup_deriv, row.deriv_bound_unit);
        report.fitted_k = std::max({report.fitted_k, row.k_err, row.k_deriv});
        eps_list.push_back(eps);
        deriv_list.push_back(row.sup_deriv);
        report.rows.push_back(row);
    }
    report.consistent = report.fitted_k <= opt.k_limit;
    report.deriv_log_slope = log_slope(eps_list, deriv_list);
    return report;
}

Modulus estimate_modulus(const ScalarField& g, const std::vector<double>& scales, std::size_t pairs,
                         std::uint64_t seed)
{
    if (scales.empty()) throw Error(ErrorCode::InvalidArgument, "no scales given for the modulus estimate");
    const Chart& c = g.chart();
    for (double t : scales) {
        if (!(t > 0.0) || t > c.scale()) {
            throw Error(ErrorCode::InvalidArgument, "modulus scales must lie in (0, chart size]");
        }
    }
    const auto axes = active_axes(g.dependency_mask(), c.dim());
    std::vector<std::pair<double, double>> samples;
    if (axes.empty()) {
        for (double t : scales) samples.emplace_back(t, 0.0);
        return Modulus::empirical(std::move(samples));
    }

    const auto base = lattice_points(c, axes, nodes_per_axis(1000, axes.size()));
    std::vector<double> gbase(base.size());
    parallel_for(base.size(), [&](std::size_t i) { gbase[i] = g(base[i]); });

    std::vector<Point> dirs;
    for (int a : axes) {
        for (double s : {1.0, -1.0}) {
            Point d{};
            d[a] = s;
            dirs.push_back(d);
        }
    }
    if (axes.size() >= 2) {
        const std::size_t k = axes.size();
        const double norm = 1.0 / std::sqrt(static_cast<double>(k));
        for (unsigned signs = 0; signs < (1u << k); ++signs) {
            Point d{};
            for (std::size_t i = 0; i < k; ++i) d[axes[i]] = (signs & (1u << i)) ? -norm : norm;
            dirs.push_back(d);
        }
    }

    auto in_chart = [&](const Point& y) {
        for (int a : axes) {
            if (y[a] < c.bounds(a).lo || y[a] > c.bounds(a).hi) return false;
        }
        return true;
    };

    std::vector<double> sorted = scales;
    std::sort(sorted.begin(), sorted.end());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double running = 0.0;
    for (double t : sorted) {
        std::vector<double> best(base.size(), 0.0);
        parallel_for(base.size(), [&](std::size_t i) {
            double m = 0.0;
            for (const Point& d : dirs) {
                for (double f : {1.0, 0.75, 0.5, 0.25}) {
                    Point y = base[i];
                    for (int a : axes) y[a] += f * t * d[a];
                    if (in_chart(y)) m = std::max(m, std::fabs(g(y) - gbase[i]));
                }
            }
            best[i] = m;
        });
        double sup = *std::max_element(best.begin(), best.end());
        for (std::size_t n = 0; n < pairs; ++n) {
            Point x = base[0];
            for (int a : axes) x[a] = c.bounds(a).lo + c.width(a) * u(rng);
            Point d{};
            double norm = 0.0;
            for (int a : axes) {
                d[a] = gauss(rng);
                norm += d[a] * d[a];
            }
            if (norm == 0.0) continue;
            const double len = t * u(rng) / std::sqrt(norm);
            Point y = x;
            for (int a : axes) y[a] += len * d[a];
            if (in_chart(y)) sup = std::max(sup, std::fabs(g(x) - g(y)));
        }
        running = std::max(running, sup);
        samples.emplace_back(t, running);
    }
    return Modulus::empirical(std::move(samples));
}

} // namespace frobkit
