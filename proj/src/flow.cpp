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
#include <frobkit/flow.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace frobkit {

const char* to_string(Direction d)
{
    return d == Direction::X ? "X" : "Y";
}

namespace {

struct Axes
{
    int unit;      // coordinate advancing at unit rate
    int transverse; // coordinate being integrated
    const ScalarField* field;
};

Axes axes_for(const CanonicalFrame& frame, Direction which)
{
    if (frame.dim() == 2) {
        if (which == Direction::Y) throw Error(ErrorCode::InvalidArgument, "a 2-D frame has no Y field");
        return {0, 1, &frame.a};
    }
    return which == Direction::X ? Axes{0, 2, &frame.a} : Axes{1, 2, &frame.b};
}

class Integrator
{
public:
    Integrator(const CanonicalFrame& frame, Direction which, const Point& x, double step)
        : m_ax(axes_for(frame, which))
        , m_chart(frame.chart())
        , m_origin(x)
        , m_step(step)
        , m_which(which)
    {
        if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "flow step must be positive");
        if (!m_chart.contains(x)) {
            throw Error(ErrorCode::OutOfBounds, "flow start point " + format_point(x, m_chart.dim()) + " is outside the chart");
        }
    }

    Point at(double tau, double z) const
    {
        Point p = m_origin;
        p[m_ax.unit] = m_origin[m_ax.unit] + tau;
        p[m_ax.transverse] = z;
        return p;
    }

    double rhs(double tau, double z) const { return (*m_ax.field)(at(tau, z)); }

    double rk4(double tau, double z, double hs) const
    {
        const double k1 = rhs(tau, z);
        const double k2 = rhs(tau + 0.5 * hs, z + 0.5 * hs * k1);
        const double k3 = rhs(tau + 0.5 * hs, z + 0.5 * hs * k2);
        const double k4 = rhs(tau + hs, z + hs * k3);
        return z + hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    // Appends nodes for (t_from, t_to] to traj; the last node sits exactly at t_to.
    void segment(Trajectory& traj, double t_from, double t_to) const
    {
        const double len = std::fabs(t_to - t_from);
        if (len == 0.0) return;
        const double sign = t_to > t_from ? 1.0 : -1.0;
        const auto n_full = static_cast<long>(std::floor(len / m_step + 1e-9));
        double z = traj.points.back()[m_ax.transverse];
        double tau = t_from;
        for (long k = 1; k <= n_full; ++k) {
            const double next = k == n_full && std::fabs(len - n_full * m_step) <= 1e-12 * m_step
                                    ? t_to
                                    : t_from + sign * static_cast<double>(k) * m_step;
            z = rk4(tau, z, next - tau);
            tau = next;
            push(traj, tau, z);
        }
        if (tau != t_to) {
            z = rk4(tau, z, t_to - tau);
            push(traj, t_to, z);
        }
    }

    void push(Trajectory& traj, double tau, double z) const
    {
        const Point p = at(tau, z);
        if (!m_chart.contains(p) || !std::isfinite(z)) {
            throw DomainExitError(std::string("flow of ") + to_string(m_which) + " from " +
                                      format_point(m_origin, m_chart.dim()) + " left the chart at t = " +
                                      std::to_string(tau),
                                  tau, traj.points.back());
        }
        traj.times.push_back(tau);
        traj.points.push_back(p);
    }

    Trajectory start() const
    {
        Trajectory traj;
        traj.field = m_which;
        traj.times.push_back(0.0);
        traj.points.push_back(m_origin);
        return traj;
    }

private:
    Axes m_ax;
    Chart m_chart;
    Point m_origin;
    double m_step;
    Direction m_which;
};

} // namespace

Trajectory trajectory(const CanonicalFrame& frame, Direction which, const Point& x, double t, double step)
{
    Integrator in(frame, which, x, step);
    Trajectory traj = in.start();
    in.segment(traj, 0.0, t);
    return traj;
}

Point flow(const CanonicalFrame& frame, Direction which, const Point& x, double t, double step)
{
    return trajectory(frame, which, x, t, step).points.back();
}

Trajectory trajectory_with_stops(const CanonicalFrame& frame, Direction which, const Point& x,
                                 const std::vector<double>& stops, double step, std::vector<std::size_t>* stop_index)
{
    Integrator in(frame, which, x, step);
    Trajectory traj = in.start();
    double prev = 0.0;
    if (stop_index) stop_index->clear();
    for (double s : stops) {
        if (s * prev < 0.0 || std::fabs(s) < std::fabs(prev)) {
            throw Error(ErrorCode::InvalidArgument, "trajectory stops must share a sign and grow in magnitude");
        }
        in.segment(traj, prev, s);
        if (stop_index) stop_index->push_back(traj.times.size() - 1);
        prev = s;
    }
    return traj;
}

void write_csv(const Trajectory& traj, std::ostream& out)
{
    out << "t,x1,x2,x3\n";
    char buf[128];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Point& p = traj.points[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.times[i], p[0], p[1], p[2]);
        out << buf;
    }
}

SectionTime section_time(const CanonicalFrame& frame, const Point& x, double section, double step)
{
    const int axis = frame.dim() == 2 ? 0 : 1;
    const Interval& b = frame.chart().bounds(axis);
    if (section < b.lo || section > b.hi) {
        throw Error(ErrorCode::OutOfBounds, "section plane does not intersect the chart");
    }
    SectionTime out;
    out.t = x[axis] - section;
    const Direction which = frame.dim() == 2 ? Direction::X : Direction::Y;
    out.base = flow(frame, which, x, -out.t, step);
    out.base[axis] = section;
    const double a = frame.a(x);
    const double bb = frame.dim() == 3 ? frame.b(x) : 0.0;
    out.bound = 1.0 / std::sqrt((1.0 + a * a) * (1.0 + bb * bb));
    out.bound_satisfied = std::fabs(out.t) <= out.bound;
    return out;
}

std::vector<double> cumulative_integral(const Trajectory& traj, const ScalarField& f)
{
    std::vector<double> out(traj.times.size(), 0.0);
    if (out.empty()) return out;
    double prev = f(traj.points[0]);
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double cur = f(traj.points[i]);
        out[i] = out[i - 1] + 0.5 * (traj.times[i] - traj.times[i - 1]) * (prev + cur);
        prev = cur;
    }
    return out;
}

namespace {

AveragedD combine(double d1, double d2, bool has_y)
{
    AveragedD r;
    r.d1 = d1;
    r.d2 = d2;
    r.d = has_y ? std::max(d1, d2) : d1;
    r.d_abs = has_y ? std::max(std::fabs(d1), std::fabs(d2)) : std::fabs(d1);
    return r;
}

} // namespace

AveragedD averaged_d(const TwoForm& deta, const CanonicalFrame& frame, const Point& x, double t, double step)
{
    return averaged_d_batch(deta, frame, x, {t}, step).front();
}

std::vector<AveragedD> averaged_d_batch(const TwoForm& deta, const CanonicalFrame& frame, const Point& x,
                                        const std::vector<double>& times, double step)
{
    const bool has_y = frame.dim() == 3;
    // 2-D forms keep their only component in d3, integrated along X.
    const ScalarField& c1 = has_y ? deta.d1 : deta.d3;
    std::vector<double> i1(times.size(), 0.0);
    std::vector<double> i2(times.size(), 0.0);
    for (int sign : {1, -1}) {
        std::vector<std::size_t> which;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] * sign > 0.0) which.push_back(i);
        }
        if (which.empty()) continue;
        std::sort(which.begin(), which.end(),
                  [&](std::size_t l, std::size_t r) { return std::fabs(times[l]) < std::fabs(times[r]); });
        std::vector<double> stops;
        for (auto i : which) stops.push_back(times[i]);
        // A constant component integrates in closed form; the flow is still run so that
        // domain exits are reported the same way.
        std::vector<std::size_t> idx;
        const auto tx = trajectory_with_stops(frame, Direction::X, x, stops, step, &idx);
        if (auto c = c1.constant_value()) {
            for (auto i : which) i1[i] = *c * times[i];
        } else {
            const auto cx = cumulative_integral(tx, c1);
            for (std::size_t s = 0; s < which.size(); ++s) i1[which[s]] = cx[idx[s]];
        }
        if (has_y) {
            const auto ty = trajectory_with_stops(frame, Direction::Y, x, stops, step, &idx);
            if (auto c = deta.d2.constant_value()) {
                for (auto i : which) i2[i] = *c * times[i];
            } else {
                const auto cy = cumulative_integral(ty, deta.d2);
                for (std::size_t s = 0; s < which.size(); ++s) i2[which[s]] = cy[idx[s]];
            }
        }
    }
    std::vector<AveragedD> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out.push_back(combine(i1[i], i2[i], has_y));
    return out;
}

} // namespace frobkit
