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
#include <frobkit/parallel.hpp>
#include <frobkit/pfaff.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace frobkit {

const char* to_string(SweepOrder o) { return o == SweepOrder::XFirst ? "x-first" : "y-first"; }

void PfaffProblem::validate() const
{
    if (!a.valid() || !b.valid()) throw Error(ErrorCode::InvalidArgument, "pfaff coefficients are missing");
    if (chart().dim() != 3) throw Error(ErrorCode::InvalidArgument, "pfaff problems live on a 3-D chart (x, y, z)");
    if (!b.chart().same_bounds(chart())) throw Error(ErrorCode::InvalidArgument, "a and b must share a chart");
    if (!chart().contains(init)) {
        throw Error(ErrorCode::OutOfBounds, "initial point " + format_point(init) + " is outside the domain");
    }
}

PfaffProblem PfaffProblem::analytic(const std::string& a, const std::string& b, const Chart& chart, const Point& init,
                                    Smoothness s)
{
    PfaffProblem p{ScalarField::analytic(a, chart, s), ScalarField::analytic(b, chart, s), init};
    p.validate();
    return p;
}

OneForm pfaff_form(const PfaffProblem& problem)
{
    return OneForm::make(-problem.a, -problem.b, ScalarField::constant(1.0, problem.chart()));
}

namespace {

// z at each coordinate along one field, starting from `start` whose coordinate on `axis` is origin.
std::vector<double> sweep(const CanonicalFrame& frame, Direction which, const Point& start,
                          const std::vector<double>& coords, double step)
{
    const int axis = which == Direction::X ? 0 : 1;
    const double origin = start[static_cast<std::size_t>(axis)];
    std::vector<double> z(coords.size(), start[2]);
    for (int sign : {1, -1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if ((coords[i] - origin) * sign > 0.0) idx.push_back(i);
        }
        std::sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
            return std::fabs(coords[l] - origin) < std::fabs(coords[r] - origin);
        });
        if (idx.empty()) continue;
        std::vector<double> stops;
        for (auto i : idx) stops.push_back(coords[i] - origin);
        std::vector<std::size_t> at;
        try {
            const Trajectory t = trajectory_with_stops(frame, which, start, stops, step, &at);
            for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = t.points[at[k]][2];
        } catch (const DomainExitError& e) {
            const Point& w = e.where();
            throw DomainExitError("solution leaves the z-interval (blow-up) near (x, y) = (" + format_point(w, 2).substr(1),
                                  e.time(), w);
        }
    }
    return z;
}

void check_grid(const PfaffProblem& p, const Grid& grid)
{
    if (grid.dim() != 2) throw Error(ErrorCode::InvalidArgument, "pfaff solutions live on a 2-D grid");
    for (int a = 0; a < 2; ++a) {
        const Interval& b = p.chart().bounds(a);
        const double tol = 1e-12 * b.width();
        if (grid.box(a).lo < b.lo - tol || grid.box(a).hi > b.hi + tol) {
            throw Error(ErrorCode::OutOfBounds, "grid leaves the base rectangle");
        }
    }
}

std::vector<double> coords(const Grid& g, int axis)
{
    std::vector<double> c(static_cast<std::size_t>(g.count(axis)));
    for (int i = 0; i < g.count(axis); ++i) c[static_cast<std::size_t>(i)] = g.coordinate(axis, i);
    return c;
}

} // namespace

ScalarField solve(const PfaffProblem& problem, const Grid& grid, SweepOrder order, double step)
{
    problem.validate();
    check_grid(problem, grid);
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    const CanonicalFrame frame{problem.a, problem.b};
    const auto xs = coords(grid, 0), ys = coords(grid, 1);
    std::vector<double> values(grid.size(), 0.0);
    const bool x_first = order == SweepOrder::XFirst;
    const Direction first = x_first ? Direction::X : Direction::Y;
    const Direction second = x_first ? Direction::Y : Direction::X;
    const auto& c1 = x_first ? xs : ys;
    const auto& c2 = x_first ? ys : xs;
    const std::vector<double> spine = sweep(frame, first, problem.init, c1, step);
    parallel_for(c1.size(), [&](std::size_t i) {
        Point s = problem.init;
        s[x_first ? 0 : 1] = c1[i];
        s[2] = spine[i];
        const auto col = sweep(frame, second, s, c2, step);
        for (std::size_t j = 0; j < c2.size(); ++j) {
            const int ix = static_cast<int>(x_first ? i : j), iy = static_cast<int>(x_first ? j : i);
            values[grid.flatten(ix, iy)] = col[j];
        }
    });
    return ScalarField::sampled(grid, std::move(values));
}

PfaffResidual residual(const PfaffProblem& problem, const ScalarField& f, const Grid& grid, double h)
{
    problem.validate();
    if (grid.dim() != 2) throw Error(ErrorCode::InvalidArgument, "pfaff residual needs a 2-D grid");
    const int nx = grid.count(0), ny = grid.count(1);
    const int lo = h > 0.0 ? 1 : 3;
    if (nx < 2 * lo + 1 || ny < 2 * lo + 1) throw Error(ErrorCode::InvalidArgument, "grid too small for the stencil");
    const double hx = h > 0.0 ? h : grid.spacing(0), hy = h > 0.0 ? h : grid.spacing(1);
    auto value = [&](int i, int j, int axis, int off) {
        Point p = grid.node(i, j);
        if (h > 0.0) {
            p[static_cast<std::size_t>(axis)] += off * h;
            return f(p);
        }
        return axis == 0 ? f(grid.node(i + off, j)) : f(grid.node(i, j + off));
    };
    auto d = [&](int i, int j, int axis) {
        const double hh = axis == 0 ? hx : hy;
        return (value(i, j, axis, 3) - 9.0 * value(i, j, axis, 2) + 45.0 * value(i, j, axis, 1) -
                45.0 * value(i, j, axis, -1) + 9.0 * value(i, j, axis, -2) - value(i, j, axis, -3)) /
               (60.0 * hh);
    };
    std::vector<PfaffResidual> rows(static_cast<std::size_t>(nx));
    parallel_for(static_cast<std::size_t>(nx - 2 * lo), [&](std::size_t k) {
        const int i = static_cast<int>(k) + lo;
        PfaffResidual r;
        for (int j = lo; j < ny - lo; ++j) {
            const Point n = grid.node(i, j);
            const Point q{n[0], n[1], f(n)};
            r.x = std::max(r.x, std::fabs(d(i, j, 0) - problem.a(q)));
            r.y = std::max(r.y, std::fabs(d(i, j, 1) - problem.b(q)));
        }
        rows[static_cast<std::size_t>(i)] = r;
    });
    PfaffResidual out;
    for (const auto& r : rows) {
        out.x = std::max(out.x, r.x);
        out.y = std::max(out.y, r.y);
    }
    return out;
}

double uniqueness_crosscheck(const PfaffProblem& problem, const Grid& grid, double step)
{
    const ScalarField fx = solve(problem, grid, SweepOrder::XFirst, step);
    const ScalarField fy = solve(problem, grid, SweepOrder::YFirst, step);
    const auto& vx = *sampled_values(fx);
    const auto& vy = *sampled_values(fy);
    double s = 0.0;
    for (std::size_t k = 0; k < vx.size(); ++k) s = std::max(s, std::fabs(vx[k] - vy[k]));
    return s;
}

SurfaceMesh graph_mesh(const ScalarField& f, const Grid& grid)
{
    if (grid.dim() != 2) throw Error(ErrorCode::InvalidArgument, "graph mesh needs a 2-D grid");
    const int n = grid.count(0);
    if (grid.count(1) != n || n % 2 == 0 || n < 3 ||
        std::fabs(grid.box(0).width() - grid.box(1).width()) > 1e-12 * grid.box(0).width()) {
        throw Error(ErrorCode::InvalidArgument, "graph mesh needs a square grid with an odd node count");
    }
    SurfaceMesh m;
    m.n1 = m.n2 = n;
    m.eps = 0.5 * grid.box(0).width();
    m.dim = 3;
    m.points.resize(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Point p = grid.node(i, j);
            m.points[static_cast<std::size_t>(i * n + j)] = {p[0], p[1], f(p)};
        }
    }
    m.base = m.at(n / 2, n / 2);
    return m;
}

void StructuredCoefficients::validate(std::size_t pairs, unsigned long long seed) const
{
    if (!A.valid() || !B.valid() || !F.valid()) throw Error(ErrorCode::InvalidArgument, "structured coefficients are missing");
    if (A.dependency_mask() & 0b100u || B.dependency_mask() & 0b100u) {
        throw Error(ErrorCode::InvalidArgument, "A and B must not depend on z");
    }
    if (F.dependency_mask() & 0b011u) throw Error(ErrorCode::InvalidArgument, "F must depend on z only");
    if (!(lipschitz >= 0.0)) throw Error(ErrorCode::InvalidArgument, "Lipschitz constant must be nonnegative");
    const Chart& c = F.chart();
    const Interval zi = c.bounds(2);
    const double xm = c.bounds(0).mid(), ym = c.bounds(1).mid();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(zi.lo, zi.hi);
    for (std::size_t k = 0; k < pairs; ++k) {
        const double z1 = u(rng);
        // half the pairs close together, where a violated constant shows first
        const double z2 = k % 2 ? std::clamp(z1 + (u(rng) - zi.mid()) * 1e-3, zi.lo, zi.hi) : u(rng);
        const double lhs = std::fabs(F({xm, ym, z1}) - F({xm, ym, z2}));
        const double rhs = lipschitz * std::fabs(z1 - z2);
        if (lhs > rhs * (1.0 + 1e-9) + 1e-14) {
            throw Error(ErrorCode::ModulusViolation, "F violates the declared Lipschitz constant between z = " +
                                                         std::to_string(z1) + " and z = " + std::to_string(z2));
        }
    }
}

StructuredCoefficients StructuredCoefficients::analytic(const std::string& A, const std::string& B,
                                                        const std::string& F, double lipschitz, const Chart& chart)
{
    StructuredCoefficients c{ScalarField::analytic(A, chart, Smoothness::Continuous),
                             ScalarField::analytic(B, chart, Smoothness::Continuous),
                             ScalarField::analytic(F, chart, Smoothness::Continuous), lipschitz};
    return c;
}

namespace {

ScalarField smoothed(const ScalarField& f, double eps)
{
    return f.smoothness() == Smoothness::Continuous ? mollify(f, eps) : f;
}

} // namespace

ApproxSequence structured_sequence(const StructuredCoefficients& c, const MollifierSchedule& schedule)
{
    c.validate();
    schedule.validate();
    const Chart& chart = c.A.chart();
    const ScalarField one = ScalarField::constant(1.0, chart);
    ApproxSequence seq;
    seq.provenance = Provenance::MollifiedFromTarget;
    seq.target = OneForm::make(-(c.A * c.F), -(c.B * c.F), one);
    for (double eps : schedule.scales) {
        const ScalarField Fk = smoothed(c.F, eps);
        seq.approximants.push_back(
            {eps, OneForm::make(-(smoothed(c.A, eps) * Fk), -(smoothed(c.B, eps) * Fk), one)});
    }
    return seq;
}

std::vector<double> structured_f_derivative_sups(const StructuredCoefficients& c, const MollifierSchedule& schedule)
{
    const Chart& chart = c.F.chart();
    const Chart inner = chart.interior();
    std::vector<double> out;
    for (double eps : schedule.scales) {
        const ScalarField Fk = smoothed(c.F, eps);
        double s = 0.0;
        const int n = 1001;
        for (int i = 0; i < n; ++i) {
            const double z = inner.bounds(2).lo + inner.bounds(2).width() * i / (n - 1);
            s = std::max(s, std::fabs(partial(Fk, 2, {chart.bounds(0).mid(), chart.bounds(1).mid(), z})));
        }
        out.push_back(s);
    }
    return out;
}

PfaffProblem structured_problem(const StructuredCoefficients& c, const Point& init)
{
    PfaffProblem p{c.A * c.F, c.B * c.F, init};
    p.validate();
    return p;
}

} // namespace frobkit
