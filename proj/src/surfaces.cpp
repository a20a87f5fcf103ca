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
#include <frobkit/surfaces.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace frobkit {

namespace {

double param(double eps, int n, int i)
{
    if (n == 1) return 0.0;
    if (2 * i == n - 1) return 0.0;
    return -eps + 2.0 * eps * i / (n - 1);
}

// Points at the parameters s(0..n-1) along one field, two trajectories (one per sign).
std::vector<Point> along(const CanonicalFrame& frame, Direction which, const Point& x, double eps, int n, double step,
                         int* failed)
{
    std::vector<Point> out(static_cast<std::size_t>(n), x);
    const int c = n / 2;
    for (int sign : {1, -1}) {
        std::vector<double> stops;
        std::vector<int> idx;
        for (int k = 1; k <= c; ++k) {
            const int i = c + sign * k;
            stops.push_back(param(eps, n, i));
            idx.push_back(i);
        }
        if (stops.empty()) continue;
        std::vector<std::size_t> at;
        try {
            const Trajectory t = trajectory_with_stops(frame, which, x, stops, step, &at);
            for (std::size_t k = 0; k < at.size(); ++k) out[static_cast<std::size_t>(idx[k])] = t.points[at[k]];
        } catch (const DomainExitError& e) {
            int bad = idx.back();
            for (std::size_t k = 0; k < stops.size(); ++k) {
                if (std::fabs(stops[k]) > std::fabs(e.time())) {
                    bad = idx[k];
                    break;
                }
            }
            *failed = bad;
            throw;
        }
    }
    return out;
}

Point cross(const Point& u, const Point& v)
{
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double norm(const Point& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Point diff(const SurfaceMesh& m, int i, int j, bool first)
{
    const int n = first ? m.n1 : m.n2;
    const int k = first ? i : j;
    const double h = 2.0 * m.eps / (n - 1);
    auto P = [&](int kk) -> const Point& { return first ? m.at(kk, j) : m.at(i, kk); };
    Point d{};
    for (int a = 0; a < 3; ++a) {
        if (k == 0) d[a] = (-3.0 * P(0)[a] + 4.0 * P(1)[a] - P(2)[a]) / (2.0 * h);
        else if (k == n - 1) d[a] = (3.0 * P(n - 1)[a] - 4.0 * P(n - 2)[a] + P(n - 3)[a]) / (2.0 * h);
        else d[a] = (P(k + 1)[a] - P(k - 1)[a]) / (2.0 * h);
    }
    return d;
}

} // namespace

double SurfaceMesh::s1(int i) const { return param(eps, n1, i); }
double SurfaceMesh::s2(int j) const { return param(eps, n2, j); }

SurfaceMesh synthesize(const CanonicalFrame& frame, const Point& x, double eps, int n1, int n2, double step,
                       Order order)
{
    const bool three = frame.dim() == 3;
    if (!three) n2 = 1;
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (n1 < 3 || n1 % 2 == 0 || (three && (n2 < 3 || n2 % 2 == 0))) {
        throw Error(ErrorCode::InvalidArgument, "mesh resolutions must be odd and at least 3");
    }
    if (!frame.chart().contains(x)) throw Error(ErrorCode::OutOfBounds, "base point " + format_point(x) + " is outside the chart");
    SurfaceMesh m;
    m.base = x;
    m.eps = eps;
    m.n1 = n1;
    m.n2 = n2;
    m.dim = frame.dim();
    m.points.assign(static_cast<std::size_t>(n1 * n2), x);

    const auto fail = [&](int i, int j, const DomainExitError& e) {
        throw DomainExitError("mesh node (" + std::to_string(i) + ", " + std::to_string(j) + ") leaves the chart: " +
                                  e.what(),
                              e.time(), e.where());
    };
    if (!three) {
        int bad = -1;
        try {
            const auto row = along(frame, Direction::X, x, eps, n1, step, &bad);
            for (int i = 0; i < n1; ++i) m.points[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i)];
        } catch (const DomainExitError& e) {
            fail(bad, 0, e);
        }
        return m;
    }

    const bool y_first = order == Order::YThenX;
    const Direction outer = y_first ? Direction::Y : Direction::X;
    const Direction inner = y_first ? Direction::X : Direction::Y;
    const int n_out = y_first ? n2 : n1, n_in = y_first ? n1 : n2;
    int bad = -1;
    std::vector<Point> spine;
    try {
        spine = along(frame, outer, x, eps, n_out, step, &bad);
    } catch (const DomainExitError& e) {
        y_first ? fail(m.n1 / 2, bad, e) : fail(bad, m.n2 / 2, e);
    }
    std::vector<int> bad_in(static_cast<std::size_t>(n_out), -1);
    parallel_for(static_cast<std::size_t>(n_out), [&](std::size_t o) {
        try {
            const auto row = along(frame, inner, spine[o], eps, n_in, step, &bad_in[o]);
            for (int k = 0; k < n_in; ++k) {
                const int i = y_first ? k : static_cast<int>(o), j = y_first ? static_cast<int>(o) : k;
                m.points[static_cast<std::size_t>(i * n2 + j)] = row[static_cast<std::size_t>(k)];
            }
        } catch (const DomainExitError& e) {
            const int k = bad_in[o];
            y_first ? fail(k, static_cast<int>(o), e) : fail(static_cast<int>(o), k, e);
        }
    });
    return m;
}

Tangency tangency_residual(const SurfaceMesh& m, const OneForm& eta)
{
    if (m.points.empty()) throw Error(ErrorCode::InvalidArgument, "empty mesh");
    if (m.dim != eta.dim()) throw Error(ErrorCode::InvalidArgument, "mesh and form dimensions differ");
    Tangency t;
    t.angles.assign(m.points.size(), 0.0);
    t.sup = 0.0;
    for (int i = 0; i < m.n1; ++i) {
        for (int j = 0; j < m.n2; ++j) {
            const Point& x = m.at(i, j);
            const Point w = eta.at(x);
            Point n;
            double scale;
            const Point t1 = diff(m, i, j, true);
            if (m.dim == 2) {
                // the curve's normal in the plane
                n = {-t1[1], t1[0], 0.0};
                scale = norm(t1);
            } else {
                const Point t2 = diff(m, i, j, false);
                n = cross(t1, t2);
                scale = norm(t1) * norm(t2);
            }
            const double nn = norm(n), nw = norm(w);
            const bool interior = i > 0 && i < m.n1 - 1 && (m.dim == 2 || (j > 0 && j < m.n2 - 1));
            double& a = t.angles[static_cast<std::size_t>(i * m.n2 + j)];
            if (nn <= 1e-12 * scale || nw == 0.0) {
                a = NAN;
                if (interior) ++t.degenerate;
                continue;
            }
            a = std::asin(std::min(1.0, norm(cross(n, w)) / (nn * nw)));
            if (interior && a > t.sup) {
                t.sup = a;
                t.sup_i = i;
                t.sup_j = j;
            }
        }
    }
    return t;
}

double holonomy(const CanonicalFrame& frame, const Point& x, double eps, int n1, int n2, double step)
{
    const SurfaceMesh a = synthesize(frame, x, eps, n1, n2, step, Order::YThenX);
    const SurfaceMesh b = synthesize(frame, x, eps, n1, n2, step, Order::XThenY);
    double s = 0.0;
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        const Point& p = a.points[k];
        const Point& q = b.points[k];
        s = std::max(s, norm({p[0] - q[0], p[1] - q[1], p[2] - q[2]}));
    }
    return s;
}

ConvergenceReport convergence_report(const std::vector<SurfaceMesh>& meshes, const OneForm& target,
                                     double tangency_tol)
{
    if (meshes.size() < 2) throw Error(ErrorCode::InvalidArgument, "convergence needs at least two meshes");
    const SurfaceMesh& first = meshes.front();
    for (const auto& m : meshes) {
        if (m.n1 != first.n1 || m.n2 != first.n2 || m.eps != first.eps || m.base != first.base) {
            throw Error(ErrorCode::InvalidArgument, "meshes differ in base point, range or resolution");
        }
    }
    ConvergenceReport r;
    r.tangency_tol = tangency_tol;
    for (std::size_t k = 0; k + 1 < meshes.size(); ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < first.points.size(); ++n) {
            const Point& p = meshes[k].points[n];
            const Point& q = meshes[k + 1].points[n];
            s = std::max(s, norm({p[0] - q[0], p[1] - q[1], p[2] - q[2]}));
        }
        r.successive.push_back(s);
    }
    const auto& v = r.successive;
    const std::size_t n = v.size();
    if (std::all_of(v.begin(), v.end(), [](double s) { return s <= 1e-14; })) {
        r.cauchy_like = true;
    } else if (n >= 3) {
        r.cauchy_like = v[n - 2] < v[n - 3] && v[n - 1] < v[n - 2];
    }
    r.final_tangency = tangency_residual(meshes.back(), target).sup;
    r.limit_tangent = r.final_tangency <= tangency_tol;
    return r;
}

std::vector<SurfaceMesh> synthesize_sequence(const ApproxSequence& seq, const Point& x, double eps, int n1, int n2,
                                             double step)
{
    seq.validate();
    std::vector<SurfaceMesh> out;
    for (const auto& a : seq.approximants) out.push_back(synthesize(canonical_frame(a.form), x, eps, n1, n2, step));
    return out;
}

void write_csv(const SurfaceMesh& m, std::ostream& out)
{
    out << "i,j,s1,s2,x1,x2,x3,angle\n";
    char buf[256];
    for (int i = 0; i < m.n1; ++i) {
        for (int j = 0; j < m.n2; ++j) {
            const Point& p = m.at(i, j);
            const int n = std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,", i, j, m.s1(i), m.s2(j),
                                        p[0], p[1], p[2]);
            out.write(buf, n);
            if (!m.angles.empty()) {
                std::snprintf(buf, sizeof buf, "%.17g", m.angles[static_cast<std::size_t>(i * m.n2 + j)]);
                out << buf;
            }
            out << '\n';
        }
    }
}

} // namespace frobkit
