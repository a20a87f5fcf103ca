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
#include <frobkit/forms.hpp>
#include <frobkit/parallel.hpp>

#include <cmath>
#include <vector>

namespace frobkit {

namespace {

void require_same_chart(const ScalarField& a, const ScalarField& b)
{
    if (a.chart().dim() != b.chart().dim()) throw Error(ErrorCode::InvalidArgument, "form coefficients live on different charts");
}

ScalarField zero_like(const ScalarField& f)
{
    return ScalarField::constant(0.0, f.chart());
}

// partial(f, axis) with the axis absent on 2-D charts mapping to zero.
ScalarField d(const ScalarField& f, int axis, double h)
{
    if (axis >= f.chart().dim()) return zero_like(f);
    return derivative_field(f, axis, h);
}

} // namespace

OneForm OneForm::make(ScalarField p, ScalarField q, ScalarField r)
{
    require_same_chart(p, q);
    require_same_chart(p, r);
    if (p.chart().dim() != 3) throw Error(ErrorCode::InvalidArgument, "three-coefficient 1-form needs a 3-D chart");
    return OneForm{std::move(p), std::move(q), std::move(r)};
}

OneForm OneForm::make2d(ScalarField p, ScalarField q)
{
    require_same_chart(p, q);
    if (p.chart().dim() != 2) throw Error(ErrorCode::InvalidArgument, "two-coefficient 1-form needs a 2-D chart");
    auto r = zero_like(p);
    return OneForm{std::move(p), std::move(q), std::move(r)};
}

OneForm OneForm::analytic(const std::string& p, const std::string& q, const std::string& r, const Chart& chart,
                          Smoothness s)
{
    if (chart.dim() == 2) return make2d(ScalarField::analytic(p, chart, s), ScalarField::analytic(q, chart, s));
    return make(ScalarField::analytic(p, chart, s), ScalarField::analytic(q, chart, s), ScalarField::analytic(r, chart, s));
}

Smoothness OneForm::smoothness() const
{
    return weakest(p.smoothness(), weakest(q.smoothness(), r.smoothness()));
}

Point OneForm::at(const Point& x) const
{
    return {p(x), q(x), dim() == 3 ? r(x) : 0.0};
}

double OneForm::norm_at(const Point& x) const
{
    const Point c = at(x);
    return std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
}

double OneForm::apply(const Point& x, const Point& v) const
{
    const Point c = at(x);
    return c[0] * v[0] + c[1] * v[1] + c[2] * v[2];
}

OneForm OneForm::scaled(double s) const
{
    if (dim() == 2) return make2d(s * p, s * q);
    return make(s * p, s * q, s * r);
}

OneForm operator-(const OneForm& a, const OneForm& b)
{
    if (a.dim() != b.dim()) throw Error(ErrorCode::InvalidArgument, "1-forms of different dimension");
    if (a.dim() == 2) return OneForm::make2d(a.p - b.p, a.q - b.q);
    return OneForm::make(a.p - b.p, a.q - b.q, a.r - b.r);
}

Point TwoForm::at(const Point& x) const
{
    if (dim == 2) return {0.0, 0.0, d3(x)};
    return {d1(x), d2(x), d3(x)};
}

double TwoForm::norm_at(const Point& x) const
{
    const Point c = at(x);
    return std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
}

double TwoForm::apply(const Point& x, const Point& u, const Point& v) const
{
    const Point c = at(x);
    return c[0] * (u[0] * v[2] - u[2] * v[0]) + c[1] * (u[1] * v[2] - u[2] * v[1]) + c[2] * (u[0] * v[1] - u[1] * v[0]);
}

TwoForm exterior_derivative(const OneForm& eta, double h)
{
    if (eta.smoothness() == Smoothness::Continuous) {
        throw Error(ErrorCode::NotDifferentiable, "d eta needs C1 coefficients; mollify the form first");
    }
    if (eta.dim() == 2) {
        const auto z = zero_like(eta.p);
        return TwoForm{z, z, d(eta.q, 0, h) - d(eta.p, 1, h), 2};
    }
    return TwoForm{d(eta.r, 0, h) - d(eta.p, 2, h), d(eta.r, 1, h) - d(eta.q, 2, h), d(eta.q, 0, h) - d(eta.p, 1, h), 3};
}

ThreeForm wedge13(const OneForm& eta, const TwoForm& omega)
{
    if (eta.dim() != 3 || omega.dim != 3) {
        throw Error(ErrorCode::InvalidArgument, "eta ^ d eta needs 3-D forms");
    }
    return ThreeForm{eta.p * omega.d2 - eta.q * omega.d1 + eta.r * omega.d3};
}

SupNorm sup_over(const Grid& region, const std::function<double(const Point&)>& fn)
{
    if (region.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty region");
    std::vector<double> values(region.size());
    parallel_for(region.size(), [&](std::size_t n) { values[n] = fn(region.node(n)); });
    SupNorm best{values[0], region.node(0)};
    for (std::size_t n = 1; n < values.size(); ++n) {
        if (values[n] > best.value) best = {values[n], region.node(n)};
    }
    return best;
}

SupNorm sup_norm(const ScalarField& f, const Grid& region)
{
    return sup_over(region, [&](const Point& x) { return std::fabs(f(x)); });
}

SupNorm sup_norm(const OneForm& f, const Grid& region)
{
    return sup_over(region, [&](const Point& x) { return f.norm_at(x); });
}

SupNorm sup_norm(const TwoForm& f, const Grid& region)
{
    return sup_over(region, [&](const Point& x) { return f.norm_at(x); });
}

SupNorm sup_norm(const ThreeForm& f, const Grid& region)
{
    return sup_norm(f.v, region);
}

Point VectorField::at(const Point& x) const
{
    return {c[0](x), c[1](x), c[2].valid() ? c[2](x) : 0.0};
}

Point lie_bracket(const VectorField& X, const VectorField& Y, const Point& x, double h)
{
    const int dim = X.c[0].chart().dim();
    const Point xv = X.at(x);
    const Point yv = Y.at(x);
    Point out{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (xv[j] != 0.0 && (Y.c[i].dependency_mask() & (1u << j))) {
                out[i] += xv[j] * central_difference(Y.c[i], j, x, h);
            }
            if (yv[j] != 0.0 && (X.c[i].dependency_mask() & (1u << j))) {
                out[i] -= yv[j] * central_difference(X.c[i], j, x, h);
            }
        }
    }
    return out;
}

double cartan_residual(const OneForm& eta, const VectorField& X, const VectorField& Y, const Point& x, double h)
{
    const Point xv = X.at(x);
    const Point yv = Y.at(x);
    const double scale = eta.norm_at(x);
    auto len = [](const Point& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };
    const double tol = 1e-8 * scale;
    if (std::fabs(eta.apply(x, xv)) > tol * len(xv) || std::fabs(eta.apply(x, yv)) > tol * len(yv)) {
        throw Error(ErrorCode::InvalidArgument, "vector fields are not in the kernel of the form at " + format_point(x));
    }
    const TwoForm deta = exterior_derivative(eta);
    return std::fabs(deta.apply(x, xv, yv) + eta.apply(x, lie_bracket(X, Y, x, h)));
}

} // namespace frobkit
