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
#pragma once

#include <frobkit/chart.hpp>

namespace frobkit {

///
/// eta = p dx1 + q dx2 + r dx3. On a 2-D chart w = p dz1 + q dz2 and r is the zero field.
///
struct OneForm
{
    ScalarField p, q, r;

    static OneForm make(ScalarField p, ScalarField q, ScalarField r);
    static OneForm make2d(ScalarField p, ScalarField q);
    /// Coefficients given as expressions on `chart`, all tagged `s`.
    static OneForm analytic(const std::string& p, const std::string& q, const std::string& r, const Chart& chart,
                            Smoothness s = Smoothness::C2);

    int dim() const { return p.chart().dim(); }
    const Chart& chart() const { return p.chart(); }
    Smoothness smoothness() const;
    Point at(const Point& x) const;
    double norm_at(const Point& x) const;
    /// eta(v) for a tangent vector v.
    double apply(const Point& x, const Point& v) const;
    OneForm scaled(double s) const;
};

OneForm operator-(const OneForm& a, const OneForm& b);

///
/// Components in the basis dx1^dx3, dx2^dx3, dx1^dx2. A 2-D two-form keeps its single
/// dz1^dz2 component in d3.
///
struct TwoForm
{
    ScalarField d1, d2, d3;
    int dim = 3;

    Point at(const Point& x) const;
    double norm_at(const Point& x) const;
    /// Value on the pair of tangent vectors (u, v).
    double apply(const Point& x, const Point& u, const Point& v) const;
};

/// Coefficient of dx1^dx2^dx3.
struct ThreeForm
{
    ScalarField v;
};

/// h == 0 uses each chart axis's default step (only relevant for non-analytic sources).
TwoForm exterior_derivative(const OneForm& eta, double h = 0.0);

ThreeForm wedge13(const OneForm& eta, const TwoForm& omega);

struct SupNorm
{
    double value = 0.0;
    Point at{};
};

SupNorm sup_norm(const ScalarField& f, const Grid& region);
SupNorm sup_norm(const OneForm& f, const Grid& region);
SupNorm sup_norm(const TwoForm& f, const Grid& region);
SupNorm sup_norm(const ThreeForm& f, const Grid& region);
/// Sup over the grid of an arbitrary pointwise nonnegative quantity.
SupNorm sup_over(const Grid& region, const std::function<double(const Point&)>& fn);

struct VectorField
{
    std::array<ScalarField, 3> c;

    Point at(const Point& x) const;
};

/// Lie bracket [X, Y] at x by central differences of step h.
Point lie_bracket(const VectorField& X, const VectorField& Y, const Point& x, double h);

///
/// |d eta(X, Y) + eta([X, Y])| at x. d eta comes from exterior_derivative (exact for
/// analytic coefficients); the bracket uses central differences of step h.
///
double cartan_residual(const OneForm& eta, const VectorField& X, const VectorField& Y, const Point& x, double h);

} // namespace frobkit
