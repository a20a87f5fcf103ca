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

#include <frobkit/surfaces.hpp>

#include <string>

namespace frobkit {

///
/// f_x = a(x, y, f), f_y = b(x, y, f) with f(x0, y0) = z0. The chart is the base
/// rectangle times the admissible z-interval; leaving the interval is a blow-up.
///
struct PfaffProblem
{
    ScalarField a, b;
    Point init{};

    const Chart& chart() const { return a.chart(); }
    void validate() const;

    static PfaffProblem analytic(const std::string& a, const std::string& b, const Chart& chart, const Point& init,
                                 Smoothness s = Smoothness::Continuous);
};

/// dz - a dx - b dy.
OneForm pfaff_form(const PfaffProblem& problem);

enum class SweepOrder { XFirst, YFirst };
const char* to_string(SweepOrder o);

///
/// Characteristic sweep on the nodes of a 2-D grid: x-first integrates X = d_x + a d_z
/// along y = y0, then Y = d_y + b d_z along every grid column. Returns a sampled field.
///
ScalarField solve(const PfaffProblem& problem, const Grid& grid, SweepOrder order, double step);

struct PfaffResidual
{
    double x = 0.0;
    double y = 0.0;
};

/// Sixth-order central differences of f on the grid nodes (h == 0) or at offsets h
/// from them, against a and b evaluated at (x, y, f). Nodes with a full stencil only.
PfaffResidual residual(const PfaffProblem& problem, const ScalarField& f, const Grid& grid, double h = 0.0);

/// sup |f_{x-first} - f_{y-first}| over the grid.
double uniqueness_crosscheck(const PfaffProblem& problem, const Grid& grid, double step);

/// Graph of f over a square grid with an odd node count, as a surface mesh centred on the grid.
SurfaceMesh graph_mesh(const ScalarField& f, const Grid& grid);

///
/// a = A(x, y) F(z), b = B(x, y) F(z) with F Lipschitz of declared constant.
///
struct StructuredCoefficients
{
    ScalarField A, B, F;
    double lipschitz = 0.0;

    /// Spot-check of the Lipschitz constant on random pairs; throws ModulusViolation.
    void validate(std::size_t pairs = 10000, unsigned long long seed = 20240917) const;

    static StructuredCoefficients analytic(const std::string& A, const std::string& B, const std::string& F,
                                           double lipschitz, const Chart& chart);
};

/// eta_k = dz - A_k F_k dx - B_k F_k dy with continuous factors mollified at eps_k (each
/// along its own variables only); target eta = dz - A F dx - B F dy.
ApproxSequence structured_sequence(const StructuredCoefficients& c, const MollifierSchedule& schedule);

/// sup |F_k'| over the z-interval for every approximant's F factor (k in schedule order).
std::vector<double> structured_f_derivative_sups(const StructuredCoefficients& c, const MollifierSchedule& schedule);

PfaffProblem structured_problem(const StructuredCoefficients& c, const Point& init);

} // namespace frobkit
