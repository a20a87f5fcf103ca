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

#include <frobkit/involutivity.hpp>

#include <iosfwd>
#include <vector>

namespace frobkit {

///
/// Image of [-eps, eps]^2 under (s1, s2) -> e^{s1 X} e^{s2 Y}(base), node (i, j) at
/// s1 = -eps + 2 eps i / (n1 - 1) and likewise s2. On a 2-D chart n2 is 1 and the
/// mesh is the X-curve through the base.
///
struct SurfaceMesh
{
    Point base{};
    double eps = 0.0;
    int n1 = 0, n2 = 0;
    int dim = 3;
    /// Index i * n2 + j.
    std::vector<Point> points;
    /// Filled by tangency_residual; empty otherwise.
    std::vector<double> angles;

    double s1(int i) const;
    double s2(int j) const;
    const Point& at(int i, int j) const { return points[static_cast<std::size_t>(i * n2 + j)]; }
};

enum class Order { YThenX, XThenY };

/// Resolutions must be odd so the centre node is the base point.
SurfaceMesh synthesize(const CanonicalFrame& frame, const Point& x, double eps, int n1, int n2, double step,
                       Order order = Order::YThenX);

struct Tangency
{
    /// |sin| of the angle between the mesh normal and the covector, radians, every node.
    std::vector<double> angles;
    /// Sup over interior nodes.
    double sup = 0.0;
    int sup_i = 0, sup_j = 0;
    /// Nodes whose tangent plane was numerically singular (excluded from the sup).
    std::size_t degenerate = 0;
};

/// Tangent vectors by central differences of the mesh map (one-sided second order on the rim).
Tangency tangency_residual(const SurfaceMesh& mesh, const OneForm& eta);

/// Sup distance between the Y-then-X and X-then-Y meshes.
double holonomy(const CanonicalFrame& frame, const Point& x, double eps, int n1, int n2, double step);

struct ConvergenceReport
{
    /// sup node distance between meshes k and k + 1.
    std::vector<double> successive;
    bool cauchy_like = false;
    double final_tangency = 0.0;
    /// final_tangency <= tangency_tol.
    bool limit_tangent = false;
    double tangency_tol = 1e-3;
};

ConvergenceReport convergence_report(const std::vector<SurfaceMesh>& meshes, const OneForm& target,
                                     double tangency_tol = 1e-3);

/// One mesh per approximant of the sequence, through the same base point.
std::vector<SurfaceMesh> synthesize_sequence(const ApproxSequence& seq, const Point& x, double eps, int n1, int n2,
                                             double step);

/// Rows i,j,s1,s2,x1,x2,x3,angle (angle column empty when not computed).
void write_csv(const SurfaceMesh& mesh, std::ostream& out);

} // namespace frobkit
