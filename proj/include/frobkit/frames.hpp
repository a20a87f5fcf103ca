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

#include <frobkit/forms.hpp>

namespace frobkit {

///
/// Kernel frame X = d1 + a d3, Y = d2 + b d3 of a form transversal to d3.
/// On a 2-D chart only `a` is set and X = d1 + a d2.
///
struct CanonicalFrame
{
    ScalarField a, b;

    int dim() const { return a.chart().dim(); }
    const Chart& chart() const { return a.chart(); }
    Smoothness smoothness() const;
    VectorField X() const;
    VectorField Y() const;

    static CanonicalFrame analytic(const std::string& a, const std::string& b, const Chart& chart,
                                   Smoothness s = Smoothness::C2);
    static CanonicalFrame analytic2d(const std::string& a, const Chart& chart, Smoothness s = Smoothness::C2);
};

/// The transversal coefficient: r on 3-D charts, q on 2-D charts.
const ScalarField& transversal_coefficient(const OneForm& eta);

/// a = -p/r, b = -q/r after checking min |r| > 1e-8 * chart scale on a 21^dim grid.
CanonicalFrame canonical_frame(const OneForm& eta);

/// The constant s with s*r >= 1 on the region: sign(r) / min |r|.
double normalization_scale(const OneForm& eta, const Grid& region);
OneForm normalize(const OneForm& eta, const Grid& region);

/// Signed d3 coefficient of [X, Y]: d1 b - d2 a + a d3 b - b d3 a.
double bracket_h(const CanonicalFrame& frame, const Point& x, double h = 0.0);
ScalarField bracket_h_field(const CanonicalFrame& frame, double h = 0.0);

} // namespace frobkit
