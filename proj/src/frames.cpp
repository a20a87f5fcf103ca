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
#include <frobkit/frames.hpp>
#include <frobkit/parallel.hpp>

#include <cmath>
#include <vector>

namespace frobkit {

Smoothness CanonicalFrame::smoothness() const
{
    return dim() == 2 ? a.smoothness() : weakest(a.smoothness(), b.smoothness());
}

VectorField CanonicalFrame::X() const
{
    const auto one = ScalarField::constant(1.0, chart());
    const auto zero = ScalarField::constant(0.0, chart());
    if (dim() == 2) return VectorField{{one, a, zero}};
    return VectorField{{one, zero, a}};
}

VectorField CanonicalFrame::Y() const
{
    const auto one = ScalarField::constant(1.0, chart());
    const auto zero = ScalarField::constant(0.0, chart());
    if (dim() == 2) throw Error(ErrorCode::InvalidArgument, "a 2-D frame has no Y field");
    return VectorField{{zero, one, b}};
}

CanonicalFrame CanonicalFrame::analytic(const std::string& a, const std::string& b, const Chart& chart, Smoothness s)
{
    if (chart.dim() != 3) throw Error(ErrorCode::InvalidArgument, "frame (a, b) needs a 3-D chart");
    return CanonicalFrame{ScalarField::analytic(a, chart, s), ScalarField::analytic(b, chart, s)};
}

CanonicalFrame CanonicalFrame::analytic2d(const std::string& a, const Chart& chart, Smoothness s)
{
    if (chart.dim() != 2) throw Error(ErrorCode::InvalidArgument, "frame (a) needs a 2-D chart");
    return CanonicalFrame{ScalarField::analytic(a, chart, s), ScalarField()};
}

const ScalarField& transversal_coefficient(const OneForm& eta)
{
    return eta.dim() == 2 ? eta.q : eta.r;
}

namespace {

void check_transversal(const OneForm& eta)
{
    const ScalarField& r = transversal_coefficient(eta);
    const Grid grid = Grid::over(eta.chart(), 21);
    const auto m = sup_over(grid, [&](const Point& x) { return -std::fabs(r(x)); });
    const double threshold = 1e-8 * eta.chart().scale();
    if (-m.value <= threshold) {
        throw TransversalityError("form is not transversal to the last coordinate axis: |r| = " +
                                      std::to_string(-m.value) + " at " + format_point(m.at, eta.dim()),
                                  m.at);
    }
}

ScalarField negated_ratio(const ScalarField& num, const ScalarField& den)
{
    if (auto c = num.constant_value(); c && *c == 0.0) return ScalarField::constant(0.0, num.chart());
    if (auto c = den.constant_value(); c && *c == 1.0) return -num;
    return -(num / den);
}

} // namespace

CanonicalFrame canonical_frame(const OneForm& eta)
{
    check_transversal(eta);
    if (eta.dim() == 2) return CanonicalFrame{negated_ratio(eta.p, eta.q), ScalarField()};
    return CanonicalFrame{negated_ratio(eta.p, eta.r), negated_ratio(eta.q, eta.r)};
}

double normalization_scale(const OneForm& eta, const Grid& region)
{
    const ScalarField& r = transversal_coefficient(eta);
    std::vector<double> values(region.size());
    parallel_for(region.size(), [&](std::size_t n) { values[n] = r(region.node(n)); });
    double lo = values[0];
    double hi = values[0];
    std::size_t at = 0;
    for (std::size_t n = 1; n < values.size(); ++n) {
        if (std::fabs(values[n]) < std::fabs(values[at])) at = n;
        lo = std::min(lo, values[n]);
        hi = std::max(hi, values[n]);
    }
    const double threshold = 1e-8 * eta.chart().scale();
    if ((lo <= 0.0 && hi >= 0.0) || std::fabs(values[at]) <= threshold) {
        throw TransversalityError("transversal coefficient vanishes or changes sign on the region", region.node(at));
    }
    return hi > 0.0 ? 1.0 / lo : 1.0 / hi;
}

OneForm normalize(const OneForm& eta, const Grid& region)
{
    const double s = normalization_scale(eta, region);
    if (s == 1.0) return eta;
    return eta.scaled(s);
}

namespace {

double dpart(const ScalarField& f, int axis, const Point& x, double h)
{
    if (!f.valid() || !(f.dependency_mask() & (1u << axis))) return 0.0;
    return partial(f, axis, x, h);
}

} // namespace

double bracket_h(const CanonicalFrame& frame, const Point& x, double h)
{
    if (frame.dim() != 3) throw Error(ErrorCode::InvalidArgument, "bracket magnitude needs a 3-D frame");
    const double db3 = dpart(frame.b, 2, x, h);
    const double da3 = dpart(frame.a, 2, x, h);
    double out = dpart(frame.b, 0, x, h) - dpart(frame.a, 1, x, h);
    if (db3 != 0.0) out += frame.a(x) * db3;
    if (da3 != 0.0) out -= frame.b(x) * da3;
    return out;
}

ScalarField bracket_h_field(const CanonicalFrame& frame, double h)
{
    if (frame.dim() != 3) throw Error(ErrorCode::InvalidArgument, "bracket magnitude needs a 3-D frame");
    if (frame.smoothness() == Smoothness::Continuous) {
        throw Error(ErrorCode::NotDifferentiable, "bracket magnitude needs a C1 frame");
    }
    return ScalarField::function([frame, h](const Point& x) { return bracket_h(frame, x, h); }, frame.chart(),
                                 differentiated(frame.smoothness()),
                                 frame.a.dependency_mask() | frame.b.dependency_mask(), {}, "h");
}

} // namespace frobkit
