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

#include <frobkit/flow.hpp>

#include <string>
#include <vector>

namespace frobkit {

///
/// alpha(x) = int_0^{t_x} h(Y_x(tau)) exp(int_tau^{t_x} d3 b(Y_x(s)) ds) dtau along the
/// Y-curve from the section {x2 = section} to x. Both integrals are trapezoids on the
/// trajectory nodes. 3-D frames only.
///
double alpha(const CanonicalFrame& frame, const Point& x, double section, double step);

/// alpha as a lazily evaluated C1 field.
ScalarField alpha_field(const CanonicalFrame& frame, double section, double step);

/// Frame with a' = a + alpha.
CanonicalFrame perturbed_frame(const CanonicalFrame& frame, const ScalarField& alpha);

/// dx3 - a dx1 - b dx2, the form with c = 1 whose kernel the frame spans.
OneForm frame_form(const CanonicalFrame& frame);

/// sup over the region of |h + alpha d3 b - Y(alpha)|, with Y(alpha) a central difference
/// of step `step` along the Y-flow.
SupNorm involutivity_residual(const CanonicalFrame& frame, const ScalarField& alpha, const Grid& region, double step);

struct BoundReport
{
    double sup_alpha = 0.0;
    Point sup_alpha_at{};
    /// sup over region x {t_i} of |eta|_x |eta ^ d eta|_x e^{d~(x, t)}.
    double bound = 0.0;
    /// sup_alpha within the slack of the bound.
    bool satisfied = false;
    bool lemmas_satisfied = false;
    /// Intermediate estimates (bracket size, exponential factor) at sampled trajectory points:
    /// largest lhs / rhs and violation count.
    double bracket_ratio = 0.0;
    std::size_t bracket_violations = 0;
    double exponential_ratio = 0.0;
    std::size_t exponential_violations = 0;
    std::size_t lemma_samples = 0;
    double min_c = 0.0;
    std::vector<std::string> notes;
};

struct BoundOptions
{
    int t_samples = 9;
    /// Points per trajectory for the lemma checks.
    int lemma_points = 5;
    double rel_slack = 0.01;
    double abs_slack = 1e-6;
};

/// eta is expected normalized (c >= 1 on the region); a smaller c is reported, not fixed.
BoundReport bound_check(const OneForm& eta, const CanonicalFrame& frame, const ScalarField& alpha,
                        const Grid& region, double t0, double section, double step, const BoundOptions& opt = {});

struct PerturbationResult
{
    ScalarField alpha;
    CanonicalFrame perturbed;
    SupNorm residual;
    BoundReport bound;
};

/// alpha, its PDE residual and the norm bound for the frame of a (normalized) form.
PerturbationResult perturb(const OneForm& eta, const Grid& region, double t0, double section, double step);

struct Rescaling
{
    /// w^ = beta (dz2 - b dz1).
    OneForm w_hat;
    ScalarField beta;
    /// sup |d w^| over the region, derivatives by central differences of `step`.
    SupNorm closedness;
    /// sup |beta - 1| at region z1 nodes moved onto the section.
    double section_error = 0.0;
    /// sup |p^ q - q^ p| / (|w^| |w|): kernel agreement.
    double kernel_mismatch = 0.0;
    /// Worst |w^|_z / (sup_t e^{d~w(z,t)} |w|_z).
    double norm_ratio = 0.0;
    bool norm_bound_satisfied = false;
    double scale = 1.0;
};

///
/// 2-D closed rescaling with beta(z) = exp(-int_0^{t_z} d2 b(e^{(tau - t_z)X} z) dtau),
/// t_z = z1 - section. w is first scaled by a constant so that c >= 1 on the region.
///
Rescaling rescale_closed_2d(const OneForm& w, const Grid& region, double section, double step,
                            double rel_slack = 0.01);

} // namespace frobkit
