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

#include <cstdint>
#include <utility>
#include <vector>

namespace frobkit {

///
/// Modulus of continuity: an expression in t, or piecewise-linear through empirical
/// (scale, sup increment) samples with omega(0) = 0 and held constant past the last scale.
///
class Modulus
{
public:
    Modulus() = default;
    static Modulus analytic(const Expression& e);
    static Modulus analytic(std::string_view text);
    static Modulus empirical(std::vector<std::pair<double, double>> samples);

    double operator()(double t) const;
    bool is_analytic() const { return m_expr.valid(); }
    const std::vector<std::pair<double, double>>& samples() const { return m_samples; }
    std::string describe() const;

    /// Integral of omega over (0, eps].
    double integral(double eps) const;

private:
    Expression m_expr;
    std::vector<std::pair<double, double>> m_samples;
};

struct MollifierSchedule
{
    std::vector<double> scales;

    /// Throws unless scales are positive and strictly decreasing.
    void validate() const;
};

/// Lattice spacing of the convolution quadrature as a fraction of eps (129 nodes per axis).
inline constexpr double kLatticeFraction = 1.0 / 64.0;

///
/// g convolved with the bump exp(-1/(1 - |u|^2)) of radius eps, acting only on the axes
/// g depends on. The convolution is a sum over the fixed lattice (eps/64) Z^k with the
/// kernel renormalised to unit discrete mass; g is evaluated at lattice nodes clamped to
/// the chart. The result is C2-tagged and differentiates exactly.
///
ScalarField mollify(const ScalarField& g, double eps);

struct MollifierRow
{
    double eps = 0.0;
    double sup_err = 0.0;
    double sup_deriv = 0.0;
    /// Integral of omega over (0, eps].
    double omega_integral = 0.0;
    /// (1/eps) * integral and (1/eps^2) * integral, the two bounds at K = 1.
    double err_bound_unit = 0.0;
    double deriv_bound_unit = 0.0;
    double k_err = 0.0;
    double k_deriv = 0.0;
};

struct MollifierBoundReport
{
    std::vector<MollifierRow> rows;
    /// Smallest K making every row's two bounds hold.
    double fitted_k = 0.0;
    bool consistent = false;
    /// Least-squares slope of log sup_deriv against log eps (NaN if undefined).
    double deriv_log_slope = 0.0;
    std::size_t modulus_pairs_checked = 0;
    std::size_t sample_points = 0;
};

struct MollifierCheckOptions
{
    std::size_t min_samples = 10000;
    std::size_t modulus_pairs = 10000;
    std::uint64_t seed = 20240917;
    double k_limit = 100.0;
};

///
/// Sup of |g^eps - g| and |grad g^eps| over the chart interior against the two bounds,
/// after spot-checking omega against g on random pairs.
///
MollifierBoundReport verify_mollifier_bounds(const ScalarField& g, const Modulus& omega,
                                             const MollifierSchedule& schedule, const MollifierCheckOptions& opt = {});

/// Empirical modulus: sup |g(x) - g(y)| over sampled pairs with |x - y| <= t, per scale.
Modulus estimate_modulus(const ScalarField& g, const std::vector<double>& scales, std::size_t pairs = 10000,
                         std::uint64_t seed = 20240917);

} // namespace frobkit
