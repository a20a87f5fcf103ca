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

#include <functional>

namespace frobkit {

struct Quadrature
{
    double value = 0.0;
    /// Kronrod error estimate plus any truncation bar.
    double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b].
Quadrature integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

///
/// Integral over (0, eps] for integrands that may be singular at 0. The interval is cut
/// into geometric cells [eps 2^-(k+1), eps 2^-k] down to `floor`; the remaining cell
/// (0, floor] is not integrated and contributes floor * sup f on it to the error bar,
/// the sup taken over a few sample points.
///
Quadrature integrate_from_zero(const std::function<double(double)>& f, double eps, double floor = 1e-12,
                               double rel_tol = 1e-12);

} // namespace frobkit
