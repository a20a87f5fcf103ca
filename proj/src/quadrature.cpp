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
#include <frobkit/error.hpp>
#include <frobkit/quadrature.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace frobkit {

Quadrature integrate(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    if (a == b) return {};
    // Boost compares its unscaled Kronrod-Gauss gap against a tolerance scaled by the
    // interval, which recurses to full depth on short intervals. Integrating over the
    // reference interval keeps both on the same footing.
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto g = [&](double s) { return f(mid + half * s); };
    double err = 0.0;
    double l1 = 0.0;
    const double v = half * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, -1.0, 1.0, 15, rel_tol,
                                                                                          &err, &l1);
    if (!std::isfinite(v)) throw Error(ErrorCode::Numerical, "quadrature produced a non-finite value");
    err *= std::fabs(half);
    l1 *= std::fabs(half);
    if (err > 1e-6 * l1 && err > 1e-300) {
        throw Error(ErrorCode::Numerical, "quadrature did not converge on [" + std::to_string(a) + ", " +
                                              std::to_string(b) + "]");
    }
    return {v, err};
}

Quadrature integrate_from_zero(const std::function<double(double)>& f, double eps, double floor, double rel_tol)
{
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "integration bound must be positive");
    Quadrature out;
    double hi = eps;
    while (hi > floor) {
        const double lo = std::max(0.5 * hi, floor);
        const Quadrature cell = integrate(f, lo, hi, rel_tol);
        out.value += cell.value;
        out.error += cell.error;
        hi = lo;
    }
    double sup = 0.0;
    for (int k = 0; k <= 8; ++k) sup = std::max(sup, std::fabs(f(hi * std::ldexp(1.0, -k))));
    out.error += hi * sup;
    return out;
}

} // namespace frobkit
