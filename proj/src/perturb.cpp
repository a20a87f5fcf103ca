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
#include <frobkit/perturb.hpp>
#include <frobkit/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace frobkit {

namespace {

void require_3d(const CanonicalFrame& frame)
{
    if (frame.dim() != 3) throw Error(ErrorCode::InvalidArgument, "the alpha perturbation needs a 3-D frame");
}

// Y-curve from x back to the section. Node i sits at s_i in [0, -t_x]; it is Y_x(t_x + s_i).
struct BackCurve
{
    double t = 0.0;
    Trajectory traj;
    /// int_0^{s_i} d3 b ds (signed), so exp(-cum[i]) = exp(int_{tau_i}^{t_x} d3 b).
    std::vector<double> cum;
};

BackCurve back_curve(const CanonicalFrame& frame, const Point& x, double section, double step)
{
    BackCurve c;
    c.t = x[1] - section;
    c.traj = trajectory(frame, Direction::Y, x, -c.t, step);
    c.cum.assign(c.traj.times.size(), 0.0);
    double prev = partial(frame.b, 2, c.traj.points[0]);
    for (std::size_t i = 1; i < c.cum.size(); ++i) {
        const double cur = partial(frame.b, 2, c.traj.points[i]);
        c.cum[i] = c.cum[i - 1] + 0.5 * (c.traj.times[i] - c.traj.times[i - 1]) * (prev + cur);
        prev = cur;
    }
    return c;
}

std::vector<double> symmetric_times(double t0, int n)
{
    std::vector<double> ts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = -t0 + 2.0 * t0 * i / (n - 1);
    if (n % 2 == 1) ts[static_cast<std::size_t>(n / 2)] = 0.0;
    ts.back() = t0;
    return ts;
}

double max_exponent(const std::vector<AveragedD>& ds)
{
    double m = -INFINITY;
    for (const auto& d : ds) m = std::max(m, d.d);
    return m;
}

double norm3(const Point& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

} // namespace

double alpha(const CanonicalFrame& frame, const Point& x, double section, double step)
{
    require_3d(frame);
    if (x[1] == section) return 0.0;
    const BackCurve c = back_curve(frame, x, section, step);
    // alpha = int_{-t}^{0} g ds = -int_0^{-t} g ds with g = h exp(-cum)
    double acc = 0.0;
    double prev = bracket_h(frame, c.traj.points[0]) * std::exp(-c.cum[0]);
    for (std::size_t i = 1; i < c.cum.size(); ++i) {
        const double cur = bracket_h(frame, c.traj.points[i]) * std::exp(-c.cum[i]);
        acc += 0.5 * (c.traj.times[i] - c.traj.times[i - 1]) * (prev + cur);
        prev = cur;
    }
    return -acc;
}

ScalarField alpha_field(const CanonicalFrame& frame, double section, double step)
{
    require_3d(frame);
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    return ScalarField::function([frame, section, step](const Point& x) { return alpha(frame, x, section, step); },
                                 frame.chart(), Smoothness::C1, 0b111u, {}, "alpha");
}

CanonicalFrame perturbed_frame(const CanonicalFrame& frame, const ScalarField& alpha)
{
    return {frame.a + alpha, frame.b};
}

OneForm frame_form(const CanonicalFrame& frame)
{
    require_3d(frame);
    return OneForm::make(-frame.a, -frame.b, ScalarField::constant(1.0, frame.chart()));
}

SupNorm involutivity_residual(const CanonicalFrame& frame, const ScalarField& alpha, const Grid& region, double step)
{
    require_3d(frame);
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    return sup_over(region, [&](const Point& x) {
        const double fwd = alpha(flow(frame, Direction::Y, x, step, step));
        const double bwd = alpha(flow(frame, Direction::Y, x, -step, step));
        const double y_alpha = (fwd - bwd) / (2.0 * step);
        return std::fabs(bracket_h(frame, x) + alpha(x) * partial(frame.b, 2, x) - y_alpha);
    });
}

BoundReport bound_check(const OneForm& eta, const CanonicalFrame& frame, const ScalarField& alpha, const Grid& region,
                        double t0, double section, double step, const BoundOptions& opt)
{
    require_3d(frame);
    if (!(t0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "t0 must be positive");
    if (opt.t_samples < 2 || opt.lemma_points < 1) throw Error(ErrorCode::InvalidArgument, "bad sampling options");
    const TwoForm deta = exterior_derivative(eta);
    const ThreeForm wedge = wedge13(eta, deta);
    const std::vector<double> ts = symmetric_times(t0, opt.t_samples);
    const VectorField X = frame.X(), Y = frame.Y();

    BoundReport rep;
    const SupNorm sa = sup_norm(alpha, region);
    rep.sup_alpha = sa.value;
    rep.sup_alpha_at = sa.at;
    rep.min_c = INFINITY;
    for (std::size_t i = 0; i < region.size(); ++i) rep.min_c = std::min(rep.min_c, eta.r(region.node(i)));

    struct Local
    {
        double bound = 0.0, r1 = 0.0, r2 = 0.0;
        std::size_t v1 = 0, v2 = 0, n = 0;
    };
    std::vector<Local> local(region.size());
    const auto violates = [&](double lhs, double rhs) { return lhs > rhs * (1.0 + opt.rel_slack) + opt.abs_slack; };
    const auto ratio = [](double lhs, double rhs) { return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0); };
    parallel_for(region.size(), [&](std::size_t i) {
        const Point x = region.node(i);
        Local l;
        const double e = max_exponent(averaged_d_batch(deta, frame, x, ts, step));
        l.bound = eta.norm_at(x) * std::fabs(wedge.v(x)) * std::exp(e);
        if (x[1] != section) {
            const BackCurve c = back_curve(frame, x, section, step);
            const std::size_t m = c.traj.points.size();
            for (int j = 0; j < opt.lemma_points; ++j) {
                const std::size_t k = opt.lemma_points == 1 ? m - 1 : (m - 1) * static_cast<std::size_t>(j) /
                                                                       static_cast<std::size_t>(opt.lemma_points - 1);
                const Point& y = c.traj.points[k];
                const double lhs1 = std::fabs(bracket_h(frame, y));
                const double rhs1 = norm3(X.at(y)) * norm3(Y.at(y)) * std::fabs(wedge.v(y));
                const double lhs2 = std::exp(-c.cum[k]);
                const double s = -c.traj.times[k];
                const double rhs2 = eta.norm_at(y) * std::exp(s == 0.0 ? 0.0 : averaged_d(deta, frame, y, s, step).d);
                l.r1 = std::max(l.r1, ratio(lhs1, rhs1));
                l.r2 = std::max(l.r2, ratio(lhs2, rhs2));
                l.v1 += violates(lhs1, rhs1);
                l.v2 += violates(lhs2, rhs2);
                ++l.n;
            }
        }
        local[i] = l;
    });
    for (const auto& l : local) {
        rep.bound = std::max(rep.bound, l.bound);
        rep.bracket_ratio = std::max(rep.bracket_ratio, l.r1);
        rep.exponential_ratio = std::max(rep.exponential_ratio, l.r2);
        rep.bracket_violations += l.v1;
        rep.exponential_violations += l.v2;
        rep.lemma_samples += l.n;
    }
    rep.satisfied = !violates(rep.sup_alpha, rep.bound);
    rep.lemmas_satisfied = rep.bracket_violations == 0 && rep.exponential_violations == 0;
    if (rep.min_c < 1.0 - 1e-12) rep.notes.push_back("eta is not normalized: the dx3 coefficient drops below 1 on the region");
    rep.notes.push_back("The bound's sup is taken over the verification region, not the full neighbourhood.");
    return rep;
}

PerturbationResult perturb(const OneForm& eta, const Grid& region, double t0, double section, double step)
{
    PerturbationResult r;
    const CanonicalFrame frame = canonical_frame(eta);
    r.alpha = alpha_field(frame, section, step);
    r.perturbed = perturbed_frame(frame, r.alpha);
    r.residual = involutivity_residual(frame, r.alpha, region, step);
    r.bound = bound_check(eta, frame, r.alpha, region, t0, section, step);
    return r;
}

Rescaling rescale_closed_2d(const OneForm& w, const Grid& region, double section, double step, double rel_slack)
{
    if (w.dim() != 2) throw Error(ErrorCode::InvalidArgument, "rescale_closed_2d needs a 2-D form");
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    Rescaling out;
    out.scale = normalization_scale(w, region);
    if (std::fabs(out.scale) < 1.0) out.scale = out.scale > 0.0 ? 1.0 : -1.0;
    const OneForm wn = w.scaled(out.scale);
    const CanonicalFrame frame = canonical_frame(wn);
    const ScalarField b = frame.a;

    out.beta = ScalarField::function(
        [frame, b, section, step](const Point& z) {
            const double t = z[0] - section;
            if (t == 0.0) return 1.0;
            const Trajectory tr = trajectory(frame, Direction::X, z, -t, step);
            double acc = 0.0;
            double prev = partial(b, 1, tr.points[0]);
            for (std::size_t i = 1; i < tr.points.size(); ++i) {
                const double cur = partial(b, 1, tr.points[i]);
                acc += 0.5 * (tr.times[i] - tr.times[i - 1]) * (prev + cur);
                prev = cur;
            }
            return std::exp(acc);
        },
        wn.chart(), Smoothness::C1, 0b011u, {}, "beta");
    out.w_hat = OneForm::make2d(-(out.beta * b), out.beta);
    out.closedness = sup_norm(exterior_derivative(out.w_hat, step).d3, region);

    for (std::size_t i = 0; i < region.size(); ++i) {
        const Point z = region.node(i);
        Point on = z;
        on[0] = section;
        out.section_error = std::max(out.section_error, std::fabs(out.beta(on) - 1.0));
    }
    const TwoForm dw = exterior_derivative(wn);
    std::vector<double> ratios(region.size(), 0.0), mismatch(region.size(), 0.0);
    parallel_for(region.size(), [&](std::size_t i) {
        const Point z = region.node(i);
        const Point hat = out.w_hat.at(z), orig = w.at(z);
        mismatch[i] = std::fabs(hat[0] * orig[1] - hat[1] * orig[0]) / (norm3(hat) * norm3(orig));
        // t restricted to the segment from 0 to -t_z: flows stay in the region's X-saturation,
        // and a sup over fewer t only makes the check stricter
        std::vector<double> ts;
        for (int k = 1; k <= 8; ++k) ts.push_back(-(z[0] - section) * k / 8.0);
        const double e = max_exponent(averaged_d_batch(dw, frame, z, ts, step));
        ratios[i] = norm3(hat) / (std::exp(e) * wn.norm_at(z));
    });
    out.kernel_mismatch = *std::max_element(mismatch.begin(), mismatch.end());
    out.norm_ratio = *std::max_element(ratios.begin(), ratios.end());
    out.norm_bound_satisfied = out.norm_ratio <= 1.0 + rel_slack;
    return out;
}

} // namespace frobkit
