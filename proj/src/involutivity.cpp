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
#include <frobkit/involutivity.hpp>
#include <frobkit/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace frobkit {

const char* to_string(Provenance p)
{
    return p == Provenance::MollifiedFromTarget ? "mollified-from-target" : "user-supplied";
}

const char* to_string(Trend t)
{
    switch (t) {
    case Trend::Decreasing: return "decreasing";
    case Trend::NonDecreasing: return "non-decreasing";
    case Trend::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

ScalarField smoothed(const ScalarField& f, double eps)
{
    if (f.smoothness() != Smoothness::Continuous) return f;
    return mollify(f, eps);
}

void check_region(const Chart& chart, const Grid& region)
{
    const Chart inner = chart.interior();
    for (int a = 0; a < chart.dim(); ++a) {
        const double tol = 1e-12 * chart.width(a);
        if (region.box(a).lo < inner.bounds(a).lo - tol || region.box(a).hi > inner.bounds(a).hi + tol) {
            throw Error(ErrorCode::OutOfBounds, "verification region must lie inside the chart interior (margins)");
        }
    }
}

} // namespace

ApproxSequence ApproxSequence::mollified(const OneForm& target, const MollifierSchedule& schedule)
{
    schedule.validate();
    ApproxSequence seq;
    seq.target = target;
    seq.provenance = Provenance::MollifiedFromTarget;
    for (double eps : schedule.scales) {
        OneForm f = target.dim() == 2
                        ? OneForm::make2d(smoothed(target.p, eps), smoothed(target.q, eps))
                        : OneForm::make(smoothed(target.p, eps), smoothed(target.q, eps), smoothed(target.r, eps));
        seq.approximants.push_back({eps, std::move(f)});
    }
    return seq;
}

void ApproxSequence::validate() const
{
    if (approximants.empty()) throw Error(ErrorCode::InvalidArgument, "approximating sequence is empty");
    for (std::size_t k = 0; k < approximants.size(); ++k) {
        const auto& a = approximants[k];
        if (k > 0 && !(a.scale < approximants[k - 1].scale)) {
            throw Error(ErrorCode::InvalidArgument, "approximant scales must be strictly decreasing");
        }
        if (a.form.smoothness() == Smoothness::Continuous) {
            throw Error(ErrorCode::NotDifferentiable,
                        "approximant " + std::to_string(k) + " has a continuous coefficient; approximants must be C1");
        }
        if (a.form.dim() != target.dim()) throw Error(ErrorCode::InvalidArgument, "approximant dimension differs from target");
    }
}

double capped_t0(const Chart& chart, double t0)
{
    return std::min({t0, 1.0, chart.min_margin()});
}

std::vector<PlainDefect> plain_defects(const ApproxSequence& seq, const Grid& region)
{
    seq.validate();
    check_region(seq.target.chart(), region);
    std::vector<PlainDefect> rows;
    for (const auto& a : seq.approximants) {
        PlainDefect row;
        row.eps = a.scale;
        const TwoForm deta = exterior_derivative(a.form);
        row.distance = sup_norm(a.form - seq.target, region).value;
        row.deta_norm = sup_norm(deta, region).value;
        row.wedge_norm = a.form.dim() == 3 ? sup_norm(wedge13(a.form, deta), region).value : 0.0;
        const double e = std::exp(row.deta_norm);
        row.defect = row.wedge_norm * e;
        row.uniform = row.distance * e;
        rows.push_back(row);
    }
    return rows;
}

std::vector<AveragedDefect> averaged_defects(const ApproxSequence& seq, const Grid& region, double t0,
                                             const AveragingOptions& opt)
{
    seq.validate();
    const Chart& chart = seq.target.chart();
    check_region(chart, region);
    if (!(t0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "t0 must be positive");
    if (opt.t_samples < 9) throw Error(ErrorCode::InvalidArgument, "at least 9 t samples are required");
    t0 = capped_t0(chart, t0);
    const double step = opt.step > 0.0 ? opt.step : t0 / 1000.0;
    const int n = opt.t_samples;
    std::vector<double> ts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = -t0 + 2.0 * t0 * i / (n - 1);
    if (n % 2 == 1) ts[static_cast<std::size_t>(n / 2)] = 0.0;
    ts.back() = t0;

    std::vector<AveragedDefect> rows;
    for (const auto& a : seq.approximants) {
        const TwoForm deta = exterior_derivative(a.form);
        const CanonicalFrame frame = canonical_frame(a.form);
        const bool three = a.form.dim() == 3;
        const ScalarField wedge = three ? wedge13(a.form, deta).v : ScalarField::constant(0.0, chart);
        const OneForm diff = a.form - seq.target;
        struct Local
        {
            double defect, uniform, exponent, defect_abs, uniform_abs;
        };
        std::vector<Local> local(region.size());
        parallel_for(region.size(), [&](std::size_t i) {
            const Point x = region.node(i);
            const double w = std::fabs(wedge(x));
            const double dist = diff.norm_at(x);
            const auto ds = averaged_d_batch(deta, frame, x, ts, step);
            Local l{0.0, 0.0, -INFINITY, 0.0, 0.0};
            for (const auto& d : ds) {
                const double e = std::exp(d.d);
                const double ea = std::exp(d.d_abs);
                l.defect = std::max(l.defect, w * e);
                l.uniform = std::max(l.uniform, dist * e);
                l.defect_abs = std::max(l.defect_abs, w * ea);
                l.uniform_abs = std::max(l.uniform_abs, dist * ea);
                l.exponent = std::max(l.exponent, d.d);
            }
            local[i] = l;
        });
        AveragedDefect row;
        row.eps = a.scale;
        row.max_exponent = -INFINITY;
        for (const auto& l : local) {
            row.defect = std::max(row.defect, l.defect);
            row.uniform = std::max(row.uniform, l.uniform);
            row.defect_abs = std::max(row.defect_abs, l.defect_abs);
            row.uniform_abs = std::max(row.uniform_abs, l.uniform_abs);
            row.max_exponent = std::max(row.max_exponent, l.exponent);
        }
        rows.push_back(row);
    }
    return rows;
}

TrendVerdict classify_trend(const std::string& condition, const std::vector<double>& values)
{
    TrendVerdict v;
    v.condition = condition;
    v.values = values;
    const std::size_t n = values.size();
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "trend classification needs at least three values");
    if (std::all_of(values.begin(), values.end(), [](double x) { return std::fabs(x) <= 1e-12; })) {
        v.verdict = Trend::Decreasing;
        v.identically_zero = true;
        v.log_slope = 0.0;
        v.rationale = "identically zero (every value <= 1e-12)";
        return v;
    }
    double mk = 0.0, ml = 0.0;
    std::vector<double> logs(n);
    for (std::size_t k = 0; k < n; ++k) {
        logs[k] = std::log(std::max(values[k], 1e-300));
        mk += static_cast<double>(k);
        ml += logs[k];
    }
    mk /= static_cast<double>(n);
    ml /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxy += (static_cast<double>(k) - mk) * (logs[k] - ml);
        sxx += (static_cast<double>(k) - mk) * (static_cast<double>(k) - mk);
    }
    v.log_slope = sxy / sxx;
    const double a = values[n - 3], b = values[n - 2], c = values[n - 1];
    char buf[160];
    if (b < a && c < b && v.log_slope < -0.1) {
        v.verdict = Trend::Decreasing;
        std::snprintf(buf, sizeof buf, "last three values strictly decrease and the log-slope per step is %.3g", v.log_slope);
    } else if (b >= a * (1.0 - 1e-9) && c >= b * (1.0 - 1e-9)) {
        v.verdict = Trend::NonDecreasing;
        std::snprintf(buf, sizeof buf, "last three values do not decrease (log-slope per step %.3g)", v.log_slope);
    } else {
        v.verdict = Trend::Inconclusive;
        std::snprintf(buf, sizeof buf, "mixed trend over the last three values (log-slope per step %.3g)", v.log_slope);
    }
    v.rationale = buf;
    return v;
}

bool CertificationReport::any_non_decreasing() const
{
    return std::any_of(verdicts.begin(), verdicts.end(), [](const TrendVerdict& v) { return v.verdict == Trend::NonDecreasing; });
}

CertificationReport certify(const ApproxSequence& seq, const Grid& region, double t0, const AveragingOptions& opt)
{
    seq.validate();
    if (seq.approximants.size() < 4) throw Error(ErrorCode::InvalidArgument, "certification needs at least 4 approximants");
    CertificationReport r;
    r.provenance = seq.provenance;
    r.t0_requested = t0;
    r.t0 = capped_t0(seq.target.chart(), t0);
    r.t_samples = opt.t_samples;
    r.step = opt.step > 0.0 ? opt.step : r.t0 / 1000.0;
    r.region_points = region.size();
    r.plain = plain_defects(seq, region);
    r.averaged = averaged_defects(seq, region, t0, opt);

    std::vector<double> plain, uniform, avg, avg_uniform;
    for (const auto& row : r.plain) {
        plain.push_back(row.defect);
        uniform.push_back(row.uniform);
    }
    for (const auto& row : r.averaged) {
        avg.push_back(row.defect);
        avg_uniform.push_back(row.uniform);
    }
    r.verdicts.push_back(classify_trend("asymptotically involutive", plain));
    r.verdicts.push_back(classify_trend("uniformly asymptotically involutive", uniform));
    r.verdicts.push_back(classify_trend("asymptotically involutive on average", avg));
    r.verdicts.push_back(classify_trend("uniformly asymptotically involutive on average", avg_uniform));

    r.notes.push_back("Verdicts are numerical evidence from a finite sequence; no finite computation proves a limit.");
    r.notes.push_back("Norms are Euclidean sups over the region grid nodes.");
    r.notes.push_back("Averaged defects take the sup over region nodes x and equispaced t in [-t0, t0] of the pointwise "
                      "norm at x times exp(max(d~1, d~2)) with signed integrals; the |d~| variant is reported only.");
    if (r.t0 < t0) r.notes.push_back("t0 was capped at min(1, smallest chart margin).");
    if (seq.target.dim() == 2) r.notes.push_back("On a 2-D chart eta ^ d eta vanishes identically.");
    return r;
}

} // namespace frobkit
