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
#include <frobkit/mollify.hpp>

#include <string>
#include <vector>

namespace frobkit {

enum class Provenance { MollifiedFromTarget, UserSupplied };

const char* to_string(Provenance p);

struct Approximant
{
    double scale = 0.0;
    OneForm form;
};

struct ApproxSequence
{
    OneForm target;
    std::vector<Approximant> approximants;
    Provenance provenance = Provenance::UserSupplied;

    /// eta_k = target with every continuous-tagged coefficient mollified at scale eps_k.
    static ApproxSequence mollified(const OneForm& target, const MollifierSchedule& schedule);

    /// Scales strictly decrease and every approximant is at least C1.
    void validate() const;
};

struct PlainDefect
{
    double eps = 0.0;
    double distance = 0.0;   ///< ||eta_k - eta||
    double deta_norm = 0.0;  ///< ||d eta_k||
    double wedge_norm = 0.0; ///< ||eta_k ^ d eta_k|| (2-D: 0)
    double defect = 0.0;     ///< ||eta_k ^ d eta_k|| e^{||d eta_k||}
    double uniform = 0.0;    ///< ||eta_k - eta|| e^{||d eta_k||}
};

struct AveragedDefect
{
    double eps = 0.0;
    double defect = 0.0;  ///< sup ||eta_k ^ d eta_k||_x e^{d~(x,t)}
    double uniform = 0.0; ///< sup ||eta_k - eta||_x e^{d~(x,t)}
    double max_exponent = 0.0;
    /// Same products with max(|d~1|, |d~2|) in the exponent; reported, not used in verdicts.
    double defect_abs = 0.0;
    double uniform_abs = 0.0;
};

struct AveragingOptions
{
    int t_samples = 9;
    /// Flow step; 0 selects t0 / 1000.
    double step = 0.0;
};

/// Region must lie inside the chart interior.
std::vector<PlainDefect> plain_defects(const ApproxSequence& seq, const Grid& region);

/// Sup over region x {t_i} with t_i equispaced in [-t0, t0] (t0 capped at min(1, chart margin)).
std::vector<AveragedDefect> averaged_defects(const ApproxSequence& seq, const Grid& region, double t0,
                                             const AveragingOptions& opt = {});

/// t0 after the cap min(t0, 1, smallest chart margin).
double capped_t0(const Chart& chart, double t0);

enum class Trend { Decreasing, NonDecreasing, Inconclusive };

const char* to_string(Trend t);

struct TrendVerdict
{
    std::string condition;
    Trend verdict = Trend::Inconclusive;
    /// Least-squares slope of ln(defect) against k.
    double log_slope = 0.0;
    bool identically_zero = false;
    std::vector<double> values;
    std::string rationale;
};

/// Last-three monotonicity plus slope fit, see the README for the exact rule.
TrendVerdict classify_trend(const std::string& condition, const std::vector<double>& values);

struct CertificationReport
{
    Provenance provenance = Provenance::UserSupplied;
    double t0 = 0.0;
    double t0_requested = 0.0;
    int t_samples = 0;
    double step = 0.0;
    std::size_t region_points = 0;
    std::vector<PlainDefect> plain;
    std::vector<AveragedDefect> averaged;
    /// plain, uniform, averaged, averaged-uniform.
    std::vector<TrendVerdict> verdicts;
    std::vector<std::string> notes;

    /// True when any verdict is non-decreasing.
    bool any_non_decreasing() const;
};

CertificationReport certify(const ApproxSequence& seq, const Grid& region, double t0, const AveragingOptions& opt = {});

} // namespace frobkit
