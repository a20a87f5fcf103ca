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

#include <frobkit/frames.hpp>

#include <iosfwd>
#include <vector>

namespace frobkit {

enum class Direction { X, Y };

const char* to_string(Direction d);

struct Trajectory
{
    Direction field = Direction::X;
    std::vector<double> times;
    std::vector<Point> points;
};

///
/// Fixed-step RK4 for dx/dtau = X (or Y) with a final partial step. The unit-rate
/// coordinate (x1 along X, x2 along Y) is set to start + tau exactly, so only the
/// transverse coordinate is integrated. Every node is checked against the chart.
///
Point flow(const CanonicalFrame& frame, Direction which, const Point& x, double t, double step);

Trajectory trajectory(const CanonicalFrame& frame, Direction which, const Point& x, double t, double step);

///
/// One trajectory through a list of stop times of a common sign, sorted by magnitude.
/// Each stop is a node; `stop_index[i]` locates stop i in the trajectory.
///
Trajectory trajectory_with_stops(const CanonicalFrame& frame, Direction which, const Point& x,
                                 const std::vector<double>& stops, double step, std::vector<std::size_t>* stop_index);

void write_csv(const Trajectory& traj, std::ostream& out);

struct SectionTime
{
    double t = 0.0;
    Point base{};
    /// Admissible-time check at x: |t| <= 1 / sqrt((1 + a^2)(1 + b^2)).
    double bound = 0.0;
    bool bound_satisfied = false;
};

///
/// Time from the section {x2 = x2_0} (3-D) or {z1 = z1_0} (2-D) to x along Y (resp. X),
/// and the base point on the section.
///
SectionTime section_time(const CanonicalFrame& frame, const Point& x, double section, double step);

struct AveragedD
{
    double d1 = 0.0;
    double d2 = 0.0;
    /// max(d1, d2) of the signed integrals.
    double d = 0.0;
    /// max(|d1|, |d2|), reported only.
    double d_abs = 0.0;
};

/// Integrals of d1 along X and d2 along Y from x for time t (composite trapezoid on the nodes).
AveragedD averaged_d(const TwoForm& deta, const CanonicalFrame& frame, const Point& x, double t, double step);

/// averaged_d at several times, sharing one trajectory per sign.
std::vector<AveragedD> averaged_d_batch(const TwoForm& deta, const CanonicalFrame& frame, const Point& x,
                                        const std::vector<double>& times, double step);

/// Cumulative trapezoid of f along a trajectory (same length as the trajectory).
std::vector<double> cumulative_integral(const Trajectory& traj, const ScalarField& f);

} // namespace frobkit
