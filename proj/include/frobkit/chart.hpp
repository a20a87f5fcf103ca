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

#include <frobkit/error.hpp>
#include <frobkit/expr.hpp>

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace frobkit {

/// Declared regularity of a field. Never inferred.
enum class Smoothness { Continuous = 0, C1 = 1, C2 = 2 };

const char* to_string(Smoothness s);
Smoothness parse_smoothness(const std::string& s);
Smoothness weakest(Smoothness a, Smoothness b);
/// Regularity left after one differentiation.
Smoothness differentiated(Smoothness s);

struct Interval
{
    double lo = 0.0;
    double hi = 1.0;
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

///
/// Coordinate box of dimension 2 or 3 together with a per-axis margin. The margin
/// defines the interior sub-chart from which flows of short duration stay inside.
///
class Chart
{
public:
    Chart() = default;
    Chart(int dim, const std::array<Interval, 3>& bounds, const std::array<double, 3>& margin = {});

    /// Same interval and margin on every axis.
    static Chart cube(int dim, Interval bounds, double margin = 0.0);

    int dim() const { return m_dim; }
    const Interval& bounds(int axis) const { return m_bounds[static_cast<std::size_t>(axis)]; }
    double margin(int axis) const { return m_margin[static_cast<std::size_t>(axis)]; }
    double width(int axis) const { return bounds(axis).width(); }
    double scale() const;

    bool contains(const Point& p, double rel_tol = 1e-12) const;
    Point clamp(const Point& p) const;

    /// Bounds shrunk by the margin (margin of the result is zero).
    Chart interior() const;

    /// Smallest margin over the chart axes.
    double min_margin() const;

    /// Default finite-difference step: axis width * 1e-5.
    double default_step(int axis) const { return width(axis) * 1e-5; }

    bool same_bounds(const Chart& other, double tol = 1e-12) const;

private:
    int m_dim = 3;
    std::array<Interval, 3> m_bounds{};
    std::array<double, 3> m_margin{};
};

///
/// Uniform rectilinear node set over a box. Node counts are at least 2 per axis;
/// the unused third axis of a 2-D grid carries one node at 0.
///
class Grid
{
public:
    Grid() = default;
    Grid(int dim, const std::array<Interval, 3>& box, const std::array<int, 3>& counts);

    static Grid over(const Chart& chart, int nodes_per_axis);
    static Grid over_interior(const Chart& chart, int nodes_per_axis);

    int dim() const { return m_dim; }
    int count(int axis) const { return m_counts[static_cast<std::size_t>(axis)]; }
    const Interval& box(int axis) const { return m_box[static_cast<std::size_t>(axis)]; }
    std::size_t size() const;
    double coordinate(int axis, int i) const;
    double spacing(int axis) const;
    Point node(std::size_t flat) const;
    Point node(int i, int j, int k = 0) const;
    std::array<int, 3> unflatten(std::size_t flat) const;
    std::size_t flatten(int i, int j, int k = 0) const;

    /// Box as a chart with zero margin.
    Chart as_chart() const;

private:
    int m_dim = 3;
    std::array<Interval, 3> m_box{};
    std::array<int, 3> m_counts{1, 1, 1};
};

///
/// Backing implementation of a scalar field. `partial` may be exact (analytic sources
/// and combinators) or fall back to central differences.
///
class FieldSource
{
public:
    virtual ~FieldSource() = default;
    virtual double value(const Point& p) const = 0;
    virtual double partial(int axis, const Point& p, double h, const Chart& chart) const;
    /// Bit i set when the value may depend on coordinate i.
    virtual unsigned dependency_mask() const { return 0b111u; }
    virtual bool is_sampled() const { return false; }
    virtual std::optional<double> constant_value() const { return std::nullopt; }
    virtual std::string describe() const { return "field"; }
};

class ScalarField
{
public:
    using Fn = std::function<double(const Point&)>;
    using PartialFn = std::function<double(int axis, const Point&, double h)>;

    ScalarField() = default;
    ScalarField(std::shared_ptr<const FieldSource> source, Chart chart, Smoothness smoothness);

    static ScalarField analytic(const Expression& e, const Chart& chart, Smoothness s = Smoothness::C2);
    static ScalarField analytic(std::string_view text, const Chart& chart, Smoothness s = Smoothness::C2);
    static ScalarField constant(double v, const Chart& chart);
    /// Node values in Grid flat order; multilinear interpolation, clamped outside the grid.
    static ScalarField sampled(const Grid& grid, std::vector<double> values);
    static ScalarField function(Fn fn, const Chart& chart, Smoothness s, unsigned mask = 0b111u,
                                PartialFn partial = {}, std::string description = "function");

    double operator()(const Point& p) const { return m_source->value(p); }
    double value(const Point& p) const { return m_source->value(p); }

    const Chart& chart() const { return m_chart; }
    Smoothness smoothness() const { return m_smoothness; }
    unsigned dependency_mask() const { return m_source->dependency_mask(); }
    bool is_sampled() const { return m_source->is_sampled(); }
    std::optional<double> constant_value() const { return m_source->constant_value(); }
    const FieldSource& source() const { return *m_source; }
    const std::shared_ptr<const FieldSource>& source_ptr() const { return m_source; }
    bool valid() const { return static_cast<bool>(m_source); }
    std::string describe() const { return m_source->describe(); }

    ScalarField with_smoothness(Smoothness s) const { return ScalarField(m_source, m_chart, s); }
    ScalarField on_chart(const Chart& chart) const { return ScalarField(m_source, chart, m_smoothness); }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double s, const ScalarField& a);
    friend ScalarField operator-(const ScalarField& a);

private:
    std::shared_ptr<const FieldSource> m_source;
    Chart m_chart;
    Smoothness m_smoothness = Smoothness::Continuous;
};

///
/// d field / d x^axis at p. Refuses continuous and sampled fields (mollify first).
/// h == 0 selects the chart's default step. Analytic sources differentiate exactly.
///
double partial(const ScalarField& f, int axis, const Point& p, double h = 0.0);

/// Plain second-order central difference, one-sided only where the stencil would leave
/// the chart.
double central_difference(const ScalarField& f, int axis, const Point& p, double h);

/// Lazily evaluated field p -> partial(f, axis, p, h), tagged one smoothness level lower.
ScalarField derivative_field(const ScalarField& f, int axis, double h = 0.0);

/// Node values of `f` on `grid`. Domain errors name the offending node index.
ScalarField sample(const ScalarField& f, const Grid& grid);

/// Grid and node values backing a sampled field, or nullptr.
const Grid* sampled_grid(const ScalarField& f);
const std::vector<double>* sampled_values(const ScalarField& f);

/// CSV with header "axis1,axis2[,axis3],value", first axis slowest.
void write_csv(const ScalarField& sampled_field, std::ostream& out);
ScalarField read_csv(std::istream& in);

} // namespace frobkit
