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
#include <frobkit/chart.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace frobkit {

const char* to_string(Smoothness s)
{
    switch (s) {
    case Smoothness::Continuous: return "continuous";
    case Smoothness::C1: return "C1";
    case Smoothness::C2: return "C2";
    }
    return "?";
}

Smoothness parse_smoothness(const std::string& s)
{
    if (s == "continuous" || s == "C0") return Smoothness::Continuous;
    if (s == "C1") return Smoothness::C1;
    if (s == "C2") return Smoothness::C2;
    throw Error(ErrorCode::InvalidArgument, "unknown smoothness tag '" + s + "'");
}

Smoothness weakest(Smoothness a, Smoothness b)
{
    return static_cast<int>(a) < static_cast<int>(b) ? a : b;
}

Smoothness differentiated(Smoothness s)
{
    return s == Smoothness::C2 ? Smoothness::C1 : Smoothness::Continuous;
}

// ---------------------------------------------------------------------------- Chart

Chart::Chart(int dim, const std::array<Interval, 3>& bounds, const std::array<double, 3>& margin)
    : m_dim(dim)
    , m_bounds(bounds)
    , m_margin(margin)
{
    if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidArgument, "chart dimension must be 2 or 3");
    for (int a = 0; a < dim; ++a) {
        const auto& b = m_bounds[static_cast<std::size_t>(a)];
        if (!(b.hi > b.lo) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
            throw Error(ErrorCode::InvalidArgument, "chart axis " + std::to_string(a + 1) + " has a degenerate interval");
        }
        const double m = m_margin[static_cast<std::size_t>(a)];
        if (!(m >= 0.0) || !(m < 0.5 * b.width())) {
            throw Error(ErrorCode::InvalidArgument,
                        "chart margin on axis " + std::to_string(a + 1) + " must lie in [0, width/2)");
        }
    }
    if (dim == 2) {
        m_bounds[2] = Interval{0.0, 0.0};
        m_margin[2] = 0.0;
    }
}

Chart Chart::cube(int dim, Interval bounds, double margin)
{
    return Chart(dim, {bounds, bounds, bounds}, {margin, margin, margin});
}

double Chart::scale() const
{
    double s = 0.0;
    for (int a = 0; a < m_dim; ++a) s = std::max(s, width(a));
    return s;
}

bool Chart::contains(const Point& p, double rel_tol) const
{
    for (int a = 0; a < m_dim; ++a) {
        const double tol = rel_tol * width(a);
        if (!(p[a] >= bounds(a).lo - tol && p[a] <= bounds(a).hi + tol)) return false;
    }
    return true;
}

Point Chart::clamp(const Point& p) const
{
    Point q = p;
    for (int a = 0; a < m_dim; ++a) q[a] = std::clamp(p[a], bounds(a).lo, bounds(a).hi);
    return q;
}

Chart Chart::interior() const
{
    std::array<Interval, 3> b = m_bounds;
    for (int a = 0; a < m_dim; ++a) {
        b[a].lo += m_margin[a];
        b[a].hi -= m_margin[a];
    }
    return Chart(m_dim, b, {});
}

double Chart::min_margin() const
{
    double m = m_margin[0];
    for (int a = 1; a < m_dim; ++a) m = std::min(m, m_margin[a]);
    return m;
}

bool Chart::same_bounds(const Chart& other, double tol) const
{
    if (m_dim != other.m_dim) return false;
    for (int a = 0; a < m_dim; ++a) {
        const double t = tol * width(a);
        if (std::fabs(bounds(a).lo - other.bounds(a).lo) > t || std::fabs(bounds(a).hi - other.bounds(a).hi) > t) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------- Grid

Grid::Grid(int dim, const std::array<Interval, 3>& box, const std::array<int, 3>& counts)
    : m_dim(dim)
    , m_box(box)
    , m_counts(counts)
{
    if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidArgument, "grid dimension must be 2 or 3");
    for (int a = 0; a < dim; ++a) {
        if (m_counts[a] < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 nodes per axis");
        if (!(m_box[a].hi > m_box[a].lo)) throw Error(ErrorCode::InvalidArgument, "grid box is degenerate");
    }
    if (dim == 2) {
        m_counts[2] = 1;
        m_box[2] = Interval{0.0, 0.0};
    }
}

Grid Grid::over(const Chart& chart, int n)
{
    return Grid(chart.dim(), {chart.bounds(0), chart.bounds(1), chart.bounds(2)}, {n, n, n});
}

Grid Grid::over_interior(const Chart& chart, int n)
{
    return over(chart.interior(), n);
}

std::size_t Grid::size() const
{
    return static_cast<std::size_t>(m_counts[0]) * static_cast<std::size_t>(m_counts[1]) *
           static_cast<std::size_t>(m_counts[2]);
}

double Grid::spacing(int axis) const
{
    return box(axis).width() / (count(axis) - 1);
}

double Grid::coordinate(int axis, int i) const
{
    if (count(axis) == 1) return box(axis).lo;
    const int n = count(axis) - 1;
    if (i == n) return box(axis).hi;
    return box(axis).lo + box(axis).width() * static_cast<double>(i) / n;
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const
{
    const auto n2 = static_cast<std::size_t>(m_counts[2]);
    const auto n1 = static_cast<std::size_t>(m_counts[1]);
    return {static_cast<int>(flat / (n1 * n2)), static_cast<int>((flat / n2) % n1), static_cast<int>(flat % n2)};
}

std::size_t Grid::flatten(int i, int j, int k) const
{
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(m_counts[1]) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(m_counts[2]) +
           static_cast<std::size_t>(k);
}

Point Grid::node(int i, int j, int k) const
{
    return {coordinate(0, i), coordinate(1, j), m_dim == 3 ? coordinate(2, k) : 0.0};
}

Point Grid::node(std::size_t flat) const
{
    const auto idx = unflatten(flat);
    return node(idx[0], idx[1], idx[2]);
}

Chart Grid::as_chart() const
{
    return Chart(m_dim, m_box, {});
}

// ---------------------------------------------------------------------------- sources

double FieldSource::partial(int axis, const Point& p, double h, const Chart& chart) const
{
    auto eval = [&](double offset) {
        Point q = p;
        q[axis] += offset;
        return value(q);
    };
    const Interval& b = chart.bounds(axis);
    const double x = p[axis];
    if (x - h >= b.lo && x + h <= b.hi) return (eval(h) - eval(-h)) / (2.0 * h);
    if (x - h < b.lo && x + 2.0 * h <= b.hi) return (-3.0 * eval(0.0) + 4.0 * eval(h) - eval(2.0 * h)) / (2.0 * h);
    if (x + h > b.hi && x - 2.0 * h >= b.lo) return (3.0 * eval(0.0) - 4.0 * eval(-h) + eval(-2.0 * h)) / (2.0 * h);
    throw Error(ErrorCode::OutOfBounds, "finite-difference stencil does not fit in the chart at " + format_point(p));
}

namespace {

class AnalyticSource final : public FieldSource
{
public:
    explicit AnalyticSource(Expression e)
        : m_expr(std::move(e))
    {}

    double value(const Point& p) const override { return m_expr.evaluate(p); }

    double partial(int axis, const Point& p, double, const Chart&) const override
    {
        return m_expr.evaluate_with_derivative(p, axis).second;
    }

    unsigned dependency_mask() const override { return m_expr.variable_mask(); }

    std::optional<double> constant_value() const override
    {
        if (m_expr.variable_mask() == 0) return m_expr.evaluate(Point{});
        return std::nullopt;
    }

    std::string describe() const override { return m_expr.source(); }

private:
    Expression m_expr;
};

class ConstantSource final : public FieldSource
{
public:
    explicit ConstantSource(double v)
        : m_v(v)
    {}
    double value(const Point&) const override { return m_v; }
    double partial(int, const Point&, double, const Chart&) const override { return 0.0; }
    unsigned dependency_mask() const override { return 0u; }
    std::optional<double> constant_value() const override { return m_v; }
    std::string describe() const override
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", m_v);
        return buf;
    }

private:
    double m_v;
};

class SampledSource final : public FieldSource
{
public:
    SampledSource(Grid grid, std::vector<double> values)
        : m_grid(std::move(grid))
        , m_values(std::move(values))
    {}

    double value(const Point& p) const override
    {
        std::array<int, 3> base{0, 0, 0};
        std::array<double, 3> frac{0.0, 0.0, 0.0};
        const int dim = m_grid.dim();
        for (int a = 0; a < dim; ++a) {
            const int n = m_grid.count(a);
            double t = (p[a] - m_grid.box(a).lo) / m_grid.spacing(a);
            t = std::clamp(t, 0.0, static_cast<double>(n - 1));
            const double r = std::round(t);
            if (std::fabs(t - r) < 1e-9) t = r;
            int i = static_cast<int>(std::floor(t));
            if (i >= n - 1) i = n - 2;
            base[a] = i;
            frac[a] = t - i;
        }
        double acc = 0.0;
        const int corners = 1 << dim;
        for (int c = 0; c < corners; ++c) {
            double w = 1.0;
            std::array<int, 3> idx = base;
            for (int a = 0; a < dim; ++a) {
                if (c & (1 << a)) {
                    w *= frac[a];
                    idx[a] += 1;
                } else {
                    w *= 1.0 - frac[a];
                }
            }
            if (w != 0.0) acc += w * m_values[m_grid.flatten(idx[0], idx[1], dim == 3 ? idx[2] : 0)];
        }
        return acc;
    }

    bool is_sampled() const override { return true; }
    std::string describe() const override { return "sampled grid"; }

    const Grid& grid() const { return m_grid; }
    const std::vector<double>& values() const { return m_values; }

private:
    Grid m_grid;
    std::vector<double> m_values;
};

class FunctionSource final : public FieldSource
{
public:
    FunctionSource(ScalarField::Fn fn, unsigned mask, ScalarField::PartialFn partial, std::string desc)
        : m_fn(std::move(fn))
        , m_mask(mask)
        , m_partial(std::move(partial))
        , m_desc(std::move(desc))
    {}

    double value(const Point& p) const override { return m_fn(p); }

    double partial(int axis, const Point& p, double h, const Chart& chart) const override
    {
        if (m_partial) return m_partial(axis, p, h);
        return FieldSource::partial(axis, p, h, chart);
    }

    unsigned dependency_mask() const override { return m_mask; }
    std::string describe() const override { return m_desc; }

private:
    ScalarField::Fn m_fn;
    unsigned m_mask;
    ScalarField::PartialFn m_partial;
    std::string m_desc;
};

// Derivative of a combinator operand: zero off its dependency mask, otherwise whatever the
// operand's source provides at step h.
double operand_partial(const ScalarField& f, int axis, const Point& p, double h)
{
    if (!(f.dependency_mask() & (1u << axis))) return 0.0;
    return f.source().partial(axis, p, h, f.chart());
}

enum class BinOp { Add, Sub, Mul, Div };

class BinarySource final : public FieldSource
{
public:
    BinarySource(BinOp op, ScalarField a, ScalarField b)
        : m_op(op)
        , m_a(std::move(a))
        , m_b(std::move(b))
    {}

    double value(const Point& p) const override
    {
        const double a = m_a(p);
        const double b = m_b(p);
        switch (m_op) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div:
            if (b == 0.0) throw DomainError("division by zero", describe());
            return a / b;
        }
        return 0.0;
    }

    double partial(int axis, const Point& p, double h, const Chart&) const override
    {
        const double da = operand_partial(m_a, axis, p, h);
        const double db = operand_partial(m_b, axis, p, h);
        switch (m_op) {
        case BinOp::Add: return da + db;
        case BinOp::Sub: return da - db;
        case BinOp::Mul: return (da == 0.0 ? 0.0 : da * m_b(p)) + (db == 0.0 ? 0.0 : m_a(p) * db);
        case BinOp::Div: {
            const double b = m_b(p);
            if (b == 0.0) throw DomainError("division by zero", describe());
            const double a = m_a(p);
            return (da * b - a * db) / (b * b);
        }
        }
        return 0.0;
    }

    unsigned dependency_mask() const override { return m_a.dependency_mask() | m_b.dependency_mask(); }

    std::optional<double> constant_value() const override
    {
        auto a = m_a.constant_value();
        auto b = m_b.constant_value();
        if (!a || !b) return std::nullopt;
        return value(Point{});
    }

    std::string describe() const override
    {
        static constexpr const char* sym[] = {" + ", " - ", " * ", " / "};
        return "(" + m_a.describe() + sym[static_cast<int>(m_op)] + m_b.describe() + ")";
    }

private:
    BinOp m_op;
    ScalarField m_a;
    ScalarField m_b;
};

ScalarField combine(BinOp op, const ScalarField& a, const ScalarField& b)
{
    if (a.chart().dim() != b.chart().dim()) {
        throw Error(ErrorCode::InvalidArgument, "cannot combine fields on charts of different dimension");
    }
    return ScalarField(std::make_shared<BinarySource>(op, a, b), a.chart(), weakest(a.smoothness(), b.smoothness()));
}

} // namespace

ScalarField::ScalarField(std::shared_ptr<const FieldSource> source, Chart chart, Smoothness smoothness)
    : m_source(std::move(source))
    , m_chart(chart)
    , m_smoothness(smoothness)
{}

ScalarField ScalarField::analytic(const Expression& e, const Chart& chart, Smoothness s)
{
    if (chart.dim() == 2 && (e.variable_mask() & 0b100u)) {
        throw Error(ErrorCode::InvalidArgument, "expression '" + e.source() + "' uses x3 on a 2-D chart");
    }
    return ScalarField(std::make_shared<AnalyticSource>(e), chart, s);
}

ScalarField ScalarField::analytic(std::string_view text, const Chart& chart, Smoothness s)
{
    return analytic(Expression::parse(text, VariableSet::chart(chart.dim())), chart, s);
}

ScalarField ScalarField::constant(double v, const Chart& chart)
{
    return ScalarField(std::make_shared<ConstantSource>(v), chart, Smoothness::C2);
}

ScalarField ScalarField::sampled(const Grid& grid, std::vector<double> values)
{
    if (values.size() != grid.size()) {
        throw Error(ErrorCode::InvalidArgument, "sampled field needs one value per grid node");
    }
    return ScalarField(std::make_shared<SampledSource>(grid, std::move(values)), grid.as_chart(),
                       Smoothness::Continuous);
}

ScalarField ScalarField::function(Fn fn, const Chart& chart, Smoothness s, unsigned mask, PartialFn partial,
                                  std::string description)
{
    return ScalarField(std::make_shared<FunctionSource>(std::move(fn), mask, std::move(partial), std::move(description)),
                       chart, s);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return combine(BinOp::Add, a, b); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return combine(BinOp::Sub, a, b); }
ScalarField operator*(const ScalarField& a, const ScalarField& b) { return combine(BinOp::Mul, a, b); }
ScalarField operator/(const ScalarField& a, const ScalarField& b) { return combine(BinOp::Div, a, b); }

ScalarField operator*(double s, const ScalarField& a)
{
    return combine(BinOp::Mul, ScalarField::constant(s, a.chart()), a);
}

ScalarField operator-(const ScalarField& a)
{
    return (-1.0) * a;
}

// ---------------------------------------------------------------------------- derivatives

double partial(const ScalarField& f, int axis, const Point& p, double h)
{
    const Chart& chart = f.chart();
    if (axis < 0 || axis >= chart.dim()) throw Error(ErrorCode::InvalidArgument, "axis out of range");
    if (f.is_sampled() || f.smoothness() == Smoothness::Continuous) {
        throw Error(ErrorCode::NotDifferentiable,
                    "field '" + f.describe() + "' is only continuous; mollify it before differentiating");
    }
    if (!chart.contains(p)) {
        throw Error(ErrorCode::OutOfBounds, "derivative requested outside the chart at " + format_point(p, chart.dim()));
    }
    if (h == 0.0) h = chart.default_step(axis);
    if (!(h >= 1e-9 * chart.width(axis))) {
        throw Error(ErrorCode::StepUnderflow, "finite-difference step below 1e-9 of the axis width");
    }
    if (!(f.dependency_mask() & (1u << axis))) return 0.0;
    return f.source().partial(axis, p, h, chart);
}

double central_difference(const ScalarField& f, int axis, const Point& p, double h)
{
    const Chart& chart = f.chart();
    if (!(h >= 1e-9 * chart.width(axis))) {
        throw Error(ErrorCode::StepUnderflow, "finite-difference step below 1e-9 of the axis width");
    }
    return f.source().FieldSource::partial(axis, p, h, chart);
}

ScalarField derivative_field(const ScalarField& f, int axis, double h)
{
    const unsigned mask = f.dependency_mask();
    if (!(mask & (1u << axis))) return ScalarField::constant(0.0, f.chart());
    // Validate once up front so misuse fails at construction rather than at first evaluation.
    if (f.is_sampled() || f.smoothness() == Smoothness::Continuous) {
        throw Error(ErrorCode::NotDifferentiable,
                    "field '" + f.describe() + "' is only continuous; mollify it before differentiating");
    }
    static const char* names[] = {"d1", "d2", "d3"};
    return ScalarField::function([f, axis, h](const Point& p) { return partial(f, axis, p, h); }, f.chart(),
                                 differentiated(f.smoothness()), mask, {},
                                 std::string(names[axis]) + "(" + f.describe() + ")");
}

// ---------------------------------------------------------------------------- sampling & CSV

ScalarField sample(const ScalarField& f, const Grid& grid)
{
    if (grid.dim() != f.chart().dim()) throw Error(ErrorCode::InvalidArgument, "grid and field dimensions differ");
    if (!f.chart().contains(grid.node(0)) || !f.chart().contains(grid.node(grid.size() - 1))) {
        throw Error(ErrorCode::OutOfBounds, "sampling grid leaves the chart");
    }
    std::vector<double> values(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        try {
            values[n] = f(grid.node(n));
        } catch (const DomainError& e) {
            const auto idx = grid.unflatten(n);
            throw Error(ErrorCode::Domain, std::string(e.what()) + " at node (" + std::to_string(idx[0]) + ", " +
                                               std::to_string(idx[1]) + ", " + std::to_string(idx[2]) + ")");
        }
    }
    auto field = ScalarField::sampled(grid, std::move(values));
    if (grid.as_chart().same_bounds(f.chart())) field = field.on_chart(f.chart());
    return field;
}

const Grid* sampled_grid(const ScalarField& f)
{
    auto* s = dynamic_cast<const SampledSource*>(&f.source());
    return s ? &s->grid() : nullptr;
}

const std::vector<double>* sampled_values(const ScalarField& f)
{
    auto* s = dynamic_cast<const SampledSource*>(&f.source());
    return s ? &s->values() : nullptr;
}

void write_csv(const ScalarField& f, std::ostream& out)
{
    const Grid* grid = sampled_grid(f);
    if (!grid) throw Error(ErrorCode::InvalidArgument, "only sampled fields can be written as CSV");
    const auto& values = *sampled_values(f);
    const int dim = grid->dim();
    out << (dim == 3 ? "axis1,axis2,axis3,value\n" : "axis1,axis2,value\n");
    char buf[128];
    for (std::size_t n = 0; n < grid->size(); ++n) {
        const Point p = grid->node(n);
        if (dim == 3) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p[0], p[1], p[2], values[n]);
        } else {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p[0], p[1], values[n]);
        }
        out << buf;
    }
}

ScalarField read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Io, "empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    int dim = 0;
    if (line == "axis1,axis2,value") {
        dim = 2;
    } else if (line == "axis1,axis2,axis3,value") {
        dim = 3;
    } else {
        throw Error(ErrorCode::Io, "CSV header must be 'axis1,axis2[,axis3],value'");
    }
    std::vector<std::array<double, 4>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 4> row{};
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col > dim) throw Error(ErrorCode::Io, "too many columns on CSV line " + std::to_string(lineno));
            try {
                std::size_t used = 0;
                row[static_cast<std::size_t>(col)] = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw Error(ErrorCode::Io, "bad number on CSV line " + std::to_string(lineno));
            }
            ++col;
        }
        if (col != dim + 1) throw Error(ErrorCode::Io, "too few columns on CSV line " + std::to_string(lineno));
        if (dim == 2) {
            row[3] = row[2];
            row[2] = 0.0;
        }
        rows.push_back(row);
    }
    std::array<std::vector<double>, 3> axes;
    for (int a = 0; a < dim; ++a) {
        for (const auto& r : rows) axes[a].push_back(r[a]);
        std::sort(axes[a].begin(), axes[a].end());
        axes[a].erase(std::unique(axes[a].begin(), axes[a].end()), axes[a].end());
    }
    std::array<Interval, 3> box{};
    std::array<int, 3> counts{1, 1, 1};
    for (int a = 0; a < dim; ++a) {
        if (axes[a].size() < 2) throw Error(ErrorCode::Io, "CSV grid needs at least 2 nodes per axis");
        box[a] = {axes[a].front(), axes[a].back()};
        counts[a] = static_cast<int>(axes[a].size());
    }
    Grid grid(dim, box, counts);
    if (rows.size() != grid.size()) throw Error(ErrorCode::Io, "CSV rows do not form a complete rectilinear grid");
    std::vector<double> values(rows.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        const Point expect = grid.node(n);
        for (int a = 0; a < dim; ++a) {
            if (std::fabs(rows[n][a] - expect[a]) > 1e-9 * box[a].width()) {
                throw Error(ErrorCode::Io, "CSV row " + std::to_string(n + 2) +
                                               " is not on a uniform row-major grid (first axis slowest)");
            }
        }
        values[n] = rows[n][3];
    }
    return ScalarField::sampled(grid, std::move(values));
}

} // namespace frobkit
