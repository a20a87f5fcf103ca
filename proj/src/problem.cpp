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
#include <frobkit/frames.hpp>
#include <frobkit/involutivity.hpp>
#include <frobkit/mollify.hpp>
#include <frobkit/odeuniq.hpp>
#include <frobkit/pfaff.hpp>
#include <frobkit/problem.hpp>
#include <frobkit/surfaces.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace frobkit {

using nlohmann::json;

const char* to_string(Command c)
{
    switch (c) {
    case Command::Certify: return "certify";
    case Command::Surface: return "surface";
    case Command::Pfaff: return "pfaff";
    case Command::OdeCheck: return "ode-check";
    case Command::Mollify: return "mollify";
    }
    return "?";
}

Command parse_command(const std::string& s)
{
    for (Command c : {Command::Certify, Command::Surface, Command::Pfaff, Command::OdeCheck, Command::Mollify}) {
        if (s == to_string(c)) return c;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + s + "'");
}

struct ProblemSpec::Impl
{
    json doc;
    std::filesystem::path base_dir;
};

ProblemSpec::ProblemSpec()
    : m_impl(std::make_unique<Impl>())
{}
ProblemSpec::~ProblemSpec() = default;
ProblemSpec::ProblemSpec(const ProblemSpec& o)
    : m_impl(std::make_unique<Impl>(*o.m_impl))
{}
ProblemSpec& ProblemSpec::operator=(const ProblemSpec& o)
{
    *m_impl = *o.m_impl;
    return *this;
}

ProblemSpec ProblemSpec::parse(const std::string& text, const std::filesystem::path& base_dir)
{
    ProblemSpec spec;
    try {
        spec.m_impl->doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, std::string("problem file is not valid JSON: ") + e.what());
    }
    if (!spec.m_impl->doc.is_object()) throw Error(ErrorCode::Schema, "problem file must hold a JSON object");
    spec.m_impl->base_dir = base_dir;
    return spec;
}

ProblemSpec ProblemSpec::load(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::Io, "cannot open problem file '" + file.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), file.parent_path().empty() ? std::filesystem::path(".") : file.parent_path());
}

void ProblemSpec::set(const std::string& path, const std::string& value)
{
    if (path.empty()) throw Error(ErrorCode::InvalidArgument, "empty override key");
    json v;
    try {
        v = json::parse(value);
    } catch (const json::parse_error&) {
        v = value;
    }
    json* node = &m_impl->doc;
    std::stringstream ss(path);
    std::string seg;
    std::vector<std::string> segs;
    while (std::getline(ss, seg, '.')) segs.push_back(seg);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::string& s = segs[i];
        if (s.empty()) throw Error(ErrorCode::InvalidArgument, "bad override key '" + path + "'");
        json* next = nullptr;
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(s);
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidArgument, "override '" + path + "': '" + s + "' is not an array index");
            }
            if (idx >= node->size()) throw Error(ErrorCode::InvalidArgument, "override '" + path + "': index out of range");
            next = &(*node)[idx];
        } else {
            if (node->is_null()) *node = json::object();
            if (!node->is_object()) throw Error(ErrorCode::InvalidArgument, "override '" + path + "' descends into a scalar");
            next = &(*node)[s];
        }
        node = next;
    }
    *node = v;
}

std::string ProblemSpec::dump() const
{
    return m_impl->doc.dump(2);
}

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg)
{
    throw Error(ErrorCode::Schema, path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string join(const std::string& path, std::size_t i)
{
    return path + "." + std::to_string(i);
}

void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys)
{
    if (!obj.is_object()) schema(path, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* a : keys) ok = ok || k == a;
        if (!ok) schema(join(path, k), "unknown key");
    }
}

const json* find(const json& obj, const char* key)
{
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& need(const json& obj, const std::string& path, const char* key)
{
    const json* v = find(obj, key);
    if (!v) schema(join(path, key), "required key is missing");
    return *v;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) schema(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema(path, "expected a finite number");
    return d;
}

double number(const json& obj, const std::string& path, const char* key, double fallback)
{
    const json* v = find(obj, key);
    return v ? number(*v, join(path, key)) : fallback;
}

int integer(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) schema(path, "expected an integer");
    return v.get<int>();
}

int integer(const json& obj, const std::string& path, const char* key, int fallback)
{
    const json* v = find(obj, key);
    return v ? integer(*v, join(path, key)) : fallback;
}

std::string text(const json& v, const std::string& path)
{
    if (!v.is_string()) schema(path, "expected a string");
    return v.get<std::string>();
}

bool boolean(const json& obj, const std::string& path, const char* key, bool fallback)
{
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) schema(join(path, key), "expected true or false");
    return v->get<bool>();
}

std::vector<double> numbers(const json& v, const std::string& path, std::size_t min_len = 1)
{
    if (!v.is_array()) schema(path, "expected an array of numbers");
    if (v.size() < min_len) schema(path, "expected at least " + std::to_string(min_len) + " entries");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], join(path, i)));
    return out;
}

Interval interval(const json& v, const std::string& path)
{
    const auto n = numbers(v, path, 2);
    if (n.size() != 2 || !(n[0] < n[1])) schema(path, "expected [lo, hi] with lo < hi");
    return {n[0], n[1]};
}

Point point(const json& v, const std::string& path, int dim)
{
    const auto n = numbers(v, path, static_cast<std::size_t>(dim));
    if (n.size() != static_cast<std::size_t>(dim)) schema(path, "expected " + std::to_string(dim) + " coordinates");
    Point p{};
    for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = n[static_cast<std::size_t>(i)];
    return p;
}

std::vector<double> schedule(const json& v, const std::string& path)
{
    auto s = numbers(v, path);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0) || (i > 0 && !(s[i] < s[i - 1]))) schema(path, "scales must be positive and strictly decreasing");
    }
    return s;
}

struct Context
{
    Chart chart;
    std::map<std::string, ScalarField> fields;
    std::filesystem::path base_dir;
};

Chart parse_chart(const json& doc)
{
    const std::string path = "chart";
    const json& c = need(doc, "", "chart");
    allow(c, path, {"dim", "bounds", "margin"});
    const int dim = integer(need(c, path, "dim"), "chart.dim");
    if (dim != 2 && dim != 3) schema("chart.dim", "must be 2 or 3");
    const json& b = need(c, path, "bounds");
    if (!b.is_array() || b.size() != static_cast<std::size_t>(dim)) schema("chart.bounds", "expected one [lo, hi] per axis");
    std::array<Interval, 3> bounds{Interval{0.0, 1.0}, Interval{0.0, 1.0}, Interval{0.0, 1.0}};
    for (int i = 0; i < dim; ++i) bounds[static_cast<std::size_t>(i)] = interval(b[static_cast<std::size_t>(i)], join("chart.bounds", static_cast<std::size_t>(i)));
    std::array<double, 3> margin{};
    if (const json* m = find(c, "margin")) {
        if (m->is_number()) {
            margin.fill(number(*m, "chart.margin"));
        } else {
            const auto v = numbers(*m, "chart.margin");
            if (v.size() != static_cast<std::size_t>(dim)) schema("chart.margin", "expected a number or one entry per axis");
            for (int i = 0; i < dim; ++i) margin[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < dim; ++i) {
            const double mg = margin[static_cast<std::size_t>(i)];
            if (mg < 0.0 || 2.0 * mg >= bounds[static_cast<std::size_t>(i)].width()) schema("chart.margin", "margin must be non-negative and below half the axis width");
        }
    }
    return Chart(dim, bounds, margin);
}

bool is_identifier(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char ch : s) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
    }
    return true;
}

ScalarField read_field_csv(const std::filesystem::path& base, const std::string& rel, const std::string& path,
                           const Chart& chart)
{
    const auto file = base / rel;
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::Io, path + ": cannot open '" + file.string() + "'");
    ScalarField f;
    try {
        f = read_csv(in);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
    if (f.chart().dim() != chart.dim()) schema(path, "CSV grid dimension differs from the chart");
    return f.on_chart(chart).with_smoothness(Smoothness::Continuous);
}

ScalarField expression_field(const std::string& expr, const std::string& path, const Chart& chart, Smoothness s)
{
    try {
        return ScalarField::analytic(expr, chart, s);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) schema(path, "'" + expr + "' is neither a declared field nor a valid expression (" + e.what() + ")");
        throw;
    }
}

Smoothness smoothness_of(const json& obj, const std::string& path, Smoothness fallback)
{
    const json* s = find(obj, "smoothness");
    if (!s) return fallback;
    try {
        return parse_smoothness(text(*s, join(path, "smoothness")));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Schema) throw;
        schema(join(path, "smoothness"), e.what());
    }
}

/// A string naming a declared field or holding an expression, or {"expr"|"csv", "smoothness"}.
ScalarField resolve(const Context& ctx, const json& v, const std::string& path, const Chart& chart,
                    Smoothness fallback = Smoothness::C2)
{
    if (v.is_number()) return ScalarField::constant(number(v, path), chart);
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        auto it = ctx.fields.find(s);
        if (it != ctx.fields.end()) return it->second.on_chart(chart);
        return expression_field(s, path, chart, fallback);
    }
    if (v.is_object()) {
        allow(v, path, {"expr", "csv", "smoothness"});
        const Smoothness s = smoothness_of(v, path, fallback);
        const json* e = find(v, "expr");
        const json* c = find(v, "csv");
        if ((e != nullptr) == (c != nullptr)) schema(path, "give exactly one of 'expr' and 'csv'");
        if (e) return expression_field(text(*e, join(path, "expr")), join(path, "expr"), chart, s);
        if (find(v, "smoothness") && s != Smoothness::Continuous) schema(join(path, "smoothness"), "sampled fields are continuous");
        return read_field_csv(ctx.base_dir, text(*c, join(path, "csv")), join(path, "csv"), chart);
    }
    schema(path, "expected a field name, an expression, a number or an {expr|csv} object");
}

Context parse_context(const ProblemSpec::Impl& spec)
{
    const json& doc = spec.doc;
    allow(doc, "", {"schema_version", "description", "chart", "fields", "certify", "surface", "pfaff", "ode-check", "mollify"});
    const int version = integer(need(doc, "", "schema_version"), "schema_version");
    if (version != kSchemaVersion) schema("schema_version", "unsupported version " + std::to_string(version));
    if (const json* d = find(doc, "description")) text(*d, "description");
    Context ctx;
    ctx.base_dir = spec.base_dir;
    ctx.chart = parse_chart(doc);
    if (const json* f = find(doc, "fields")) {
        if (!f->is_object()) schema("fields", "expected an object");
        for (const auto& [name, v] : f->items()) {
            const std::string path = join("fields", name);
            if (!is_identifier(name)) schema(path, "field names must be identifiers");
            if (VariableSet::chart(3).lookup(name) >= 0 || name == "t") schema(path, "field name shadows a coordinate");
            if (v.is_string() && ctx.fields.count(v.get<std::string>())) schema(path, "fields cannot alias other fields");
            ctx.fields[name] = resolve(ctx, v, path, ctx.chart);
        }
    }
    return ctx;
}

OneForm parse_form(const Context& ctx, const json& v, const std::string& path, const Chart& chart)
{
    const std::size_t n = static_cast<std::size_t>(chart.dim());
    if (!v.is_array() || v.size() != n) schema(path, "expected " + std::to_string(n) + " coefficients");
    std::vector<ScalarField> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(resolve(ctx, v[i], join(path, i), chart));
    return n == 2 ? OneForm::make2d(c[0], c[1]) : OneForm::make(c[0], c[1], c[2]);
}

json point_json(const Point& p, int dim)
{
    json a = json::array();
    for (int i = 0; i < dim; ++i) a.push_back(p[static_cast<std::size_t>(i)]);
    return a;
}

// Finite values as numbers, everything else as null.
json num(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json header(Command c, bool violated)
{
    return {{"schema_version", kSchemaVersion}, {"command", to_string(c)}, {"status", violated ? "violated" : "ok"}};
}

Grid parse_region(const json* r, const std::string& path, const Chart& chart, int fallback_nodes)
{
    if (!r) return Grid::over_interior(chart, fallback_nodes);
    allow(*r, path, {"nodes", "box"});
    const int nodes = integer(*r, path, "nodes", fallback_nodes);
    if (nodes < 2) schema(join(path, "nodes"), "need at least 2 nodes per axis");
    if (const json* b = find(*r, "box")) {
        const std::string bp = join(path, "box");
        if (!b->is_array() || b->size() != static_cast<std::size_t>(chart.dim())) schema(bp, "expected one [lo, hi] per axis");
        std::array<Interval, 3> box{Interval{0.0, 0.0}, Interval{0.0, 0.0}, Interval{0.0, 0.0}};
        std::array<int, 3> counts{1, 1, 1};
        for (int i = 0; i < chart.dim(); ++i) {
            box[static_cast<std::size_t>(i)] = interval((*b)[static_cast<std::size_t>(i)], join(bp, static_cast<std::size_t>(i)));
            counts[static_cast<std::size_t>(i)] = nodes;
        }
        return Grid(chart.dim(), box, counts);
    }
    return Grid::over_interior(chart, nodes);
}

// ---- certify ----

struct CertifyInput
{
    ApproxSequence seq;
    Grid region;
    double t0 = 0.5;
    AveragingOptions opt;
};

ApproxSequence parse_sequence(const Context& ctx, const json& s, const std::string& path, const OneForm& target)
{
    allow(s, path, {"mollify", "approximants"});
    const json* m = find(s, "mollify");
    const json* a = find(s, "approximants");
    if ((m != nullptr) == (a != nullptr)) schema(path, "give exactly one of 'mollify' and 'approximants'");
    if (m) return ApproxSequence::mollified(target, MollifierSchedule{schedule(*m, join(path, "mollify"))});
    const std::string ap = join(path, "approximants");
    if (!a->is_array() || a->empty()) schema(ap, "expected a non-empty array");
    ApproxSequence seq;
    seq.target = target;
    seq.provenance = Provenance::UserSupplied;
    for (std::size_t i = 0; i < a->size(); ++i) {
        const std::string ip = join(ap, i);
        const json& e = (*a)[i];
        allow(e, ip, {"scale", "form"});
        seq.approximants.push_back({number(need(e, ip, "scale"), join(ip, "scale")),
                                    parse_form(ctx, need(e, ip, "form"), join(ip, "form"), ctx.chart)});
    }
    try {
        seq.validate();
    } catch (const Error& e) {
        schema(ap, e.what());
    }
    return seq;
}

CertifyInput parse_certify(const Context& ctx, const json& b)
{
    const std::string path = "certify";
    allow(b, path, {"form", "sequence", "region", "t0", "t_samples", "step"});
    CertifyInput in;
    const OneForm target = parse_form(ctx, need(b, path, "form"), "certify.form", ctx.chart);
    in.seq = parse_sequence(ctx, need(b, path, "sequence"), "certify.sequence", target);
    in.region = parse_region(find(b, "region"), "certify.region", ctx.chart, 5);
    in.t0 = number(b, path, "t0", 0.5);
    if (!(in.t0 > 0.0)) schema("certify.t0", "must be positive");
    in.opt.t_samples = integer(b, path, "t_samples", 9);
    if (in.opt.t_samples < 9) schema("certify.t_samples", "must be at least 9");
    in.opt.step = number(b, path, "step", 0.0);
    if (in.opt.step < 0.0) schema("certify.step", "must be non-negative");
    return in;
}

RunResult run_certify(const CertifyInput& in)
{
    const CertificationReport rep = certify(in.seq, in.region, in.t0, in.opt);
    RunResult out;
    out.violated = rep.any_non_decreasing();
    json j = header(Command::Certify, out.violated);
    j["provenance"] = to_string(rep.provenance);
    j["t0"] = rep.t0;
    j["t0_requested"] = rep.t0_requested;
    j["t_samples"] = rep.t_samples;
    j["step"] = rep.step;
    j["region_points"] = rep.region_points;
    json plain = json::array();
    for (const auto& p : rep.plain) {
        plain.push_back({{"eps", p.eps}, {"distance", num(p.distance)}, {"deta_norm", num(p.deta_norm)},
                         {"wedge_norm", num(p.wedge_norm)}, {"defect", num(p.defect)}, {"uniform", num(p.uniform)}});
    }
    j["plain"] = plain;
    json avg = json::array();
    for (const auto& a : rep.averaged) {
        avg.push_back({{"eps", a.eps}, {"defect", num(a.defect)}, {"uniform", num(a.uniform)},
                       {"max_exponent", num(a.max_exponent)}, {"defect_abs", num(a.defect_abs)},
                       {"uniform_abs", num(a.uniform_abs)}});
    }
    j["averaged"] = avg;
    json verdicts = json::array();
    for (const auto& v : rep.verdicts) {
        json vals = json::array();
        for (double x : v.values) vals.push_back(num(x));
        verdicts.push_back({{"condition", v.condition}, {"verdict", to_string(v.verdict)},
                            {"identically_zero", v.identically_zero}, {"log_slope", num(v.log_slope)},
                            {"values", vals}, {"rationale", v.rationale}});
    }
    j["verdicts"] = verdicts;
    j["notes"] = rep.notes;
    out.report = j.dump(2);
    return out;
}

// ---- surface ----

struct SurfaceInput
{
    OneForm form;
    std::optional<ApproxSequence> seq;
    Point base{};
    double eps = 0.5;
    int n1 = 41, n2 = 41;
    double step = 1e-3;
    Order order = Order::YThenX;
    double tol = 1e-3;
    bool holonomy = false;
};

SurfaceInput parse_surface(const Context& ctx, const json& b)
{
    const std::string path = "surface";
    allow(b, path, {"form", "sequence", "base", "eps", "resolution", "step", "order", "tangency_tol", "holonomy"});
    SurfaceInput in;
    in.form = parse_form(ctx, need(b, path, "form"), "surface.form", ctx.chart);
    if (const json* s = find(b, "sequence")) {
        const json& sj = *s;
        allow(sj, "surface.sequence", {"mollify"});
        in.seq = parse_sequence(ctx, sj, "surface.sequence", in.form);
    }
    in.base = point(need(b, path, "base"), "surface.base", ctx.chart.dim());
    in.eps = number(b, path, "eps", 0.5);
    if (!(in.eps > 0.0)) schema("surface.eps", "must be positive");
    if (const json* r = find(b, "resolution")) {
        if (r->is_number_integer()) {
            in.n1 = in.n2 = integer(*r, "surface.resolution");
        } else {
            const auto v = numbers(*r, "surface.resolution", 2);
            if (v.size() != 2) schema("surface.resolution", "expected n or [n1, n2]");
            in.n1 = static_cast<int>(v[0]);
            in.n2 = static_cast<int>(v[1]);
        }
    }
    if (ctx.chart.dim() == 2) in.n2 = 1;
    if (in.n1 < 3 || in.n1 % 2 == 0 || (ctx.chart.dim() == 3 && (in.n2 < 3 || in.n2 % 2 == 0))) {
        schema("surface.resolution", "resolutions must be odd and at least 3");
    }
    in.step = number(b, path, "step", 1e-3);
    if (!(in.step > 0.0)) schema("surface.step", "must be positive");
    if (const json* o = find(b, "order")) {
        const std::string s = text(*o, "surface.order");
        if (s == "yx") in.order = Order::YThenX;
        else if (s == "xy") in.order = Order::XThenY;
        else schema("surface.order", "expected 'yx' or 'xy'");
    }
    in.tol = number(b, path, "tangency_tol", 1e-3);
    in.holonomy = boolean(b, path, "holonomy", false);
    return in;
}

RunResult run_surface(const SurfaceInput& in)
{
    RunResult out;
    json j;
    SurfaceMesh mesh;
    if (in.seq) {
        auto meshes = synthesize_sequence(*in.seq, in.base, in.eps, in.n1, in.n2, in.step);
        const ConvergenceReport c = convergence_report(meshes, in.form, in.tol);
        out.violated = !c.cauchy_like || !c.limit_tangent;
        j = header(Command::Surface, out.violated);
        json succ = json::array();
        for (double s : c.successive) succ.push_back(num(s));
        j["convergence"] = {{"successive", succ}, {"cauchy_like", c.cauchy_like},
                            {"final_tangency", num(c.final_tangency)}, {"limit_tangent", c.limit_tangent}};
        json scales = json::array();
        for (const auto& a : in.seq->approximants) scales.push_back(a.scale);
        j["scales"] = scales;
        mesh = std::move(meshes.back());
    } else {
        mesh = synthesize(canonical_frame(in.form), in.base, in.eps, in.n1, in.n2, in.step, in.order);
    }
    const Tangency t = tangency_residual(mesh, in.form);
    mesh.angles = t.angles;
    if (!in.seq) {
        out.violated = !(t.sup <= in.tol);
        j = header(Command::Surface, out.violated);
    }
    const int dim = in.form.dim();
    j["base"] = point_json(in.base, dim);
    j["eps"] = in.eps;
    j["resolution"] = {in.n1, in.n2};
    j["step"] = in.step;
    j["order"] = in.order == Order::YThenX ? "yx" : "xy";
    j["tangency"] = {{"sup", num(t.sup)}, {"at", {t.sup_i, t.sup_j}}, {"degenerate", t.degenerate}, {"tol", in.tol}};
    if (in.holonomy && dim == 3) {
        const CanonicalFrame frame = canonical_frame(in.seq ? in.seq->approximants.back().form : in.form);
        j["holonomy"] = num(holonomy(frame, in.base, in.eps, in.n1, in.n2, in.step));
    }
    std::ostringstream csv;
    write_csv(mesh, csv);
    out.csv = csv.str();
    out.report = j.dump(2);
    return out;
}

// ---- pfaff ----

struct PfaffInput
{
    PfaffProblem problem;
    std::optional<StructuredCoefficients> structured;
    std::optional<MollifierSchedule> schedule;
    Grid grid;
    double step = 1e-3;
    SweepOrder order = SweepOrder::XFirst;
    bool crosscheck = true;
    double crosscheck_tol = 1e-4;
    std::optional<ScalarField> exact;
    int region_nodes = 9;
};

PfaffInput parse_pfaff(const Context& ctx, const json& b)
{
    const std::string path = "pfaff";
    allow(b, path, {"a", "b", "structured", "init", "grid", "z", "step", "order", "crosscheck", "crosscheck_tol", "exact"});
    if (ctx.chart.dim() != 3) schema("chart.dim", "pfaff problems live on a 3-D chart (x, y, z)");
    Chart chart = ctx.chart;
    if (const json* z = find(b, "z")) {
        std::array<Interval, 3> bounds{chart.bounds(0), chart.bounds(1), interval(*z, "pfaff.z")};
        chart = Chart(3, bounds, {chart.margin(0), chart.margin(1), chart.margin(2)});
    }
    PfaffInput in;
    const Point init = point(need(b, path, "init"), "pfaff.init", 3);
    if (!chart.contains(init)) schema("pfaff.init", "initial point lies outside the chart");
    const json* s = find(b, "structured");
    const bool direct = find(b, "a") || find(b, "b");
    if (direct == (s != nullptr)) schema(path, "give either 'a' and 'b' or 'structured'");
    if (s) {
        const std::string sp = "pfaff.structured";
        allow(*s, sp, {"A", "B", "F", "lipschitz", "schedule", "region_nodes"});
        StructuredCoefficients c;
        c.A = resolve(ctx, need(*s, sp, "A"), join(sp, "A"), chart, Smoothness::Continuous);
        c.B = resolve(ctx, need(*s, sp, "B"), join(sp, "B"), chart, Smoothness::Continuous);
        c.F = resolve(ctx, need(*s, sp, "F"), join(sp, "F"), chart, Smoothness::Continuous);
        c.lipschitz = number(need(*s, sp, "lipschitz"), join(sp, "lipschitz"));
        if (!(c.lipschitz >= 0.0)) schema(join(sp, "lipschitz"), "must be non-negative");
        if (const json* sc = find(*s, "schedule")) in.schedule = MollifierSchedule{schedule(*sc, join(sp, "schedule"))};
        in.region_nodes = integer(*s, sp, "region_nodes", 9);
        if (in.region_nodes < 2) schema(join(sp, "region_nodes"), "need at least 2");
        in.structured = c;
        in.problem = structured_problem(c, init);
    } else {
        in.problem.a = resolve(ctx, need(b, path, "a"), "pfaff.a", chart, Smoothness::Continuous);
        in.problem.b = resolve(ctx, need(b, path, "b"), "pfaff.b", chart, Smoothness::Continuous);
        in.problem.init = init;
    }
    {
        const std::string gp = "pfaff.grid";
        const json& g = need(b, path, "grid");
        allow(g, gp, {"nodes", "box"});
        int nx = 0, ny = 0;
        const json& n = need(g, gp, "nodes");
        if (n.is_number_integer()) {
            nx = ny = integer(n, join(gp, "nodes"));
        } else {
            const auto v = numbers(n, join(gp, "nodes"), 2);
            if (v.size() != 2) schema(join(gp, "nodes"), "expected n or [nx, ny]");
            nx = static_cast<int>(v[0]);
            ny = static_cast<int>(v[1]);
        }
        if (nx < 2 || ny < 2) schema(join(gp, "nodes"), "need at least 2 nodes per axis");
        std::array<Interval, 3> box{chart.bounds(0), chart.bounds(1), Interval{0.0, 0.0}};
        if (const json* bx = find(g, "box")) {
            if (!bx->is_array() || bx->size() != 2) schema(join(gp, "box"), "expected [[x0, x1], [y0, y1]]");
            box[0] = interval((*bx)[0], join(gp, "box.0"));
            box[1] = interval((*bx)[1], join(gp, "box.1"));
        }
        in.grid = Grid(2, box, {nx, ny, 1});
    }
    in.step = number(b, path, "step", 1e-3);
    if (!(in.step > 0.0)) schema("pfaff.step", "must be positive");
    if (const json* o = find(b, "order")) {
        const std::string os = text(*o, "pfaff.order");
        if (os == "x" || os == "x-first") in.order = SweepOrder::XFirst;
        else if (os == "y" || os == "y-first") in.order = SweepOrder::YFirst;
        else schema("pfaff.order", "expected 'x' or 'y'");
    }
    in.crosscheck = boolean(b, path, "crosscheck", true);
    in.crosscheck_tol = number(b, path, "crosscheck_tol", 1e-4);
    if (const json* e = find(b, "exact")) {
        in.exact = resolve(ctx, *e, "pfaff.exact", Chart(2, {in.grid.box(0), in.grid.box(1), Interval{0.0, 1.0}}));
    }
    return in;
}

RunResult run_pfaff(const PfaffInput& in)
{
    const ScalarField f = solve(in.problem, in.grid, in.order, in.step);
    RunResult out;
    json j;
    double cross = NAN;
    if (in.crosscheck) {
        const ScalarField other = solve(in.problem, in.grid, in.order == SweepOrder::XFirst ? SweepOrder::YFirst : SweepOrder::XFirst, in.step);
        cross = 0.0;
        for (std::size_t k = 0; k < in.grid.size(); ++k) {
            const Point p = in.grid.node(k);
            cross = std::max(cross, std::fabs(f(p) - other(p)));
        }
        out.violated = !(cross <= in.crosscheck_tol);
    }
    j = header(Command::Pfaff, out.violated);
    j["order"] = to_string(in.order);
    j["step"] = in.step;
    j["init"] = point_json(in.problem.init, 3);
    j["grid"] = {{"nodes", {in.grid.count(0), in.grid.count(1)}},
                 {"box", {{in.grid.box(0).lo, in.grid.box(0).hi}, {in.grid.box(1).lo, in.grid.box(1).hi}}}};
    if (in.crosscheck) j["crosscheck"] = {{"sup", num(cross)}, {"tol", in.crosscheck_tol}};
    if (in.grid.count(0) >= 7 && in.grid.count(1) >= 7) {
        const PfaffResidual r = residual(in.problem, f, in.grid);
        j["residual"] = {{"x", num(r.x)}, {"y", num(r.y)}};
    }
    if (in.exact) {
        double err = 0.0;
        for (std::size_t k = 0; k < in.grid.size(); ++k) {
            const Point p = in.grid.node(k);
            err = std::max(err, std::fabs(f(p) - (*in.exact)(p)));
        }
        j["exact_error"] = num(err);
    }
    if (in.structured && in.schedule) {
        const ApproxSequence seq = structured_sequence(*in.structured, *in.schedule);
        const auto plain = plain_defects(seq, Grid::over_interior(in.problem.chart(), in.region_nodes));
        const auto fsups = structured_f_derivative_sups(*in.structured, *in.schedule);
        json rows = json::array();
        for (std::size_t k = 0; k < plain.size(); ++k) {
            rows.push_back({{"eps", plain[k].eps}, {"wedge_norm", num(plain[k].wedge_norm)},
                            {"deta_norm", num(plain[k].deta_norm)}, {"distance", num(plain[k].distance)},
                            {"f_derivative_sup", num(fsups[k])}});
        }
        j["structured"] = {{"lipschitz", in.structured->lipschitz}, {"approximants", rows}};
    }
    std::ostringstream csv;
    write_csv(f, csv);
    out.csv = csv.str();
    out.report = j.dump(2);
    return out;
}

// ---- ode-check ----

struct OdeInput
{
    Modulus omega;
    std::string modulus_desc;
    std::vector<double> schedule;
    std::vector<Condition> conditions;
};

OdeInput parse_ode(const Context& ctx, const json& b)
{
    const std::string path = "ode-check";
    allow(b, path, {"modulus", "schedule", "conditions"});
    OdeInput in;
    const json& m = need(b, path, "modulus");
    const std::string mp = "ode-check.modulus";
    if (m.is_string()) {
        try {
            in.omega = Modulus::analytic(m.get<std::string>());
        } catch (const Error& e) {
            schema(mp, e.what());
        }
    } else {
        allow(m, mp, {"field", "scales", "pairs", "seed"});
        const ScalarField g = resolve(ctx, need(m, mp, "field"), join(mp, "field"), ctx.chart);
        const auto scales = schedule(need(m, mp, "scales"), join(mp, "scales"));
        const int pairs = integer(m, mp, "pairs", 10000);
        if (pairs < 1) schema(join(mp, "pairs"), "must be positive");
        in.omega = estimate_modulus(g, scales, static_cast<std::size_t>(pairs),
                                    static_cast<std::uint64_t>(integer(m, mp, "seed", 20240917)));
    }
    in.modulus_desc = in.omega.describe();
    in.schedule = find(b, "schedule") ? schedule(b["schedule"], "ode-check.schedule") : default_ode_schedule();
    if (const json* c = find(b, "conditions")) {
        if (!c->is_array() || c->empty()) schema("ode-check.conditions", "expected a non-empty array");
        for (std::size_t i = 0; i < c->size(); ++i) {
            try {
                in.conditions.push_back(parse_condition(text((*c)[i], join("ode-check.conditions", i))));
            } catch (const Error& e) {
                if (e.code() == ErrorCode::Schema) throw;
                schema(join("ode-check.conditions", i), e.what());
            }
        }
    } else {
        in.conditions = {Condition::OdeStar, Condition::OdeStarB, Condition::Osgood};
    }
    return in;
}

RunResult run_ode(const OdeInput& in)
{
    RunResult out;
    json results = json::array();
    for (Condition c : in.conditions) {
        const ConditionVerdict v = check(in.omega, c, in.schedule);
        out.violated = out.violated || v.verdict == Verdict::Violated;
        json rows = json::array();
        for (const auto& r : v.rows) {
            rows.push_back({{"eps", r.eps}, {"integral", num(r.integral)}, {"integral_error", num(r.integral_error)},
                            {"log_quantity", num(r.log_quantity)}});
        }
        results.push_back({{"condition", to_string(c)}, {"verdict", to_string(v.verdict)}, {"rate", num(v.rate)},
                           {"rationale", v.rationale}, {"rows", rows}});
    }
    json j = header(Command::OdeCheck, out.violated);
    j["modulus"] = in.modulus_desc;
    j["schedule"] = in.schedule;
    j["conditions"] = results;
    j["notes"] = {"ODESTAR and OSGOOD are reported side by side; disagreements are not interpreted"};
    out.report = j.dump(2);
    return out;
}

// ---- mollify ----

struct MollifyInput
{
    ScalarField g;
    std::optional<Modulus> omega;
    MollifierSchedule schedule;
    MollifierCheckOptions opt;
};

MollifyInput parse_mollify(const Context& ctx, const json& b)
{
    const std::string path = "mollify";
    allow(b, path, {"field", "modulus", "schedule", "k_limit", "samples", "pairs", "seed"});
    MollifyInput in;
    in.g = resolve(ctx, need(b, path, "field"), "mollify.field", ctx.chart, Smoothness::Continuous);
    if (const json* m = find(b, "modulus")) {
        try {
            in.omega = Modulus::analytic(text(*m, "mollify.modulus"));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Schema) throw;
            schema("mollify.modulus", e.what());
        }
    }
    in.schedule.scales = schedule(need(b, path, "schedule"), "mollify.schedule");
    in.opt.k_limit = number(b, path, "k_limit", 100.0);
    const int samples = integer(b, path, "samples", 10000);
    const int pairs = integer(b, path, "pairs", 10000);
    if (samples < 1 || pairs < 1) schema(path, "samples and pairs must be positive");
    in.opt.min_samples = static_cast<std::size_t>(samples);
    in.opt.modulus_pairs = static_cast<std::size_t>(pairs);
    in.opt.seed = static_cast<std::uint64_t>(integer(b, path, "seed", 20240917));
    return in;
}

RunResult run_mollify(const MollifyInput& in)
{
    const Modulus omega = in.omega ? *in.omega : estimate_modulus(in.g, in.schedule.scales, in.opt.modulus_pairs, in.opt.seed);
    const MollifierBoundReport rep = verify_mollifier_bounds(in.g, omega, in.schedule, in.opt);
    RunResult out;
    out.violated = !rep.consistent;
    json j = header(Command::Mollify, out.violated);
    j["modulus"] = omega.describe();
    j["modulus_source"] = in.omega ? "declared" : "estimated";
    json rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"eps", r.eps}, {"sup_err", num(r.sup_err)}, {"sup_deriv", num(r.sup_deriv)},
                        {"omega_integral", num(r.omega_integral)}, {"err_bound_unit", num(r.err_bound_unit)},
                        {"deriv_bound_unit", num(r.deriv_bound_unit)}, {"k_err", num(r.k_err)},
                        {"k_deriv", num(r.k_deriv)}});
    }
    j["rows"] = rows;
    j["fitted_k"] = num(rep.fitted_k);
    j["k_limit"] = in.opt.k_limit;
    j["consistent"] = rep.consistent;
    j["deriv_log_slope"] = num(rep.deriv_log_slope);
    j["modulus_pairs_checked"] = rep.modulus_pairs_checked;
    j["sample_points"] = rep.sample_points;
    out.report = j.dump(2);
    return out;
}

const char* block_name(Command c)
{
    return to_string(c);
}

} // namespace

void ProblemSpec::validate() const
{
    const Context ctx = parse_context(*m_impl);
    const json& doc = m_impl->doc;
    if (const json* b = find(doc, "certify")) parse_certify(ctx, *b);
    if (const json* b = find(doc, "surface")) parse_surface(ctx, *b);
    if (const json* b = find(doc, "pfaff")) parse_pfaff(ctx, *b);
    if (const json* b = find(doc, "ode-check")) parse_ode(ctx, *b);
    if (const json* b = find(doc, "mollify")) parse_mollify(ctx, *b);
}

RunResult run(const ProblemSpec& spec, Command command)
{
    spec.validate();
    const Context ctx = parse_context(spec.impl());
    const json* b = find(spec.impl().doc, block_name(command));
    if (!b) schema(block_name(command), "the problem file has no block for this command");
    RunResult out;
    try {
        switch (command) {
        case Command::Certify: out = run_certify(parse_certify(ctx, *b)); break;
        case Command::Surface: out = run_surface(parse_surface(ctx, *b)); break;
        case Command::Pfaff: out = run_pfaff(parse_pfaff(ctx, *b)); break;
        case Command::OdeCheck: out = run_ode(parse_ode(ctx, *b)); break;
        case Command::Mollify: out = run_mollify(parse_mollify(ctx, *b)); break;
        }
    } catch (const Error& e) {
        throw Error(e.code(), std::string(to_string(command)) + ": " + e.what());
    }
    out.command = command;
    out.report += "\n";
    return out;
}

} // namespace frobkit
