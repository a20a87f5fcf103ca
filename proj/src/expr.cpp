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
#include <frobkit/expr.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace frobkit {

VariableSet VariableSet::chart(int dim)
{
    if (dim != 2 && dim != 3) {
        throw Error(ErrorCode::InvalidArgument, "chart dimension must be 2 or 3");
    }
    VariableSet vs;
    vs.m_names = {{"x1", 0}, {"x", 0}, {"x2", 1}, {"y", 1}};
    if (dim == 3) {
        vs.m_names.emplace_back("x3", 2);
        vs.m_names.emplace_back("z", 2);
    }
    vs.m_slots = dim;
    return vs;
}

VariableSet VariableSet::scalar(std::string name)
{
    VariableSet vs;
    vs.m_names.emplace_back(std::move(name), 0);
    vs.m_slots = 1;
    return vs;
}

int VariableSet::lookup(std::string_view name) const
{
    for (const auto& [n, slot] : m_names) {
        if (n == name) return slot;
    }
    return -1;
}

namespace {

enum class Op {
    Number,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Exp,
    Ln,
    Abs,
    Sqrt,
    Min,
    Max,
};

struct Node
{
    Op op = Op::Number;
    double number = 0.0;
    int slot = -1;
    std::string name;
    bool call_syntax = false; // pow(a,b) rather than a^b
    std::vector<std::shared_ptr<const Node>> args;
};

using NodePtr = std::shared_ptr<const Node>;

struct FunctionInfo
{
    const char* name;
    Op op;
    int arity;
};

constexpr std::array<FunctionInfo, 9> k_functions{{
    {"sin", Op::Sin, 1},
    {"cos", Op::Cos, 1},
    {"exp", Op::Exp, 1},
    {"ln", Op::Ln, 1},
    {"abs", Op::Abs, 1},
    {"sqrt", Op::Sqrt, 1},
    {"pow", Op::Pow, 2},
    {"min", Op::Min, 2},
    {"max", Op::Max, 2},
}};

const char* function_name(Op op)
{
    for (const auto& f : k_functions) {
        if (f.op == op) return f.name;
    }
    return "?";
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print_node(const Node& n, std::string& out)
{
    switch (n.op) {
    case Op::Number: out += format_number(n.number); return;
    case Op::Variable: out += n.name; return;
    case Op::Neg:
        out += "(-";
        print_node(*n.args[0], out);
        out += ")";
        return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow: {
        if (n.op == Op::Pow && n.call_syntax) break;
        static constexpr const char* sym[] = {"+", "-", "*", "/", "^"};
        const int idx = static_cast<int>(n.op) - static_cast<int>(Op::Add);
        out += "(";
        print_node(*n.args[0], out);
        out += sym[idx];
        print_node(*n.args[1], out);
        out += ")";
        return;
    }
    default: break;
    }
    out += function_name(n.op);
    out += "(";
    for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ",";
        print_node(*n.args[i], out);
    }
    out += ")";
}

std::string print_node(const Node& n)
{
    std::string s;
    print_node(n, s);
    return s;
}

class Parser
{
public:
    Parser(std::string_view text, const VariableSet& vars)
        : m_text(text)
        , m_vars(vars)
    {}

    NodePtr parse()
    {
        auto root = parse_additive();
        skip_ws();
        if (m_pos != m_text.size()) fail("unexpected character '" + std::string(1, m_text[m_pos]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, m_pos); }

    void skip_ws()
    {
        while (m_pos < m_text.size() &&
               (m_text[m_pos] == ' ' || m_text[m_pos] == '\t' || m_text[m_pos] == '\n' ||
                m_text[m_pos] == '\r')) {
            ++m_pos;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (m_pos < m_text.size() && m_text[m_pos] == c) {
            ++m_pos;
            return true;
        }
        return false;
    }

    static NodePtr make(Op op, std::vector<NodePtr> args)
    {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->args = std::move(args);
        return n;
    }

    NodePtr parse_additive()
    {
        auto lhs = parse_multiplicative();
        for (;;) {
            if (accept('+')) {
                lhs = make(Op::Add, {lhs, parse_multiplicative()});
            } else if (accept('-')) {
                lhs = make(Op::Sub, {lhs, parse_multiplicative()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_multiplicative()
    {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Op::Mul, {lhs, parse_unary()});
            } else if (accept('/')) {
                lhs = make(Op::Div, {lhs, parse_unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary()
    {
        if (accept('-')) return make(Op::Neg, {parse_unary()});
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    // '^' is right associative and binds tighter than unary minus on its left,
    // so -2^2 == -4 and 2^-1 == 0.5.
    NodePtr parse_power()
    {
        auto base = parse_primary();
        if (accept('^')) return make(Op::Pow, {base, parse_unary()});
        return base;
    }

    NodePtr parse_primary()
    {
        skip_ws();
        if (m_pos >= m_text.size()) fail("unexpected end of expression");
        const char c = m_text[m_pos];
        if (c == '(') {
            ++m_pos;
            auto inner = parse_additive();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr parse_number()
    {
        const std::size_t start = m_pos;
        auto is_digit = [&](std::size_t i) { return i < m_text.size() && m_text[i] >= '0' && m_text[i] <= '9'; };
        while (is_digit(m_pos)) ++m_pos;
        if (m_pos < m_text.size() && m_text[m_pos] == '.') {
            ++m_pos;
            while (is_digit(m_pos)) ++m_pos;
        }
        if (m_pos < m_text.size() && (m_text[m_pos] == 'e' || m_text[m_pos] == 'E')) {
            std::size_t look = m_pos + 1;
            if (look < m_text.size() && (m_text[look] == '+' || m_text[look] == '-')) ++look;
            if (is_digit(look)) {
                m_pos = look;
                while (is_digit(m_pos)) ++m_pos;
            }
        }
        double value = 0.0;
        const char* first = m_text.data() + start;
        const char* last = m_text.data() + m_pos;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            m_pos = start;
            fail("malformed number");
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Number;
        n->number = value;
        return n;
    }

    NodePtr parse_identifier()
    {
        const std::size_t start = m_pos;
        while (m_pos < m_text.size() &&
               (std::isalnum(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '_')) {
            ++m_pos;
        }
        const std::string name(m_text.substr(start, m_pos - start));
        skip_ws();
        if (m_pos < m_text.size() && m_text[m_pos] == '(') {
            const FunctionInfo* info = nullptr;
            for (const auto& f : k_functions) {
                if (name == f.name) info = &f;
            }
            if (!info) {
                m_pos = start;
                fail("unknown function '" + name + "'");
            }
            ++m_pos;
            std::vector<NodePtr> args;
            if (!accept(')')) {
                do {
                    args.push_back(parse_additive());
                } while (accept(','));
                if (!accept(')')) fail("expected ')' or ','");
            }
            if (static_cast<int>(args.size()) != info->arity) {
                m_pos = start;
                fail("function '" + name + "' takes " + std::to_string(info->arity) + " argument(s), got " +
                     std::to_string(args.size()));
            }
            auto n = std::make_shared<Node>();
            n->op = info->op;
            n->call_syntax = true;
            n->args = std::move(args);
            return n;
        }
        const int slot = m_vars.lookup(name);
        if (slot < 0) {
            m_pos = start;
            fail("unknown identifier '" + name + "'");
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Variable;
        n->slot = slot;
        n->name = name;
        return n;
    }

    std::string_view m_text;
    const VariableSet& m_vars;
    std::size_t m_pos = 0;
};

struct Instr
{
    Op op;
    double number;
    int slot;
    const Node* node;
};

void compile(const Node& n, std::vector<Instr>& prog, int& depth, int& max_depth)
{
    for (const auto& a : n.args) compile(*a, prog, depth, max_depth);
    if (n.op == Op::Number || n.op == Op::Variable) {
        ++depth;
    } else {
        depth -= static_cast<int>(n.args.size()) - 1;
    }
    max_depth = std::max(max_depth, depth);
    prog.push_back(Instr{n.op, n.number, n.slot, &n});
}

void collect_mask(const Node& n, unsigned& mask)
{
    if (n.op == Op::Variable) mask |= 1u << n.slot;
    for (const auto& a : n.args) collect_mask(*a, mask);
}

[[noreturn]] void domain_fail(const char* what, const Node* node)
{
    throw DomainError(what, print_node(*node));
}

bool is_integer(double v)
{
    return std::isfinite(v) && std::floor(v) == v;
}

double checked_pow(double base, double expo, const Node* node)
{
    if (base < 0.0 && !is_integer(expo)) domain_fail("fractional power of a negative number", node);
    if (base == 0.0 && expo < 0.0) domain_fail("division by zero", node);
    return std::pow(base, expo);
}

struct Dual
{
    double v;
    double d;
};

} // namespace

struct Expression::Impl
{
    std::string text;
    NodePtr root;
    std::vector<Instr> program;
    int max_depth = 1;
    unsigned mask = 0;
};

namespace {

template <typename T, typename Fn>
auto with_stack(int depth, Fn&& fn)
{
    if (depth <= 32) {
        std::array<T, 32> stack;
        return fn(stack.data());
    }
    std::vector<T> stack(static_cast<std::size_t>(depth));
    return fn(stack.data());
}

} // namespace

Expression Expression::parse(std::string_view text, const VariableSet& vars)
{
    auto impl = std::make_shared<Impl>();
    impl->text = std::string(text);
    Parser parser(impl->text, vars);
    impl->root = parser.parse();
    int depth = 0;
    compile(*impl->root, impl->program, depth, impl->max_depth);
    collect_mask(*impl->root, impl->mask);
    return Expression(std::move(impl));
}

Expression Expression::constant(double value)
{
    auto impl = std::make_shared<Impl>();
    auto n = std::make_shared<Node>();
    n->op = Op::Number;
    n->number = value;
    impl->root = n;
    impl->text = format_number(value);
    int depth = 0;
    compile(*impl->root, impl->program, depth, impl->max_depth);
    return Expression(std::move(impl));
}

double Expression::evaluate(const Point& p) const
{
    const Impl& im = *m_impl;
    return with_stack<double>(im.max_depth, [&](double* st) {
        int top = -1;
        for (const Instr& in : im.program) {
            switch (in.op) {
            case Op::Number: st[++top] = in.number; break;
            case Op::Variable: st[++top] = p[static_cast<std::size_t>(in.slot)]; break;
            case Op::Neg: st[top] = -st[top]; break;
            case Op::Add: st[top - 1] += st[top]; --top; break;
            case Op::Sub: st[top - 1] -= st[top]; --top; break;
            case Op::Mul: st[top - 1] *= st[top]; --top; break;
            case Op::Div:
                if (st[top] == 0.0) domain_fail("division by zero", in.node);
                st[top - 1] /= st[top];
                --top;
                break;
            case Op::Pow:
                st[top - 1] = checked_pow(st[top - 1], st[top], in.node);
                --top;
                break;
            case Op::Sin: st[top] = std::sin(st[top]); break;
            case Op::Cos: st[top] = std::cos(st[top]); break;
            case Op::Exp: st[top] = std::exp(st[top]); break;
            case Op::Ln:
                if (!(st[top] > 0.0)) domain_fail("logarithm of a non-positive number", in.node);
                st[top] = std::log(st[top]);
                break;
            case Op::Abs: st[top] = std::fabs(st[top]); break;
            case Op::Sqrt:
                if (st[top] < 0.0) domain_fail("square root of a negative number", in.node);
                st[top] = std::sqrt(st[top]);
                break;
            case Op::Min: st[top - 1] = std::min(st[top - 1], st[top]); --top; break;
            case Op::Max: st[top - 1] = std::max(st[top - 1], st[top]); --top; break;
            }
        }
        if (!std::isfinite(st[0])) domain_fail("non-finite result", im.root.get());
        return st[0];
    });
}

std::pair<double, double> Expression::evaluate_with_derivative(const Point& p, int axis) const
{
    const Impl& im = *m_impl;
    return with_stack<Dual>(im.max_depth, [&](Dual* st) {
        int top = -1;
        for (const Instr& in : im.program) {
            switch (in.op) {
            case Op::Number: st[++top] = {in.number, 0.0}; break;
            case Op::Variable:
                st[++top] = {p[static_cast<std::size_t>(in.slot)], in.slot == axis ? 1.0 : 0.0};
                break;
            case Op::Neg: st[top] = {-st[top].v, -st[top].d}; break;
            case Op::Add:
                st[top - 1] = {st[top - 1].v + st[top].v, st[top - 1].d + st[top].d};
                --top;
                break;
            case Op::Sub:
                st[top - 1] = {st[top - 1].v - st[top].v, st[top - 1].d - st[top].d};
                --top;
                break;
            case Op::Mul: {
                const Dual a = st[top - 1], b = st[top];
                st[--top] = {a.v * b.v, a.d * b.v + a.v * b.d};
                break;
            }
            case Op::Div: {
                const Dual a = st[top - 1], b = st[top];
                if (b.v == 0.0) domain_fail("division by zero", in.node);
                st[--top] = {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
                break;
            }
            case Op::Pow: {
                const Dual a = st[top - 1], b = st[top];
                const double v = checked_pow(a.v, b.v, in.node);
                double d = 0.0;
                if (b.d == 0.0) {
                    if (a.d != 0.0) d = b.v * checked_pow(a.v, b.v - 1.0, in.node) * a.d;
                } else {
                    if (!(a.v > 0.0)) domain_fail("variable exponent needs a positive base", in.node);
                    d = v * (b.d * std::log(a.v) + b.v * a.d / a.v);
                }
                st[--top] = {v, d};
                break;
            }
            case Op::Sin: st[top] = {std::sin(st[top].v), std::cos(st[top].v) * st[top].d}; break;
            case Op::Cos: st[top] = {std::cos(st[top].v), -std::sin(st[top].v) * st[top].d}; break;
            case Op::Exp: {
                const double e = std::exp(st[top].v);
                st[top] = {e, e * st[top].d};
                break;
            }
            case Op::Ln:
                if (!(st[top].v > 0.0)) domain_fail("logarithm of a non-positive number", in.node);
                st[top] = {std::log(st[top].v), st[top].d / st[top].v};
                break;
            case Op::Abs: {
                const double s = st[top].v > 0.0 ? 1.0 : (st[top].v < 0.0 ? -1.0 : 0.0);
                st[top] = {std::fabs(st[top].v), s * st[top].d};
                break;
            }
            case Op::Sqrt: {
                if (st[top].v < 0.0) domain_fail("square root of a negative number", in.node);
                const double r = std::sqrt(st[top].v);
                st[top] = {r, st[top].d == 0.0 ? 0.0 : st[top].d / (2.0 * r)};
                break;
            }
            case Op::Min:
                st[top - 1] = st[top - 1].v <= st[top].v ? st[top - 1] : st[top];
                --top;
                break;
            case Op::Max:
                st[top - 1] = st[top - 1].v >= st[top].v ? st[top - 1] : st[top];
                --top;
                break;
            }
        }
        if (!std::isfinite(st[0].v)) domain_fail("non-finite result", im.root.get());
        if (!std::isfinite(st[0].d)) domain_fail("non-finite derivative", im.root.get());
        return std::pair<double, double>{st[0].v, st[0].d};
    });
}

std::string Expression::print() const
{
    return print_node(*m_impl->root);
}

const std::string& Expression::source() const
{
    return m_impl->text;
}

unsigned Expression::variable_mask() const
{
    return m_impl->mask;
}

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::OutOfBounds: return "out-of-bounds";
    case ErrorCode::StepUnderflow: return "step-underflow";
    case ErrorCode::NotDifferentiable: return "not-differentiable";
    case ErrorCode::Transversality: return "transversality";
    case ErrorCode::DomainExit: return "domain-exit";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Io: return "io";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::ModulusViolation: return "modulus-violation";
    case ErrorCode::Numerical: return "numerical";
    }
    return "unknown";
}

std::string format_point(const Point& p, int dim)
{
    std::string s = "(";
    for (int i = 0; i < dim; ++i) {
        if (i) s += ", ";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", p[static_cast<std::size_t>(i)]);
        s += buf;
    }
    return s + ")";
}

} // namespace frobkit
