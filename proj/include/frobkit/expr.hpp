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

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace frobkit {

///
/// Names that an expression may reference, each bound to a slot of the evaluation point.
///
class VariableSet
{
public:
    /// x1,x2 (aliases x,y) and, for dim 3, x3 (alias z).
    static VariableSet chart(int dim);

    /// A single named variable in slot 0, e.g. the argument of a modulus of continuity.
    static VariableSet scalar(std::string name);

    /// Slot for a name, or -1.
    int lookup(std::string_view name) const;
    int slots() const { return m_slots; }

private:
    std::vector<std::pair<std::string, int>> m_names;
    int m_slots = 0;
};

///
/// Immutable parsed scalar expression over up to three real variables.
///
/// Grammar: infix + - * / ^, unary +/-, '^' binds tightest and is right associative,
/// functions sin cos exp ln abs sqrt (one argument) and pow min max (two arguments).
/// Evaluation is reentrant; copies share the compiled program.
///
class Expression
{
public:
    Expression() = default;

    static Expression parse(std::string_view text, const VariableSet& vars = VariableSet::chart(3));
    static Expression constant(double value);

    /// Evaluate at p. Throws DomainError on a singularity or a non-finite result.
    double evaluate(const Point& p) const;

    /// Value and exact derivative with respect to slot `axis` (forward mode).
    std::pair<double, double> evaluate_with_derivative(const Point& p, int axis) const;

    /// Canonical fully parenthesised text; parse(print()) reproduces the value bit for bit.
    std::string print() const;

    const std::string& source() const;

    /// Bit i set when slot i is referenced.
    unsigned variable_mask() const;

    bool valid() const { return static_cast<bool>(m_impl); }

    struct Impl;

private:
    explicit Expression(std::shared_ptr<const Impl> impl)
        : m_impl(std::move(impl))
    {}

    std::shared_ptr<const Impl> m_impl;
};

} // namespace frobkit
