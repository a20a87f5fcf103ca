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

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace frobkit {

using Point = std::array<double, 3>;

enum class ErrorCode {
    Parse,
    Domain,
    OutOfBounds,
    StepUnderflow,
    NotDifferentiable,
    Transversality,
    DomainExit,
    Schema,
    Io,
    InvalidArgument,
    ModulusViolation,
    Numerical,
};

const char* to_string(ErrorCode code);

/// Base of every error thrown by the library. The code survives the C boundary.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what)
        , m_code(code)
    {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

class ParseError : public Error
{
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(ErrorCode::Parse, what + " at offset " + std::to_string(offset))
        , m_offset(offset)
    {}

    std::size_t offset() const noexcept { return m_offset; }

private:
    std::size_t m_offset;
};

/// Singularity hit while evaluating an expression (ln of non-positive, x/0, ...).
class DomainError : public Error
{
public:
    DomainError(const std::string& what, std::string subexpression)
        : Error(ErrorCode::Domain, what + " in '" + subexpression + "'")
        , m_sub(std::move(subexpression))
    {}

    const std::string& subexpression() const noexcept { return m_sub; }

private:
    std::string m_sub;
};

/// A flow left its chart. Carries the time and the last point that was still inside.
class DomainExitError : public Error
{
public:
    DomainExitError(const std::string& what, double time, const Point& where)
        : Error(ErrorCode::DomainExit, what)
        , m_time(time)
        , m_where(where)
    {}

    double time() const noexcept { return m_time; }
    const Point& where() const noexcept { return m_where; }

private:
    double m_time;
    Point m_where;
};

class TransversalityError : public Error
{
public:
    TransversalityError(const std::string& what, const Point& node)
        : Error(ErrorCode::Transversality, what)
        , m_node(node)
    {}

    const Point& node() const noexcept { return m_node; }

private:
    Point m_node;
};

std::string format_point(const Point& p, int dim = 3);

} // namespace frobkit
