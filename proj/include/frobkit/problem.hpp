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

#include <filesystem>
#include <memory>
#include <string>

namespace frobkit {

enum class Command { Certify, Surface, Pfaff, OdeCheck, Mollify };

/// "certify", "surface", "pfaff", "ode-check", "mollify".
const char* to_string(Command c);
Command parse_command(const std::string& s);

inline constexpr int kSchemaVersion = 1;

///
/// A JSON problem file. Expression strings and CSV references (relative to the file's
/// directory) define fields on the declared chart; task blocks carry per-command input.
///
class ProblemSpec
{
public:
    ProblemSpec();
    ~ProblemSpec();
    ProblemSpec(const ProblemSpec&);
    ProblemSpec& operator=(const ProblemSpec&);

    static ProblemSpec load(const std::filesystem::path& file);
    static ProblemSpec parse(const std::string& text, const std::filesystem::path& base_dir = ".");

    ///
    /// Override one value by dotted path, e.g. "certify.t0" or "chart.margin.2". The
    /// value is read as JSON when it parses, otherwise as a string.
    ///
    void set(const std::string& path, const std::string& value);

    /// Full schema check of every block present. Throws Schema errors naming the path.
    void validate() const;

    std::string dump() const;

    struct Impl;
    const Impl& impl() const { return *m_impl; }

private:
    std::unique_ptr<Impl> m_impl;
};

struct RunResult
{
    Command command = Command::Certify;
    /// Deterministic JSON text.
    std::string report;
    /// Solution or mesh CSV (pfaff, surface); empty otherwise.
    std::string csv;
    /// The mathematical check said no (non-decreasing defect, violated condition, ...).
    bool violated = false;
};

/// Validates, then runs the command's block. Errors carry the command name as a prefix.
RunResult run(const ProblemSpec& spec, Command command);

} // namespace frobkit
