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

#include <frobkit/mollify.hpp>

#include <string>
#include <vector>

namespace frobkit {

enum class Condition { OdeStar, OdeStarB, Osgood };
const char* to_string(Condition c);
Condition parse_condition(const std::string& s);

enum class Verdict { Satisfied, Violated, Inconclusive };
const char* to_string(Verdict v);

struct ConditionRow
{
    double eps = 0.0;
    /// ODESTAR: int_0^eps omega. ODESTARB: omega(eps). OSGOOD: int_eps^{eps_1} 1/omega.
    double integral = 0.0;
    double integral_error = 0.0;
    /// Natural log of the monitored quantity (OSGOOD: of the partial integral, -inf at eps_1).
    double log_quantity = 0.0;
};

struct ConditionVerdict
{
    Condition condition = Condition::OdeStar;
    std::vector<ConditionRow> rows;
    Verdict verdict = Verdict::Inconclusive;
    /// ODESTAR/ODESTARB: slope of ln(quantity) against ln(eps). OSGOOD: fitted decay
    /// exponent p of the partial-integral increments per unit of ln(1/eps).
    double rate = 0.0;
    std::string rationale;
};

///
/// Evaluates one condition along a strictly decreasing schedule spanning at least four
/// decades. ODESTAR is handled in log space:
/// ln Q = ln(I / eps) + I / eps^2 with I = int_0^eps omega.
///
ConditionVerdict check(const Modulus& omega, Condition condition, const std::vector<double>& schedule);

/// All three conditions, in enum order.
std::vector<ConditionVerdict> check_all(const Modulus& omega, const std::vector<double>& schedule);

/// 1e-1, 1e-2, ..., 1e-8.
std::vector<double> default_ode_schedule();

} // namespace frobkit
