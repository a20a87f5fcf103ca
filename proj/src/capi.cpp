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
#include <frobkit.h>
#include <frobkit/odeuniq.hpp>
#include <frobkit/problem.hpp>

#include <new>
#include <string>

struct frobkit_expr
{
    frobkit::Expression expr;
    int dim = 3;
};

struct frobkit_problem
{
    frobkit::ProblemSpec spec;
};

struct frobkit_report
{
    frobkit::RunResult result;
};

namespace {

thread_local std::string g_last_error;

frobkit_status fail(frobkit_status s, const char* msg)
{
    g_last_error = msg;
    return s;
}

template <class Fn>
frobkit_status guard(Fn&& fn)
{
    try {
        fn();
        g_last_error.clear();
        return FROBKIT_OK;
    } catch (const frobkit::Error& e) {
        return fail(static_cast<frobkit_status>(static_cast<int>(e.code()) + 1), e.what());
    } catch (const std::bad_alloc&) {
        return fail(FROBKIT_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FROBKIT_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FROBKIT_ERR_INTERNAL, "unknown failure");
    }
}

#define FROBKIT_NEED(ptr)                                                                                              \
    do {                                                                                                               \
        if (!(ptr)) return fail(FROBKIT_ERR_NULL_ARGUMENT, #ptr " is null");                                           \
    } while (0)

frobkit::Point load(const double* p, int dim)
{
    frobkit::Point x{};
    for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = p[i];
    return x;
}

} // namespace

extern "C" {

const char* frobkit_version(void)
{
    return "0.1.0";
}

const char* frobkit_status_name(frobkit_status status)
{
    switch (status) {
    case FROBKIT_OK: return "ok";
    case FROBKIT_ERR_NULL_ARGUMENT: return "null-argument";
    case FROBKIT_ERR_INTERNAL: return "internal";
    default: break;
    }
    const int c = static_cast<int>(status) - 1;
    if (c >= 0 && c <= static_cast<int>(frobkit::ErrorCode::Numerical)) {
        return frobkit::to_string(static_cast<frobkit::ErrorCode>(c));
    }
    return "unknown";
}

const char* frobkit_last_error(void)
{
    return g_last_error.c_str();
}

frobkit_status frobkit_expr_parse(const char* text, int dim, frobkit_expr** out)
{
    FROBKIT_NEED(text);
    FROBKIT_NEED(out);
    *out = nullptr;
    return guard([&] {
        auto e = std::make_unique<frobkit_expr>();
        e->expr = frobkit::Expression::parse(text, frobkit::VariableSet::chart(dim));
        e->dim = dim;
        *out = e.release();
    });
}

frobkit_status frobkit_expr_eval(const frobkit_expr* e, const double* point, double* value)
{
    FROBKIT_NEED(e);
    FROBKIT_NEED(point);
    FROBKIT_NEED(value);
    return guard([&] { *value = e->expr.evaluate(load(point, e->dim)); });
}

frobkit_status frobkit_expr_partial(const frobkit_expr* e, int axis, const double* point, double* value)
{
    FROBKIT_NEED(e);
    FROBKIT_NEED(point);
    FROBKIT_NEED(value);
    if (axis < 0 || axis >= e->dim) return fail(FROBKIT_ERR_INVALID_ARGUMENT, "axis out of range");
    return guard([&] { *value = e->expr.evaluate_with_derivative(load(point, e->dim), axis).second; });
}

void frobkit_expr_free(frobkit_expr* e)
{
    delete e;
}

frobkit_status frobkit_problem_load(const char* path, frobkit_problem** out)
{
    FROBKIT_NEED(path);
    FROBKIT_NEED(out);
    *out = nullptr;
    return guard([&] { *out = new frobkit_problem{frobkit::ProblemSpec::load(path)}; });
}

frobkit_status frobkit_problem_parse(const char* json_text, const char* base_dir, frobkit_problem** out)
{
    FROBKIT_NEED(json_text);
    FROBKIT_NEED(out);
    *out = nullptr;
    return guard([&] { *out = new frobkit_problem{frobkit::ProblemSpec::parse(json_text, base_dir ? base_dir : ".")}; });
}

frobkit_status frobkit_problem_set(frobkit_problem* p, const char* key, const char* value)
{
    FROBKIT_NEED(p);
    FROBKIT_NEED(key);
    FROBKIT_NEED(value);
    return guard([&] { p->spec.set(key, value); });
}

frobkit_status frobkit_problem_validate(const frobkit_problem* p)
{
    FROBKIT_NEED(p);
    return guard([&] { p->spec.validate(); });
}

void frobkit_problem_free(frobkit_problem* p)
{
    delete p;
}

frobkit_status frobkit_run(const frobkit_problem* p, const char* command, frobkit_report** out)
{
    FROBKIT_NEED(p);
    FROBKIT_NEED(command);
    FROBKIT_NEED(out);
    *out = nullptr;
    return guard([&] { *out = new frobkit_report{frobkit::run(p->spec, frobkit::parse_command(command))}; });
}

const char* frobkit_report_json(const frobkit_report* r)
{
    return r ? r->result.report.c_str() : "";
}

const char* frobkit_report_csv(const frobkit_report* r)
{
    return r ? r->result.csv.c_str() : "";
}

int frobkit_report_violated(const frobkit_report* r)
{
    return r && r->result.violated ? 1 : 0;
}

void frobkit_report_free(frobkit_report* r)
{
    delete r;
}

frobkit_status frobkit_ode_check(const char* modulus, const char* condition, const double* schedule, size_t n,
                                 frobkit_verdict* verdict, double* rate)
{
    FROBKIT_NEED(modulus);
    FROBKIT_NEED(condition);
    FROBKIT_NEED(schedule);
    FROBKIT_NEED(verdict);
    return guard([&] {
        const auto v = frobkit::check(frobkit::Modulus::analytic(modulus), frobkit::parse_condition(condition),
                                      std::vector<double>(schedule, schedule + n));
        *verdict = static_cast<frobkit_verdict>(static_cast<int>(v.verdict));
        if (rate) *rate = v.rate;
    });
}

} // extern "C"
