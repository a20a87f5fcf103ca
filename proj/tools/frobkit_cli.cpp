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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolated = 2;

struct Options
{
    std::string spec;
    std::string out;
    std::string out_mesh;
    std::string report;
    std::vector<std::string> sets;
    double t0 = 0.0;
    int grid = 0;
    std::string order;
};

int report_error(frobkit_status s)
{
    std::fprintf(stderr, "frobkit: %s error: %s\n", frobkit_status_name(s), frobkit_last_error());
    return kExitError;
}

bool write_file(const std::string& path, const char* text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "frobkit: io error: cannot write '%s'\n", path.c_str());
        return false;
    }
    f << text;
    f.close();
    if (!f) {
        std::fprintf(stderr, "frobkit: io error: failed writing '%s'\n", path.c_str());
        return false;
    }
    return true;
}

int execute(const std::string& command, const Options& o)
{
    using Problem = std::unique_ptr<frobkit_problem, decltype(&frobkit_problem_free)>;
    using Report = std::unique_ptr<frobkit_report, decltype(&frobkit_report_free)>;

    frobkit_problem* raw = nullptr;
    if (auto s = frobkit_problem_load(o.spec.c_str(), &raw)) return report_error(s);
    Problem problem(raw, frobkit_problem_free);

    std::vector<std::pair<std::string, std::string>> overrides;
    if (o.t0 > 0.0) overrides.emplace_back("certify.t0", std::to_string(o.t0));
    if (o.grid > 0) overrides.emplace_back("certify.region.nodes", std::to_string(o.grid));
    if (!o.order.empty()) overrides.emplace_back("pfaff.order", "\"" + o.order + "\"");
    for (const auto& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "frobkit: invalid-argument error: --set expects key=value, got '%s'\n", kv.c_str());
            return kExitError;
        }
        overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [k, v] : overrides) {
        if (auto s = frobkit_problem_set(problem.get(), k.c_str(), v.c_str())) return report_error(s);
    }

    frobkit_report* rraw = nullptr;
    if (auto s = frobkit_run(problem.get(), command.c_str(), &rraw)) return report_error(s);
    Report report(rraw, frobkit_report_free);

    const char* json = frobkit_report_json(report.get());
    const char* csv = frobkit_report_csv(report.get());
    bool ok = true;
    if (command == "pfaff") {
        ok = write_file(o.out, csv);
        if (!o.report.empty()) ok = ok && write_file(o.report, json);
        else std::fputs(json, stdout);
    } else if (command == "surface") {
        ok = write_file(o.out_mesh, csv);
        if (!o.out.empty()) ok = ok && write_file(o.out, json);
        else std::fputs(json, stdout);
    } else {
        ok = write_file(o.out, json);
    }
    if (!ok) return kExitError;
    return frobkit_report_violated(report.get()) ? kExitViolated : kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"frobkit: numerical checks for asymptotically involutive distributions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", frobkit_version());

    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--spec", o.spec, "problem file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--set", o.sets, "override a problem value, key=value with a dotted key");
    };

    auto* certify = app.add_subcommand("certify", "asymptotic involutivity verdicts for a sequence of forms");
    common(certify);
    certify->add_option("--out", o.out, "report JSON")->required();
    certify->add_option("--t0", o.t0, "averaging horizon")->check(CLI::PositiveNumber);
    certify->add_option("--grid", o.grid, "region nodes per axis")->check(CLI::Range(2, 1000));

    auto* surface = app.add_subcommand("surface", "integral surface mesh through a base point");
    common(surface);
    surface->add_option("--out-mesh", o.out_mesh, "mesh CSV")->required();
    surface->add_option("--out", o.out, "report JSON (default: stdout)");

    auto* pfaff = app.add_subcommand("pfaff", "solve f_x = a, f_y = b by characteristic sweeps");
    common(pfaff);
    pfaff->add_option("--out", o.out, "solution CSV")->required();
    pfaff->add_option("--order", o.order, "sweep order")->check(CLI::IsMember({"x", "y"}));
    pfaff->add_option("--report", o.report, "report JSON (default: stdout)");

    auto* ode = app.add_subcommand("ode-check", "uniqueness conditions on a modulus of continuity");
    common(ode);
    ode->add_option("--out", o.out, "report JSON")->required();

    auto* moll = app.add_subcommand("mollify", "mollifier error and derivative bounds");
    common(moll);
    moll->add_option("--out", o.out, "report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }
    for (auto* sub : app.get_subcommands()) return execute(sub->get_name(), o);
    return kExitError;
}
