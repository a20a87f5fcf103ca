// One line per acceptance criterion; exit status is the number of failures (capped at 1).

#include <frobkit/frames.hpp>
#include <frobkit/involutivity.hpp>
#include <frobkit/mollify.hpp>
#include <frobkit/odeuniq.hpp>
#include <frobkit/perturb.hpp>
#include <frobkit/pfaff.hpp>
#include <frobkit/surfaces.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace frobkit;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

void add(Outcome& o, bool ok, const std::string& what)
{
    o.pass = o.pass && ok;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what + (ok ? "" : " [x]");
}

Point random_interior(std::mt19937_64& rng, const Chart& c)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Chart in = c.interior();
    Point p{};
    for (int a = 0; a < c.dim(); ++a) p[a] = in.bounds(a).lo + in.width(a) * u(rng);
    return p;
}

std::string trig(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> c(-0.3, 0.3);
    return fmt("%.6f*sin(x + %.6f*z) + %.6f*cos(y) + %.6f*sin(x*y + z)", c(rng), c(rng), c(rng), c(rng));
}

const Chart perturb_box = Chart::cube(3, {-1.0, 1.0}, 0.5);

std::vector<CanonicalFrame> random_frames()
{
    std::mt19937_64 rng(2024);
    std::vector<CanonicalFrame> out;
    for (int n = 0; n < 3; ++n) {
        const std::string a = trig(rng), b = trig(rng);
        out.push_back(CanonicalFrame::analytic(a, b, perturb_box));
    }
    return out;
}

Outcome cartan()
{
    Outcome o{true, ""};
    const Chart c = Chart::cube(3, {-1.0, 1.0}, 0.1);
    const char* forms[][3] = {{"0", "0", "1"}, {"-x2", "0", "1"}, {"-y", "-x", "1"},
                              {"-sin(y)*z", "x^2", "2 + cos(x)"}, {"-z*y", "exp(x)*0.3", "1.5 + 0.2*sin(z)"}};
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (auto& f : forms) {
        const auto eta = OneForm::analytic(f[0], f[1], f[2], c);
        const auto frame = canonical_frame(eta);
        for (int n = 0; n < 1000; ++n) {
            worst = std::max(worst, cartan_residual(eta, frame.X(), frame.Y(), random_interior(rng, c), 1e-4));
        }
    }
    add(o, worst <= 1e-6, fmt("max residual %.3g <= 1e-6 over 5 forms x 1000 points", worst));
    return o;
}

Outcome perturbation()
{
    Outcome o{true, ""};
    const Grid region = Grid::over_interior(perturb_box, 5);
    const auto f = CanonicalFrame::analytic("y", "0", perturb_box);
    const auto a = alpha_field(f, 0.0, 1e-4);
    double err = 0.0;
    for (std::size_t i = 0; i < region.size(); ++i) err = std::max(err, std::fabs(a(region.node(i)) + region.node(i)[1]));
    const double r0 = involutivity_residual(f, a, region, 1e-4).value;
    add(o, r0 <= 1e-6, fmt("a = x2: residual %.3g <= 1e-6", r0));
    add(o, err <= 1e-6, fmt("|alpha + x2| %.3g <= 1e-6", err));
    const Grid coarse = Grid::over_interior(perturb_box, 4);
    int k = 0;
    for (const auto& fr : random_frames()) {
        const double r = involutivity_residual(fr, alpha_field(fr, 0.0, 1e-3), coarse, 1e-3).value;
        add(o, r <= 5e-4, fmt("random frame %d: residual %.3g <= 5e-4", ++k, r));
    }
    return o;
}

Outcome perturbation_bound()
{
    Outcome o{true, ""};
    const Grid coarse = Grid::over_interior(perturb_box, 4);
    std::vector<CanonicalFrame> frames{CanonicalFrame::analytic("y", "0", perturb_box)};
    for (const auto& f : random_frames()) frames.push_back(f);
    int k = 0;
    for (const auto& f : frames) {
        const auto rep = bound_check(frame_form(f), f, alpha_field(f, 0.0, 1e-3), coarse, 0.5, 0.0, 1e-3);
        add(o, rep.satisfied, fmt("frame %d: sup|alpha| %.3g vs bound %.3g", k++, rep.sup_alpha, rep.bound));
    }
    return o;
}

Outcome closedness()
{
    Outcome o{true, ""};
    const Chart plane = Chart::cube(2, {-1.0, 1.0}, 0.3);
    const Grid pr(2, {Interval{-0.5, 0.5}, Interval{-0.5, 0.5}}, {9, 9, 1});
    for (const char* b : {"0", "x", "y"}) {
        const auto w = OneForm::analytic(std::string("-(") + b + ")", "1", "0", plane);
        const auto r = rescale_closed_2d(w, pr, 0.0, 1e-3);
        add(o, r.closedness.value <= 1e-5 && r.section_error <= 1e-10 && r.norm_bound_satisfied,
            fmt("b = %s: |d w^| %.3g, |beta - 1| on S %.3g, norm ratio %.3g", b, r.closedness.value, r.section_error,
                r.norm_ratio));
    }
    return o;
}

Outcome surfaces()
{
    Outcome o{true, ""};
    const Chart box = Chart::cube(3, {-1.0, 1.0}, 0.1);
    const auto f = CanonicalFrame::analytic("y", "x", box);
    const auto m = synthesize(f, {0, 0, 0}, 0.5, 41, 41, 1e-3);
    double err = 0.0;
    for (const Point& p : m.points) err = std::max(err, std::fabs(p[2] - p[0] * p[1]));
    add(o, err <= 1e-6, fmt("z = xy: sup|x3 - x1 x2| %.3g <= 1e-6", err));
    const auto c = CanonicalFrame::analytic("y", "0", box);
    const double hol = holonomy(c, {0, 0, 0}, 0.5, 41, 41, 1e-3);
    const double tan = tangency_residual(synthesize(c, {0, 0, 0}, 0.5, 41, 41, 1e-3),
                                         OneForm::analytic("-y", "0", "1", box)).sup;
    add(o, hol > 0.01 && tan > 0.01, fmt("contact: holonomy %.3g, tangency %.3g > 0.01", hol, tan));
    return o;
}

Outcome convergence()
{
    Outcome o{true, ""};
    const Chart box = Chart::cube(3, {-1.0, 1.0}, 0.1);
    const auto eta = OneForm::analytic("-sqrt(abs(x))", "0", "1", box, Smoothness::Continuous);
    const auto seq = ApproxSequence::mollified(eta, MollifierSchedule{{0.08, 0.04, 0.02, 0.01, 0.005}});
    const auto r = convergence_report(synthesize_sequence(seq, {0.5, 0, 0}, 0.4, 41, 41, 1e-3), eta);
    bool dec = r.successive.size() >= 4;
    std::string s;
    for (std::size_t k = 0; k < r.successive.size(); ++k) {
        if (k > 0) dec = dec && r.successive[k] < r.successive[k - 1];
        s += fmt("%s%.2g", k ? " " : "", r.successive[k]);
    }
    add(o, dec, "successive sups " + s + " decreasing");
    add(o, r.final_tangency <= 1e-3, fmt("final tangency %.3g <= 1e-3", r.final_tangency));
    return o;
}

Outcome mollifier()
{
    Outcome o{true, ""};
    const Chart line(2, {Interval{-1, 1}, Interval{-1, 1}}, {0.25, 0.25, 0});
    const MollifierSchedule s{{0.2, 0.1, 0.05, 0.025}};
    const auto lip = verify_mollifier_bounds(ScalarField::analytic("abs(x)", line, Smoothness::Continuous),
                                             Modulus::analytic("t"), s);
    const auto sq = verify_mollifier_bounds(ScalarField::analytic("abs(x)^0.5", line, Smoothness::Continuous),
                                            Modulus::analytic("t^0.5"), s);
    const double k = std::max(lip.fitted_k, sq.fitted_k);
    add(o, k <= 100.0, fmt("single K = %.3g <= 100 for |x| and |x|^0.5", k));
    add(o, std::fabs(sq.deriv_log_slope + 0.5) <= 0.1, fmt("|x|^0.5 derivative log-slope %.3f in -0.5 +- 0.1", sq.deriv_log_slope));
    return o;
}

Outcome ode_table()
{
    Outcome o{true, ""};
    const auto sched = default_ode_schedule();
    auto line = [&](const char* w, std::initializer_list<Condition> conds, Verdict want) {
        for (Condition c : conds) {
            const auto v = check(Modulus::analytic(w), c, sched);
            add(o, v.verdict == want, fmt("%s %s %s", w, to_string(c), to_string(v.verdict)));
        }
    };
    const auto all = {Condition::OdeStar, Condition::OdeStarB, Condition::Osgood};
    line("t", all, Verdict::Satisfied);
    line("t^0.5", all, Verdict::Violated);
    line("t*abs(ln(t))", {Condition::OdeStarB}, Verdict::Satisfied);
    line("t*abs(ln(t))^2", all, Verdict::Violated);
    return o;
}

double remark_exact(double x, double y)
{
    return 1.0 / (1.0 - (2.0 / 3.0) * (std::pow(x, 1.5) + std::pow(y, 1.5)));
}

Outcome pfaff()
{
    Outcome o{true, ""};
    const Chart c(3, {Interval{0, 1}, Interval{0, 1}, Interval{0.5, 10}});
    const auto p = PfaffProblem::analytic("x^0.5*z^2", "y^0.5*z^2", c, {0, 0, 1});
    const Grid g(2, {Interval{0, 0.7}, Interval{0, 0.7}}, {51, 51, 1});
    const auto f = solve(p, g, SweepOrder::XFirst, 1e-3);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point q = g.node(k);
        err = std::max(err, std::fabs(f(q) - remark_exact(q[0], q[1])));
    }
    add(o, err <= 1e-4, fmt("closed-form error %.3g <= 1e-4 on 51^2", err));
    const double cross = uniqueness_crosscheck(p, g, 1e-3);
    add(o, cross <= 1e-4, fmt("x-first/y-first %.3g <= 1e-4", cross));

    const Chart sc(3, {Interval{0, 0.7}, Interval{0, 0.7}, Interval{0.5, 10}}, {0.05, 0.05, 0.05});
    const auto coeff = StructuredCoefficients::analytic("x^0.5", "y^0.5", "z^2", 20.0, sc);
    const auto seq = structured_sequence(coeff, MollifierSchedule{{0.04, 0.02, 0.01, 0.005}});
    const auto d = plain_defects(seq, Grid::over_interior(sc, 9));
    double wedge = 0.0, dmax = 0.0;
    for (const auto& r : d) {
        wedge = std::max(wedge, r.wedge_norm);
        dmax = std::max(dmax, r.deta_norm);
    }
    add(o, wedge <= 1e-8, fmt("sup |eta_k ^ d eta_k| %.3g <= 1e-8", wedge));
    add(o, dmax <= 1.1 * d.front().deta_norm, fmt("|d eta_k| <= %.4g, within 10%% of the first (%.4g)", dmax, d.front().deta_norm));
    return o;
}

Outcome negative_controls()
{
    Outcome o{true, ""};
    const std::string out = std::string(FROBKIT_BUILD_DIR) + "/acceptance_contact.json";
    const std::string cmd = std::string("\"") + FROBKIT_CLI + "\" certify --spec \"" + FROBKIT_FIXTURES +
                            "/contact.json\" --out \"" + out + "\"";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    add(o, code == 2, fmt("contact certify exit %d (want 2)", code));
    std::ifstream in(out);
    const auto j = nlohmann::json::parse(in);
    double plain = 0.0, avg = 0.0;
    for (const auto& r : j["plain"]) plain = std::max(plain, r["defect"].get<double>());
    for (const auto& r : j["averaged"]) avg = std::max(avg, r["defect"].get<double>());
    add(o, std::fabs(plain / std::exp(1.0) - 1.0) <= 0.01, fmt("plain defect %.6g vs e", plain));
    add(o, std::fabs(avg - 1.0) <= 0.01, fmt("averaged defect %.6g vs 1", avg));

    const Chart c(3, {Interval{0, 1}, Interval{0, 1}, Interval{-3, 3}});
    const auto rot = PfaffProblem::analytic("-y", "x", c, {0, 0, 0});
    const double cross = uniqueness_crosscheck(rot, Grid(2, {Interval{0, 1}, Interval{0, 1}}, {21, 21, 1}), 1e-3);
    add(o, cross > 0.01, fmt("rotational crosscheck %.3g > 0.01", cross));
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"cartan identity", cartan},
        {"perturbation correctness", perturbation},
        {"perturbation bound", perturbation_bound},
        {"closed rescaling", closedness},
        {"surface synthesis", surfaces},
        {"surface convergence", convergence},
        {"mollifier bounds", mollifier},
        {"ode condition table", ode_table},
        {"pfaff oracle", pfaff},
        {"negative controls", negative_controls},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
