#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <frobkit/problem.hpp>

#include <json.hpp>

#include <string>

using namespace frobkit;
using nlohmann::json;

namespace {

const std::filesystem::path fixtures = FROBKIT_FIXTURES;

const char* ode_doc = R"j({
  "schema_version": 1,
  "chart": {"dim": 2, "bounds": [[-1, 1], [-1, 1]]},
  "ode-check": {"modulus": "t"}
})j";

std::string schema_message(const ProblemSpec& spec)
{
    try {
        spec.validate();
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Schema);
        return e.what();
    }
    return "";
}

std::string schema_message(const std::string& text)
{
    return schema_message(ProblemSpec::parse(text));
}

} // namespace

TEST_CASE("commands round trip")
{
    for (const char* c : {"certify", "surface", "pfaff", "ode-check", "mollify"}) CHECK(to_string(parse_command(c)) == std::string(c));
    CHECK_THROWS_AS(parse_command("ode_check"), Error);
}

TEST_CASE("unknown keys are reported with their path")
{
    auto spec = ProblemSpec::parse(ode_doc);
    spec.set("ode-check.modulos", "\"t\"");
    CHECK(schema_message(spec) == "ode-check.modulos: unknown key");
    CHECK(schema_message(ProblemSpec::load(fixtures / "bad_unknown_key.json")) == "certify.regoin: unknown key");
    auto c = ProblemSpec::parse(ode_doc);
    c.set("chart.colour", "1");
    CHECK(schema_message(c) == "chart.colour: unknown key");
}

TEST_CASE("schema errors name the offending value")
{
    auto s = ProblemSpec::parse(ode_doc);
    s.set("schema_version", "2");
    CHECK(schema_message(s).rfind("schema_version:", 0) == 0);

    s = ProblemSpec::parse(ode_doc);
    s.set("chart.bounds.1", "[1, -1]");
    CHECK(schema_message(s).rfind("chart.bounds.1:", 0) == 0);

    s = ProblemSpec::parse(ode_doc);
    s.set("ode-check.schedule", "[0.1, 0.2]");
    CHECK(schema_message(s).rfind("ode-check.schedule:", 0) == 0);

    s = ProblemSpec::parse(ode_doc);
    s.set("ode-check.conditions", "[\"ODESTAR\", \"LIPSCHITZ\"]");
    CHECK(schema_message(s).rfind("ode-check.conditions.1:", 0) == 0);

    auto c = ProblemSpec::load(fixtures / "contact.json");
    c.set("certify.form.0", "\"-y +\"");
    CHECK(schema_message(c).rfind("certify.form.0:", 0) == 0);
    c = ProblemSpec::load(fixtures / "contact.json");
    c.set("certify.form", "[1, 2]");
    CHECK(schema_message(c).rfind("certify.form:", 0) == 0);
    c = ProblemSpec::load(fixtures / "contact.json");
    c.set("surface.resolution", "20");
    CHECK(schema_message(c).rfind("surface.resolution:", 0) == 0);

    CHECK_THROWS_AS(ProblemSpec::parse("{not json"), Error);
    CHECK_THROWS_AS(ProblemSpec::parse("[1, 2]"), Error);
    CHECK(schema_message(R"j({"schema_version": 1})j") == "chart: required key is missing");
}

TEST_CASE("field declarations")
{
    const std::string base = R"j({"schema_version": 1, "chart": {"dim": 2, "bounds": [[-1, 1], [-1, 1]]}, "fields": )j";
    CHECK(schema_message(base + R"j({"x": "1"}})j").rfind("fields.x: field name shadows", 0) == 0);
    CHECK(schema_message(base + R"j({"2g": "1"}})j").rfind("fields.2g:", 0) == 0);
    CHECK(schema_message(base + R"j({"g": {"expr": "x", "csv": "a.csv"}}})j").rfind("fields.g:", 0) == 0);
    CHECK(schema_message(base + R"j({"g": {"expr": "x", "smoothness": "C3"}}})j").rfind("fields.g.smoothness:", 0) == 0);
    CHECK(schema_message(base + R"j({"g": "abs(x)", "h": {"expr": "x^2", "smoothness": "C1"}}})j").empty());
    CHECK_THROWS_AS(ProblemSpec::parse(base + R"j({"g": {"csv": "missing.csv"}}})j").validate(), Error);
}

TEST_CASE("missing task block")
{
    const auto spec = ProblemSpec::parse(ode_doc);
    try {
        run(spec, Command::Certify);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Schema);
        CHECK(std::string(e.what()) == "certify: the problem file has no block for this command");
    }
}

TEST_CASE("overrides")
{
    auto spec = ProblemSpec::load(fixtures / "contact.json");
    spec.set("certify.t0", "0.25");
    spec.set("certify.region.nodes", "3");
    const auto r = run(spec, Command::Certify);
    const json j = json::parse(r.report);
    CHECK(j["t0"].get<double>() == 0.25);
    CHECK(j["region_points"].get<int>() == 27);
    CHECK_THROWS_AS(spec.set("certify.form.7", "1"), Error);
    CHECK_THROWS_AS(spec.set("certify.t0.x", "1"), Error);
    CHECK_THROWS_AS(spec.set("", "1"), Error);
    // strings that are not JSON are stored as strings
    spec.set("description", "plain text");
    CHECK(json::parse(spec.dump())["description"] == "plain text");
}

TEST_CASE("certify reports")
{
    const auto inv = run(ProblemSpec::load(fixtures / "involutive_xy.json"), Command::Certify);
    CHECK_FALSE(inv.violated);
    const json a = json::parse(inv.report);
    CHECK(a["schema_version"] == kSchemaVersion);
    CHECK(a["status"] == "ok");
    REQUIRE(a["verdicts"].size() == 4);
    for (const auto& v : a["verdicts"]) {
        CHECK(v["verdict"] == "decreasing");
        CHECK(v["identically_zero"] == true);
    }

    const auto contact = run(ProblemSpec::load(fixtures / "contact.json"), Command::Certify);
    CHECK(contact.violated);
    const json b = json::parse(contact.report);
    CHECK(b["status"] == "violated");
    CHECK(b["plain"][0]["defect"].get<double>() == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    CHECK(b["averaged"][0]["defect"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reports are byte-identical across runs")
{
    const auto spec = ProblemSpec::load(fixtures / "contact.json");
    CHECK(run(spec, Command::Certify).report == run(spec, Command::Certify).report);
    const auto m = ProblemSpec::load(fixtures / "mollify_sqrt.json");
    CHECK(run(m, Command::Mollify).report == run(m, Command::Mollify).report);
}

TEST_CASE("pfaff solution matches the closed form")
{
    const auto r = run(ProblemSpec::load(fixtures / "remark18.json"), Command::Pfaff);
    CHECK_FALSE(r.violated);
    const json j = json::parse(r.report);
    CHECK(j["exact_error"].get<double>() <= 1e-4);
    CHECK(j["crosscheck"]["sup"].get<double>() <= 1e-4);
    CHECK(r.csv.rfind("axis1,axis2,value\n", 0) == 0);
    // 51 x 51 rows plus the header
    CHECK(std::count(r.csv.begin(), r.csv.end(), '\n') == 51 * 51 + 1);

    auto blow = ProblemSpec::load(fixtures / "remark18.json");
    blow.set("pfaff.grid.box", "[[0, 1], [0, 1]]");
    try {
        run(blow, Command::Pfaff);
        FAIL("expected a blow-up");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainExit);
        CHECK(std::string(e.what()).rfind("pfaff: ", 0) == 0);
        CHECK(std::string(e.what()).find("blow-up") != std::string::npos);
    }
}

TEST_CASE("rotational control is flagged")
{
    const auto r = run(ProblemSpec::load(fixtures / "rotational.json"), Command::Pfaff);
    CHECK(r.violated);
    CHECK(json::parse(r.report)["crosscheck"]["sup"].get<double>() > 0.01);
}

TEST_CASE("surface reports")
{
    auto spec = ProblemSpec::load(fixtures / "involutive_xy.json");
    spec.set("surface.resolution", "11");
    const auto r = run(spec, Command::Surface);
    CHECK_FALSE(r.violated);
    const json j = json::parse(r.report);
    CHECK(j["tangency"]["sup"].get<double>() <= 1e-6);
    CHECK(j["holonomy"].get<double>() <= 1e-9);
    CHECK(r.csv.rfind("i,j,s1,s2,x1,x2,x3,angle\n", 0) == 0);

    auto c = ProblemSpec::load(fixtures / "contact.json");
    c.set("surface.resolution", "11");
    const auto rc = run(c, Command::Surface);
    CHECK(rc.violated);
    CHECK(json::parse(rc.report)["holonomy"].get<double>() > 0.01);
}

TEST_CASE("ode-check from an expression and from a sampled field")
{
    const auto r = run(ProblemSpec::parse(ode_doc), Command::OdeCheck);
    CHECK_FALSE(r.violated);
    const json j = json::parse(r.report);
    REQUIRE(j["conditions"].size() == 3);
    for (const auto& c : j["conditions"]) CHECK(c["verdict"] == "satisfied");

    const auto h = run(ProblemSpec::load(fixtures / "ode_holder.json"), Command::OdeCheck);
    CHECK(h.violated);

    const auto f = run(ProblemSpec::load(fixtures / "ode_field.json"), Command::OdeCheck);
    CHECK_FALSE(f.violated);
    CHECK(json::parse(f.report)["modulus"].get<std::string>().find("empirical") != std::string::npos);
}

TEST_CASE("mollify report")
{
    const auto r = run(ProblemSpec::load(fixtures / "mollify_sqrt.json"), Command::Mollify);
    CHECK_FALSE(r.violated);
    const json j = json::parse(r.report);
    CHECK(j["fitted_k"].get<double>() <= 100.0);
    CHECK(j["deriv_log_slope"].get<double>() == doctest::Approx(-0.5).epsilon(0.2));
    CHECK(j["rows"].size() == 4);
}
