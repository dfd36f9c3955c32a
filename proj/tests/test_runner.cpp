#include "berryphase/errors.hpp"
#include "berryphase/runner.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace berry;
using namespace berry::cli;

namespace {

const std::string kConfigDir = BERRYPHASE_CONFIG_DIR;

std::string beta_config(int samples, const std::string& extra = "") {
    return "{\n"
           "  \"primitive\": \"circle\",\n"
           "  \"planes\": [{\"coords\": [\"beta1\", \"beta2\"], \"radius\": 0.3}],\n"
           "  \"samples\": " +
           std::to_string(samples) + ",\n" + extra +
           "  \"levels\": [0, 1],\n"
           "  \"dim\": 60\n"
           "}\n";
}

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ValidationError& e) {
        return e.line();
    }
    return -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("config validation anchors errors to lines") {
    CHECK_NOTHROW(parse_config(beta_config(64)));
    CHECK(error_line(beta_config(8)) == 4);
    try {
        parse_config(beta_config(8));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("K >= 16") != std::string::npos);
    }
    CHECK(error_line(beta_config(64, "  \"colour\": 1,\n")) == 5);
    CHECK(error_line("{\n  \"primitive\": \"circle\",\n  oops\n}") == 3);
    CHECK(error_line(beta_config(64, "  \"mode\": \"quantum\",\n")) == 5);
}

TEST_CASE("config invariants") {
    const auto levels = [](const std::string& list) {
        return "{\"primitive\": \"circle\", \"planes\": [{\"coords\": [\"beta1\", \"beta2\"], \"radius\": 0.3}],"
               " \"levels\": " +
               list + "}";
    };
    CHECK_NOTHROW(parse_config(levels("[0, 1, 2, 3, 4, 5]")));
    CHECK_THROWS_AS(parse_config(levels("[0, 1, 2, 3, 4, 5, 6]")), ValidationError);
    CHECK_THROWS_AS(parse_config(levels("[]")), ValidationError);
    CHECK_THROWS_AS(parse_config(levels("[1, 1]")), ValidationError);

    const std::string same_axis =
        "{\"primitive\": \"circle\", \"planes\": [{\"coords\": [\"beta1\", \"beta1\"], \"radius\": 0.3}],"
        " \"levels\": [0]}";
    CHECK_THROWS_AS(parse_config(same_axis), ValidationError);

    const std::string open_polyline =
        "{\"primitive\": \"polyline\", \"coords\": [\"beta1\", \"beta2\"],"
        " \"points\": [[0.1, 0.1], [0.2, 0.1], [0.2, 0.2]], \"levels\": [0]}";
    CHECK_THROWS_AS(parse_config(open_polyline), ValidationError);

    const std::string multiphoton_alpha =
        "{\"mode\": \"multiphoton\", \"primitive\": \"circle\","
        " \"planes\": [{\"coords\": [\"alpha1\", \"alpha2\"], \"radius\": 0.3}], \"levels\": [0]}";
    CHECK_THROWS_AS(parse_config(multiphoton_alpha), ValidationError);

    const std::string too_big =
        "{\"primitive\": \"circle\", \"planes\": [{\"coords\": [\"beta1\", \"beta2\"], \"radius\": 0.3}],"
        " \"levels\": [0], \"dim\": 1024}";
    CHECK_THROWS_AS(parse_config(too_big), ValidationError);

    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}

TEST_CASE("all shipped configs parse") {
    for (const char* name : {"alpha_circle", "beta_circle", "composed", "multiphoton", "lissajous", "polyline",
                             "constant"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_config(kConfigDir + "/" + name + ".json"));
    }
}

TEST_CASE("number formatting keeps 12 significant digits") {
    CHECK(format_number(1234.5) == "1.23450000000e+03");
    CHECK(format_number(-0.0) == "0.00000000000e+00");
    CHECK(format_number(-std::numbers::pi / 2) == "-1.57079632679e+00");
}

TEST_CASE("run on the beta circle") {
    const auto config = load_config(kConfigDir + "/beta_circle.json");
    RunOptions opts;
    opts.integrand = true;
    const auto result = run(config, opts);
    const auto& report = result.report;
    REQUIRE(report.phases.size() == 2);
    const double sh = std::sinh(0.3);
    REQUIRE(report.hannay.has_value());
    CHECK(std::abs(*report.hannay - 2.0 * std::numbers::pi * sh * sh) < 1e-3);
    CHECK(std::abs(*report.hannay - 0.58266) < 1e-4);
    CHECK(report.passed());
    CHECK(report.convergence.size() == 6);

    const auto csv = phases_csv(report);
    CHECK(csv.rfind("n,gamma_wilson,gamma_closed,gamma_D,gamma_S,discrepancy,dim,K,converged\n", 0) == 0);
    CHECK(csv.find("e-01,") != std::string::npos);

    // per-segment contributions add back up to the totals
    double wilson = 0.0, closed = 0.0;
    for (const auto& s : result.integrand) {
        if (s.level != 1) continue;
        wilson += s.wilson;
        closed += s.closed;
    }
    CHECK(wilson == doctest::Approx(report.phases[1].gamma_wilson).epsilon(1e-12));
    CHECK(closed == doctest::Approx(report.phases[1].gamma_closed).epsilon(1e-12));

    const auto doc = nlohmann::json::parse(report_json(report));
    for (const char* key : {"version", "config", "phases", "hannay", "convergence", "timing"}) {
        CHECK(doc.contains(key));
    }
    CHECK(doc["phases"][0].contains("converged"));

    // identical inputs give identical CSV
    CHECK(phases_csv(run(config).report) == csv);
}

TEST_CASE("overrides and failures") {
    auto config = load_config(kConfigDir + "/beta_circle.json");
    RunOptions opts;
    opts.segments = 8;
    CHECK_THROWS_AS(run(config, opts), ValidationError);

    config.tolerance = 1e-9;
    opts.segments = 32;
    CHECK_FALSE(run(config, opts).report.passed());
}

TEST_CASE("sweep doubles dim and K") {
    const auto config = load_config(kConfigDir + "/beta_circle.json");
    RunOptions opts;
    opts.segments = 100;
    opts.dim = 40;
    const auto rows = sweep(config, 2, opts);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].dim == 40);
    CHECK(rows[2].dim == 160);
    CHECK(rows[2].segments == 400);
    CHECK_FALSE(rows[0].delta_prev.has_value());
    CHECK(*rows[2].delta_prev < *rows[1].delta_prev);
    CHECK(sweep_csv(rows).rfind("level,dim,K,gamma_wilson,delta_prev\n", 0) == 0);

    CHECK_THROWS_AS(sweep(config, 4), ValidationError);
    CHECK_THROWS_AS(sweep(config, 3), ValidationError);  // 80 * 8 > 512

    const auto flat = sweep(load_config(kConfigDir + "/constant.json"), 1);
    for (const auto& r : flat) {
        CHECK(r.gamma_wilson == 0.0);
        if (r.delta_prev) CHECK(*r.delta_prev == 0.0);
    }
}

TEST_CASE("atomic writes replace the target") {
    const auto dir = std::filesystem::temp_directory_path() / "berryphase_runner_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / "out.txt";
    write_atomic(file, "first\n");
    write_atomic(file, "second\n");
    CHECK(slurp(file) == "second\n");
    CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("verification suites") {
    CHECK(parse_suite("appendix") == Suite::appendix);
    CHECK_THROWS_AS(parse_suite("everything"), ValidationError);
    const auto checks = verify(Suite::algebra);
    CHECK(checks.size() >= 6);
    for (const auto& c : checks) {
        CAPTURE(c.name);
        CHECK(c.passed);
        CHECK(format_check(c).rfind("PASS", 0) == 0);
    }
}
