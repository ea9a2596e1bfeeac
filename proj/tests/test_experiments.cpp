#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fourpow/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fourpow;

namespace {

ScalingReport synthetic_report(double exponent, double coeff, std::vector<std::int64_t> Bs) {
    ScalingReport rep;
    rep.instance = "synthetic";
    rep.theoretical_exponent = exponent;
    for (std::int64_t B : Bs) {
        ScalingRow r;
        r.B = B;
        r.nonspecial = static_cast<std::uint64_t>(
            std::llround(coeff * std::pow(static_cast<double>(B), exponent)));
        r.total = r.nonspecial;
        r.special = 0;
        r.runtime_ms = 0;
        rep.rows.push_back(r);
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rep.rows)
        if (r.nonspecial > 0)
            pts.emplace_back(std::log2(static_cast<double>(r.B)),
                             std::log2(static_cast<double>(r.nonspecial)));
    rep.fitted_slope = fit_loglog_slope(pts);
    return rep;
}

}  // namespace

TEST_CASE("slope fit recovers planted exponents") {
    for (double e : {1.0, 1.5, 2.0}) {
        // exact power data: c * B^e stays integral on powers of four, so the
        // rounding above is exact
        auto rep = synthetic_report(e, 4.0, {16, 64, 256, 1024, 4096});
        REQUIRE(rep.fitted_slope.has_value());
        CHECK(std::abs(*rep.fitted_slope - e) < 1e-6);
    }
}

TEST_CASE("slope fit needs three positive rows") {
    std::vector<std::pair<double, double>> two{{1, 2}, {2, 4}};
    CHECK_FALSE(fit_loglog_slope(two).has_value());
}

TEST_CASE("csv format is exact") {
    auto rep = synthetic_report(1.0, 2.0, {4, 8, 16});
    auto csv = to_csv(rep);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "B,total,special,nonspecial,runtime_ms");
    std::getline(is, line);
    CHECK(line == "4,8,0,8,0");
    std::getline(is, line);
    CHECK(line == "8,16,0,16,0");
    std::getline(is, line);
    CHECK(line == "16,32,0,32,0");
    CHECK_FALSE(std::getline(is, line));
}

TEST_CASE("json round trip preserves the report") {
    auto rep = synthetic_report(1.5, 4.0, {16, 32, 64, 128});
    rep.max_ratio = 1.25;
    auto text = to_json_string(rep);
    auto back = report_from_json(text);
    CHECK(back == rep);
}

TEST_CASE("svg is well-formed with two polylines") {
    auto rep = synthetic_report(1.0, 2.0, {4, 8, 16});
    auto svg = to_svg(rep);
    CHECK(svg.find("<?xml") == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
    size_t n = 0;
    for (size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++n;
    CHECK(n == 2);
    size_t circles = 0;
    for (size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos) ++circles;
    CHECK(circles == rep.rows.size());
}

TEST_CASE("emitters agree on every data point") {
    auto rep = synthetic_report(1.0, 2.0, {4, 8, 16, 32});
    // csv rows
    auto csv = to_csv(rep);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);  // header
    std::vector<ScalingRow> csv_rows;
    while (std::getline(is, line)) {
        ScalingRow r;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        ls >> r.B >> r.total >> r.special >> r.nonspecial >> r.runtime_ms;
        csv_rows.push_back(r);
    }
    // json rows
    auto back = report_from_json(to_json_string(rep));
    CHECK(csv_rows == back.rows);
    CHECK(csv_rows == rep.rows);
}

TEST_CASE("scaling_study runs a small dyadic ladder") {
    ScalingConfig cfg;
    cfg.kind = StudyKind::Count4;
    cfg.k = 3;
    cfg.coeffs = {1, 1, 1, -1};
    cfg.N = 1;
    cfg.region = Region::Signed;
    cfg.ladder = {4, 8, 16, 32};
    cfg.measure_time = false;
    auto rep = scaling_study(cfg);
    CHECK(rep.complete);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.theoretical_exponent == 2.0);  // k=3 is below the nontrivial range
    for (size_t i = 1; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i].total >= rep.rows[i - 1].total);
    for (const auto& r : rep.rows) {
        CHECK(r.total == r.special + r.nonspecial);
        CHECK(r.runtime_ms == 0.0);
    }
}

TEST_CASE("scaling_study rk sweep reports the max ratio") {
    ScalingConfig cfg;
    cfg.kind = StudyKind::RkSweep;
    cfg.k = 3;
    cfg.ladder = {2, 10, 100, 1000};
    cfg.measure_time = false;
    auto rep = scaling_study(cfg);
    CHECK(rep.theoretical_exponent ==
          doctest::Approx(1.0 / 3 + 2.0 / std::pow(3.0, 1.5)));
    REQUIRE(rep.max_ratio.has_value());
    CHECK(*rep.max_ratio > 0);
    CHECK(rep.rows[1].total == 12);  // R_3(10)
}

TEST_CASE("scaling_study r0 ladder splits excluded solutions") {
    ScalingConfig cfg;
    cfg.kind = StudyKind::R0Ternary;
    cfg.k = 3;
    cfg.coeffs = {1, 1, 1};
    cfg.N = 3;  // M = 3
    cfg.ladder = {1, 2, 4};
    cfg.measure_time = false;
    auto rep = scaling_study(cfg);
    for (const auto& r : rep.rows) CHECK(r.total == r.special + r.nonspecial);
    // (1,1,1) is the only non-excluded solution within B=2
    CHECK(rep.rows[1].nonspecial == 1);
    CHECK(rep.theoretical_exponent == doctest::Approx(2.0 / std::sqrt(3.0)));
}

TEST_CASE("empty ladder is an error") {
    ScalingConfig cfg;
    cfg.ladder = {};
    cfg.coeffs = {1, 1, 1, 1};
    CHECK_THROWS_AS(scaling_study(cfg), std::invalid_argument);
}

TEST_CASE("time budget zero yields a partial report") {
    ScalingConfig cfg;
    cfg.kind = StudyKind::Count4;
    cfg.k = 3;
    cfg.coeffs = {1, 1, 1, -1};
    cfg.N = 1;
    cfg.ladder = {4, 8, 16, 32, 64};
    cfg.measure_time = true;
    cfg.time_budget_s = 0.0;
    auto rep = scaling_study(cfg);
    CHECK_FALSE(rep.complete);
    CHECK(rep.rows.size() < cfg.ladder.size());
}

TEST_CASE("emit writes all three formats") {
    auto rep = synthetic_report(1.0, 2.0, {4, 8, 16});
    auto dir = std::filesystem::temp_directory_path() / "fourpow_emit_test";
    std::filesystem::create_directories(dir);
    emit(rep, EmitFormat::Csv, (dir / "r.csv").string());
    emit(rep, EmitFormat::Json, (dir / "r.json").string());
    emit(rep, EmitFormat::Svg, (dir / "r.svg").string());
    for (const char* name : {"r.csv", "r.json", "r.svg"})
        CHECK(std::filesystem::file_size(dir / name) > 0);
    std::ifstream json_in(dir / "r.json");
    std::stringstream ss;
    ss << json_in.rdbuf();
    CHECK(report_from_json(ss.str()) == rep);
    CHECK_THROWS(emit(rep, EmitFormat::Csv, (dir / "no_such_dir" / "x.csv").string()));
    std::filesystem::remove_all(dir);
}
