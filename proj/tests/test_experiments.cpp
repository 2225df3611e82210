#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "homoghj/errors.hpp"
#include "homoghj/experiments.hpp"

using namespace homoghj;
namespace fs = std::filesystem;

namespace {

std::vector<RatePoint> power_law(double c, double slope, std::initializer_list<double> params) {
    std::vector<RatePoint> pts;
    for (double p : params) pts.push_back({p, c * std::pow(p, slope)});
    return pts;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::path(HOMOGHJ_TEST_TMP) / name;
    fs::remove_all(d);
    return d;
}

FDSuiteOptions quick_fd() {
    FDSuiteOptions o;
    o.dx = 1.0 / 64.0;
    o.k_max = 5;
    o.threads = 1;
    return o;
}

}  // namespace

TEST_CASE("rate fitting on exact power laws") {
    const auto lin = power_law(3.0, 1.0, {0.5, 0.25, 0.125, 0.0625});
    CHECK(fit_rate(lin).slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_rate(lin).residual < 1e-12);
    const auto half = power_law(0.7, 0.5, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5});
    CHECK(fit_rate(half).slope == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rate fitting with multiplicative noise") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<RatePoint> pts;
    for (int k = 0; k < 10; ++k) {
        const double p = std::ldexp(1.0, -k);
        pts.push_back({p, 2.0 * std::pow(p, 2.0 / 3.0) * (1.0 + noise(rng))});
    }
    const RateFit f = fit_rate(pts);
    CHECK(f.slope >= 0.6);
    CHECK(f.slope <= 0.73);
}

TEST_CASE("rate fitting needs three usable points") {
    CHECK_THROWS_AS(fit_rate(power_law(1.0, 1.0, {0.5, 0.25})), TooFewPoints);
    auto pts = power_law(1.0, 1.0, {0.5, 0.25, 0.125});
    pts[1].error = 0.0;
    CHECK_THROWS_AS(fit_rate(pts), TooFewPoints);
    pts.push_back({0.0625, 0.0625});
    CHECK(fit_rate(pts).slope == doctest::Approx(1.0));
}

TEST_CASE("sqrt(eps) consistency constant") {
    RateSeries s;
    s.points = power_law(1.0, 0.5, {0.5, 0.25, 0.125});
    const auto [C, ok] = sqrt_eps_consistency(s);
    CHECK(C == doctest::Approx(1.0));
    CHECK(ok);
}

TEST_CASE("series CSV round trip is bitwise exact") {
    RateSeries s;
    s.name = "t";
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1e-9, 1.0);
    for (int k = 0; k < 20; ++k) s.points.push_back({u(rng), u(rng) / 3.0});
    const std::string text = series_csv(s);
    CHECK(text.rfind("parameter,error\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    const auto back = parse_series_csv(text);
    REQUIRE(back.size() == s.points.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(std::memcmp(&back[i].parameter, &s.points[i].parameter, sizeof(double)) == 0);
        CHECK(std::memcmp(&back[i].error, &s.points[i].error, sizeof(double)) == 0);
    }
}

TEST_CASE("output files per series") {
    ExperimentReport rep;
    rep.run_id = "vanish_5.1";
    RateSeries s;
    s.name = "vanish_5.1";
    s.points = power_law(1.0, 1.0, {0.5, 0.25, 0.125});
    refit(s);
    rep.series.push_back(s);
    rep.checks.push_back({"band", true, "ok"});
    const fs::path dir = fresh_dir("outputs");
    const auto paths = write_outputs(rep, dir);
    CHECK(paths.size() == 3);
    CHECK(fs::exists(dir / "vanish_5.1.csv"));
    CHECK(fs::exists(dir / "vanish_5.1.meta.json"));
    CHECK(fs::exists(dir / "vanish_5.1.gnuplot"));
    const std::string meta = slurp(dir / "vanish_5.1.meta.json");
    CHECK(meta.find("\"slope\"") != std::string::npos);
    CHECK(meta.find("\"band\"") != std::string::npos);
    CHECK(parse_series_csv(slurp(dir / "vanish_5.1.csv")).size() == 3);

    ExperimentReport empty;
    empty.run_id = "nothing";
    const fs::path d2 = fresh_dir("empty");
    const auto p2 = write_outputs(empty, d2);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].filename() == "nothing.meta.json");
}

TEST_CASE("parallel_for fills every slot and rethrows the first failure") {
    std::vector<int> out(100, 0);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
    std::atomic<int> ran{0};
    try {
        parallel_for(10, 3, [&](std::size_t i) {
            ++ran;
            if (i == 7) throw ConfigError("seven");
            if (i == 3) throw ConfigError("three");
        });
        FAIL("expected an exception");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()) == "three");
    }
    CHECK(ran == 10);
}

TEST_CASE("example catalog") {
    const auto ids = example_ids();
    CHECK(ids.size() == 13);
    CHECK(ids.front() == "5.1");
    CHECK(ids.back() == "6.2");
    CHECK(is_vanishing_id("5.5"));
    CHECK(is_homogenization_id("5.10"));
    CHECK(is_effham_id("6.1"));
    CHECK_FALSE(is_effham_id("5.1"));
    CHECK(cauchy_example("5.5").data.size() == 4);
    CHECK(cauchy_example("5.11").T == 0.5);
    CHECK_THROWS_AS(cauchy_example("6.1"), ConfigError);
    try {
        cauchy_example("9.9");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("5.11") != std::string::npos);
    }
    CHECK(example_catalog_text().find("6.2") != std::string::npos);
    CHECK(expected_slope_band("5.5").first == doctest::Approx(2.0 / 3.0 - 0.15));
    CHECK(expected_slope_band("5.1") == std::pair<double, double>{0.85, 1.15});
}

TEST_CASE("vanishing suite on a coarse grid") {
    const auto series = run_vanishing_suite("5.1", quick_fd());
    REQUIRE(series.size() == 1);
    const auto& s = series[0];
    CHECK(s.name == "vanish_5.1");
    REQUIRE(s.points.size() == 6);
    for (std::size_t k = 1; k < s.points.size(); ++k) {
        CHECK(s.points[k].parameter < s.points[k - 1].parameter);
        CHECK(s.points[k].error < s.points[k - 1].error);
    }
    CHECK(s.fitted_slope > 0.8);
    CHECK(s.meta.example_id == "5.1");
    CHECK(s.meta.dx == 1.0 / 64.0);
    CHECK(run_vanishing_suite("5.5", quick_fd()).size() == 4);
}

TEST_CASE("suites do not depend on the thread count") {
    FDSuiteOptions one = quick_fd(), many = quick_fd();
    many.threads = 4;
    const auto a = run_homogenization_suite("5.8", one);
    const auto b = run_homogenization_suite("5.8", many);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        CHECK(std::memcmp(&a.points[k].error, &b.points[k].error, sizeof(double)) == 0);
    }
    CHECK(a.name == "homog_5.8");
}

TEST_CASE("report checks and unknown ids") {
    const ExperimentReport rep = run_fd_report("5.3", quick_fd());
    CHECK(rep.run_id == "vanish_5.3");
    CHECK_FALSE(rep.checks.empty());
    CHECK_THROWS_AS(run_fd_report("6.1", quick_fd()), ConfigError);
    CHECK_THROWS_AS(run_effham_suite("5.1"), ConfigError);
}

TEST_CASE("effective-Hamiltonian suite on small meshes") {
    EffHamSuiteOptions o;
    o.N = 16;
    o.threads = 1;
    o.howard.warn_below_min_discount = false;
    const auto rep = run_effham_suite("6.1", o);
    CHECK(rep.run_id == "effham_6.1");
    CHECK(rep.series.size() >= 2);
    for (const auto& s : rep.series) CHECK(!s.points.empty());

    EffHamSuiteOptions q = o;
    q.surface = false;
    const auto r2 = run_effham_suite("6.2", q);
    CHECK(r2.series.size() == 1);
    CHECK(r2.series[0].points.size() == 4);
    CHECK(effham_surface_axis().size() == 13);
}

TEST_CASE("sharpness report") {
    const auto rep = run_sharpness_suite();
    CHECK(rep.all_passed());
    CHECK(rep.series.size() == 3);
}
