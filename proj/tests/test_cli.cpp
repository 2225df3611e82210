#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "homoghj/cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "homoghj");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = homoghj::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::path(HOMOGHJ_TEST_TMP) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("help lists the subcommands and the catalog") {
    const Result r = run({"--help"});
    CHECK(r.code == 0);
    for (const char* word : {"vanish", "homog", "effham", "sharpness", "solve", "exact", "5.11", "6.2"}) {
        CHECK(r.out.find(word) != std::string::npos);
    }
    CHECK(run({"vanish", "--help"}).code == 0);
}

TEST_CASE("configuration errors exit with 2") {
    const Result bad_id = run({"vanish", "--example", "9.9"});
    CHECK(bad_id.code == 2);
    CHECK(bad_id.err.find("5.1") != std::string::npos);
    CHECK(run({"vanish"}).code == 2);
    CHECK(run({"vanish", "--example", "5.1", "--bogus", "1"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"homog", "--example", "5.1"}).code == 2);
    CHECK(run({"effham", "--example", "5.1"}).code == 2);
    CHECK(run({"solve", "--example", "5.1", "--dx", "0.0625", "--eps", "1e-9"}).code == 2);
    CHECK(run({"vanish", "--example", "5.1", "--dx", "0.7"}).code == 2);
    CHECK(run({"exact", "--example", "5.4", "--x", "1.0"}).code == 2);
}

TEST_CASE("exact values") {
    const Result r = run({"exact", "--example", "6.1", "--p", "3,1"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(-1.0126641322812167).epsilon(1e-12));
    const Result e = run({"exact", "--example", "5.1", "--x", "0.5", "--t", "1"});
    CHECK(e.code == 0);
    CHECK(std::stod(e.out) == -1.5);
}

TEST_CASE("output failures exit with 1") {
    const fs::path dir = fresh_dir("blocked");
    write_file(dir / "file", "x");
    const Result r = run({"sharpness", "--out", (dir / "file" / "sub").string()});
    CHECK(r.code == 1);
}

TEST_CASE("vanish writes the series, metadata and plot script") {
    const fs::path dir = fresh_dir("vanish");
    const Result r = run({"vanish", "--example", "5.3", "--dx", "0.004", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "vanish_5.3.csv"));
    CHECK(fs::exists(dir / "vanish_5.3.meta.json"));
    CHECK(fs::exists(dir / "vanish_5.3.gnuplot"));
    const auto meta = nlohmann::json::parse(slurp(dir / "vanish_5.3.meta.json"));
    const double slope = meta.at("slope").get<double>();
    CHECK(slope >= 0.35);
    CHECK(slope <= 0.65);
    CHECK(meta.at("dx").get<double>() == 0.004);
}

TEST_CASE("results do not depend on the thread count") {
    const fs::path a = fresh_dir("threads1"), b = fresh_dir("threads8");
    CHECK(run({"homog", "--example", "5.6", "--dx", "0.015625", "--threads", "1", "--out", a.string()}).code == 0);
    CHECK(run({"homog", "--example", "5.6", "--dx", "0.015625", "--threads", "8", "--out", b.string()}).code == 0);
    CHECK(slurp(a / "homog_5.6.csv") == slurp(b / "homog_5.6.csv"));
    CHECK(!slurp(a / "homog_5.6.csv").empty());
}

TEST_CASE("JSON configuration and flag precedence") {
    const fs::path dir = fresh_dir("config");
    const fs::path cfg = dir / "cfg.json";
    write_file(cfg, "{\"dx\": 0.03125, \"T\": 0.5, \"out\": \"" + (dir / "from_config").string() + "\"}");
    const Result a = run({"solve", "--example", "5.1", "--config", cfg.string()});
    CHECK(a.code == 0);
    CHECK(a.out.find("dx = 0.03125") != std::string::npos);
    CHECK(fs::exists(dir / "from_config" / "solve_5.1.csv"));

    const Result b = run({"solve", "--example", "5.1", "--dx", "0.0625", "--config", cfg.string()});
    CHECK(b.code == 0);
    CHECK(b.out.find("dx = 0.0625") != std::string::npos);

    write_file(dir / "unknown.json", "{\"dx\": 0.03125, \"colour\": \"red\"}");
    const Result c = run({"solve", "--example", "5.1", "--config", (dir / "unknown.json").string()});
    CHECK(c.code == 2);
    CHECK(c.err.find("colour") != std::string::npos);

    write_file(dir / "broken.json", "{\"dx\": ");
    CHECK(run({"solve", "--example", "5.1", "--config", (dir / "broken.json").string()}).code == 2);
    CHECK(run({"solve", "--example", "5.1", "--config", (dir / "missing.json").string()}).code == 2);
}

TEST_CASE("small effective-Hamiltonian run") {
    const fs::path dir = fresh_dir("effham");
    const Result r = run({"effham", "--example", "6.1", "--p", "3,1", "--N", "16", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "effham_6.1_table.csv"));
    bool any_sigma = false;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename().string().find("sigma") != std::string::npos) any_sigma = true;
    }
    CHECK(any_sigma);
}
