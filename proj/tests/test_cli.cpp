#include "om/serialize.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const std::string cli = OM_CLI_PATH;

fs::path sandbox() {
    fs::path dir = fs::temp_directory_path() / "om_cli_test";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

int run(const std::string& args, const fs::path& stdout_file) {
    std::string cmd = cli + " " + args + " > " + stdout_file.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("solve writes solution, svg and csv artifacts") {
    fs::path dir = sandbox();
    fs::path conf = dir / "center.conf";
    write_file(conf, "domain = square\nh = 0.25\nsigma0 = boundary\n"
                     "load = point 0 0 1\npairs = full\ncolgen = off\n");
    int rc = run("solve --config " + conf.string() + " --out " + (dir / "run").string() +
                     " --trace",
                 dir / "solve.log");
    CHECK(rc == 0);
    CHECK(fs::exists(dir / "run" / "solution.json"));
    CHECK(fs::exists(dir / "run" / "sigma.svg"));
    CHECK(fs::exists(dir / "run" / "u.csv"));
    CHECK(fs::exists(dir / "run" / "trace.csv"));
    nlohmann::json j = om::read_json_file((dir / "run" / "solution.json").string());
    CHECK(std::abs(j.at("Z0").get<double>() - 0.7071) < 1e-3);
}

TEST_CASE("solve is deterministic across runs") {
    fs::path dir = sandbox();
    fs::path conf = dir / "det.conf";
    write_file(conf, "domain = square\nh = 0.25\nsigma0 = boundary\n"
                     "load = point 0 0 1\ncolgen = on\n");
    REQUIRE(run("solve --config " + conf.string() + " --out " + (dir / "a").string(),
                dir / "a.log") == 0);
    REQUIRE(run("solve --config " + conf.string() + " --out " + (dir / "b").string(),
                dir / "b.log") == 0);
    CHECK(slurp(dir / "a" / "solution.json") == slurp(dir / "b" / "solution.json"));
    CHECK(slurp(dir / "a" / "sigma.svg") == slurp(dir / "b" / "sigma.svg"));
}

TEST_CASE("oracle then check round trips at tight tolerance") {
    fs::path dir = sandbox();
    fs::path conf = dir / "oracle.conf";
    write_file(conf, "domain = square\nh = 0.25\nsigma0 = boundary\n"
                     "oracle = oneforce 0 0\n");
    REQUIRE(run("oracle --config " + conf.string() + " --out " + (dir / "of").string(),
                dir / "oracle.log") == 0);
    int rc = run("check --solution " + (dir / "of" / "solution.json").string() + " --out " +
                     (dir / "chk").string() + " --tol 1e-10",
                 dir / "check.log");
    CHECK(rc == 0);
    nlohmann::json j = om::read_json_file((dir / "chk" / "residuals.json").string());
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("two_point").get<double>() <= 1e-10);
}

TEST_CASE("load on a Dirichlet node exits nonzero with a machine-readable error") {
    fs::path dir = sandbox();
    fs::path conf = dir / "bad.conf";
    write_file(conf, "domain = square\nh = 0.25\nsigma0 = boundary\n"
                     "load = point 0.5 0 1\n");
    int rc = run("solve --config " + conf.string() + " --out " + (dir / "bad").string(),
                 dir / "bad.log");
    CHECK(rc != 0);
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "bad.log"));
    CHECK(j.contains("error"));
    CHECK(j.at("error").get<std::string>().find("Dirichlet") != std::string::npos);
}

TEST_CASE("fmd and compare emit their reports") {
    fs::path dir = sandbox();
    fs::path conf = dir / "fmd.conf";
    write_file(conf, "domain = square\nh = 0.125\nsigma0 = boundary\n"
                     "load = point 0 0 1\n");
    REQUIRE(run("fmd --config " + conf.string() + " --out " + (dir / "fmd").string(),
                dir / "fmd.log") == 0);
    nlohmann::json f = om::read_json_file((dir / "fmd" / "fmd.json").string());
    CHECK(std::abs(f.at("Z").get<double>() - 0.70710678) < 1e-6);

    REQUIRE(run("compare --config " + conf.string() + " --out " + (dir / "cmp").string(),
                dir / "cmp.log") == 0);
    nlohmann::json c = om::read_json_file((dir / "cmp" / "compare.json").string());
    CHECK(c.at("equal").get<bool>());
}

TEST_CASE("metric and geodesic commands write their fields") {
    fs::path dir = sandbox();
    fs::path conf = dir / "metric.conf";
    write_file(conf, "domain = square\nh = 0.25\nsigma0 = boundary\n"
                     "pairs = radius 0.25\nsource = 0 0\ntarget = 0.5 0\n");
    REQUIRE(run("metric --config " + conf.string() + " --out " + (dir / "m").string(),
                dir / "metric.log") == 0);
    CHECK(fs::exists(dir / "m" / "metric.csv"));
    REQUIRE(run("geodesic --config " + conf.string() + " --out " + (dir / "g").string(),
                dir / "geo.log") == 0);
    std::string geo = slurp(dir / "g" / "geodesic.csv");
    CHECK(geo.find("x,y") == 0);
}

TEST_CASE("radial oracle command reports the constants") {
    fs::path dir = sandbox();
    fs::path conf = dir / "radial.conf";
    write_file(conf, "oracle = radial-uniform 1.0\n");
    REQUIRE(run("oracle --config " + conf.string() + " --out " + (dir / "rad").string(),
                dir / "radial.log") == 0);
    nlohmann::json j = om::read_json_file((dir / "rad" / "radial.json").string());
    CHECK(std::abs(j.at("Z0").get<double>() - 1.9869176) < 1e-6);
    CHECK(j.at("identity_residual").get<double>() <= 1e-10);
}
