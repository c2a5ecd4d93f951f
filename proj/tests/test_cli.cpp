#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "htype/geometry.hpp"
#include "htype/heatkernel.hpp"
#include "htype/io.hpp"
#include "htype/simulate.hpp"

using namespace htype;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("htype_cli_test_" + name);
}

}  // namespace

TEST_CASE("dist") {
    const Run r = run({"dist", "--n", "1", "--m", "1", "--x", "1", "--z", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("d=1\n", 0) == 0);
    const Run j = run({"dist", "--x", "1", "--z", "0.39269908169872414", "--format", "json"});
    CHECK(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["d"].get<double>() == cc_distance(1.0, 0.39269908169872414).d);
}

TEST_CASE("heat eval matches the library byte for byte") {
    const Run r = run({"heat", "eval", "--n", "1", "--m", "1", "--t", "1", "--x", "0", "--z", "0", "--tol", "1e-8"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["value"].get<double>() > 0);
    CHECK(doc["err"].get<double>() <= 1e-8 * doc["value"].get<double>());
    CHECK(doc.contains("method"));

    KernelQuery q;
    q.n = 2;
    q.m = 3;
    q.t = 0.5;
    q.r = 0.25;
    q.s = 1.5;
    q.rel_tol = 1e-9;
    const Run s = run({"heat", "eval", "--n", "2", "--m", "3", "--t", "0.5", "--x", "0.25", "--z", "1.5", "--tol", "1e-9"});
    CHECK(s.out == to_json(pt(q)).dump(2) + "\n");
    const Run h = run({"heat", "eval", "--n", "2", "--m", "3", "--t", "0.5", "--x", "0.25", "--z", "1.5", "--tol", "1e-9",
                       "--method", "hankel"});
    CHECK(h.out == to_json(pt_hankel(q)).dump(2) + "\n");
}

TEST_CASE("heat table") {
    const Run r = run({"heat", "table", "--x-grid", "0:1:3", "--z-grid", "0.5", "--tol", "1e-8"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
    CHECK(run({"heat", "table", "--x-grid", "0:1", "--z-grid", "0"}).code == 1);
}

TEST_CASE("simulate writes the library samples") {
    const auto path = temp_file("samples.csv");
    const Run r = run({"simulate", "--n", "1", "--m", "1", "--t", "1", "--paths", "5", "--steps", "20", "--seed", "9",
                       "--out", path.string()});
    CHECK(r.code == 0);
    const SampleBatch b = simulate(build_heisenberg(1), SimConfig{1.0, 20, 5, 9});
    std::ostringstream expect;
    expect << "x1,x2,z1\n";
    for (std::size_t i = 0; i < b.size(); ++i)
        expect << format_number(b.xs[2 * i]) << ',' << format_number(b.xs[2 * i + 1]) << ',' << format_number(b.zs[i])
               << '\n';
    CHECK(slurp(path) == expect.str());
    std::filesystem::remove(path);
}

TEST_CASE("geodesic csv") {
    const Run r = run({"geodesic", "--preset", "heisenberg", "--x", "1,0.5", "--z", "0.3", "--samples", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("t,x1,x2,z1\n0,0,0,0\n", 0) == 0);
    const Run bad = run({"geodesic", "--x", "1,0.5,2", "--z", "0.3"});
    CHECK(bad.code == 1);
}

TEST_CASE("verify group") {
    const auto path = temp_file("report.json");
    const Run r = run({"verify", "group", "--preset", "complex-heisenberg", "--out", path.string()});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(path));
    CHECK(doc["pass"].get<bool>());
    std::filesystem::remove(path);
}

TEST_CASE("verify bounds") {
    const Run r = run({"verify", "bounds", "--n", "1", "--m", "1", "--grid", "4", "--d0-min", "2", "--kind", "kernel"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["pass"].get<bool>());
    CHECK(doc["scans"].size() == 1);
}

TEST_CASE("group and poly commands") {
    const Run h = run({"group", "hurwitz", "--k", "16"});
    CHECK(nlohmann::json::parse(h.out)["rho"] == 9);
    const Run e = run({"group", "exists", "--two-n", "16", "--m", "9"});
    CHECK(nlohmann::json::parse(e.out)["exists"] == false);
    const Run m = run({"group", "mul", "--left", "1,0;0", "--right", "0,1;0"});
    CHECK(nlohmann::json::parse(m.out)["z"][0] == 0.5);
    const Run l = run({"poly", "apply", "--p", "x1 + z1*x2", "--op", "L"});
    CHECK(l.out == "x1\n");
    const Run k = run({"poly", "k2", "--n", "1", "--t", "1/3"});
    CHECK(nlohmann::json::parse(k.out)["value"] == "2");
    const Run p = run({"poly", "heat", "--p", "x1^2 + x2^2", "--t", "1/2"});
    CHECK(p.code == 0);
    CHECK(p.out.find('2') != std::string::npos);
}

TEST_CASE("validation errors name the flag") {
    const Run a = run({"dist", "--x", "-1", "--z", "0"});
    CHECK(a.code == 1);
    CHECK(a.err.find("--x") != std::string::npos);
    const Run b = run({"heat", "eval", "--m", "2", "--x", "1", "--z", "1", "--method", "hankel"});
    CHECK(b.code == 1);
    CHECK(b.err.find("--method") != std::string::npos);
    const Run c = run({"group", "show", "--preset", "nope"});
    CHECK(c.code == 1);
    CHECK(c.err.find("--preset") != std::string::npos);
    const Run d = run({"simulate", "--n", "1", "--m", "2"});
    CHECK(d.code == 1);
    CHECK(d.err.find("--m") != std::string::npos);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"poly", "apply", "--p", "x1", "--op", "X9"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}
