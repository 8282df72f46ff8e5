#include "cli/app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = tgeom::cli::run_cli(std::move(args), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string tmp(const std::string& name) { return std::string(TGEOM_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, EuclideanTubeSummary) {
    const auto csv = tmp("tube.csv");
    const auto r = run({"tube", "--geometry", "euclidean", "--dim", "2", "--p0", "0,0", "--p1", "1,1", "--chart",
                        "-1,1,64", "--out", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = json::parse(r.out);
    EXPECT_EQ(summary.at("dimension_estimate").at("value"), 1.0);
    EXPECT_EQ(summary.at("member_count"), 64);
    std::istringstream lines(slurp(csv));
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "x0,x1,residual");
}

TEST(Cli, MinkowskiSpacelikeTubeIsThreeDimensional) {
    const auto r = run({"tube", "--geometry", "minkowski", "--dim", "4", "--p0=-92.5,0,-92.5,7.5",
                        "--p1=-92.5,1,-92.5,7.5", "--chart", "0,15,16", "--band", "7.75", "--out", tmp("mtube.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = json::parse(r.out);
    EXPECT_EQ(summary.at("member_count"), 4096);
    EXPECT_EQ(summary.at("dimension_estimate").at("value"), 3.0);
}

TEST(Cli, MissingAxisIsUsageError) {
    const auto r = run({"tube", "--geometry", "euclidean", "--dim", "2", "--p0", "0,0"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--p1"), std::string::npos);
}

TEST(Cli, DegenerateAxisIsNumericalFailure) {
    const auto r = run({"tube", "--geometry", "minkowski", "--dim", "2", "--p0", "0,0", "--p1", "1,1"});
    EXPECT_EQ(r.code, 3);
}

TEST(Cli, ChartMismatchIsUsageError) {
    const auto r = run({"tube", "--geometry", "euclidean", "--dim", "3", "--p0", "0,0", "--p1", "1,1"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, PlaneSegmentSection) {
    auto plane = run({"plane", "--geometry", "euclidean", "--dim", "3", "--point", "0,0,0", "--point", "1,0,0",
                      "--point", "0,1,0", "--chart", "-1,1,5", "--out", tmp("plane.csv")});
    ASSERT_EQ(plane.code, 0) << plane.err;
    EXPECT_EQ(json::parse(plane.out).at("member_count"), 25);
    EXPECT_EQ(json::parse(plane.out).at("dimension_estimate").at("value"), 2.0);

    auto seg = run({"segment", "--geometry", "euclidean", "--dim", "2", "--p", "0,0", "--q", "2,0", "--chart",
                    "-1,3,5", "--out", tmp("seg.csv")});
    ASSERT_EQ(seg.code, 0) << seg.err;
    EXPECT_EQ(json::parse(seg.out).at("member_count"), 3);

    auto sec = run({"section", "--geometry", "euclidean", "--dim", "2", "--p0", "0,0", "--p1", "1,0", "--p", "2,0",
                    "--chart", "-3,3,7", "--out", tmp("sec.csv")});
    ASSERT_EQ(sec.code, 0) << sec.err;
    EXPECT_EQ(json::parse(sec.out).at("member_count"), 1);
}

TEST(Cli, RiemannVerifyFlat) {
    const auto r = run({"riemann-verify", "--metric", "flat", "--pairs", "50", "--h", "1e-3"});
    ASSERT_EQ(r.code, 0) << r.err << r.out;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST(Cli, RiemannVerifySphereSweep) {
    const auto r = run({"riemann-verify", "--metric", "sphere", "--h-sweep", "--pairs", "2"});
    ASSERT_EQ(r.code, 0) << r.err << r.out;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST(Cli, RiemannVerifyDeformedFails) {
    const auto r = run({"riemann-verify", "--geometry", "deformed", "--pairs", "5"});
    EXPECT_EQ(r.code, 1) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_FALSE(j.at("pass").get<bool>());
}

TEST(Cli, Geodesic) {
    const auto r = run({"geodesic", "--metric", "flat", "--x", "3,4", "--xp", "0,0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j.at("length").get<double>(), 5.0, 1e-12);
}

TEST(Cli, ConvexityDemoDefault) {
    const auto csv = tmp("convexity.csv");
    const auto r = run({"convexity-demo", "--out", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_TRUE(std::filesystem::exists(csv));
    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "px,py,qx,qy,crosses_disk,sigma_cut,sigma_euclid,discrepancy");
    bool found = false;
    while (std::getline(lines, line)) {
        if (line.rfind("-2,0,2,0,", 0) != 0) continue;
        found = true;
        const double disc = std::stod(line.substr(line.rfind(',') + 1));
        const double l = 2 * std::sqrt(3.0) + std::numbers::pi / 3;
        EXPECT_NEAR(disc, 0.5 * l * l - 8.0, 1e-12);
        EXPECT_NEAR(disc, 2.176, 1e-3);
    }
    EXPECT_TRUE(found);
}

TEST(Cli, ConvexityMissOnly) {
    const auto r = run({"convexity-demo", "--pairs-miss-only"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_LE(std::abs(std::stod(line.substr(line.rfind(',') + 1))), 1e-12);
    }
    EXPECT_GT(rows, 0);
}

TEST(Cli, ConvexityRejectsDiskPoints) {
    EXPECT_EQ(run({"convexity-demo", "--pair", "0.5,0,2,0"}).code, 2);
}

TEST(Cli, ParallelWitnessEuclideanNone) {
    const auto r = run({"parallel-witness", "--geometry", "euclidean", "--dim", "3", "--seed", "1", "--budget", "2000"});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_FALSE(json::parse(r.out).at("found").get<bool>());
}

TEST(Cli, ParallelWitnessDeformedIsReproducible) {
    const std::vector<std::string> args{"parallel-witness", "--geometry", "deformed", "--seed", "1", "--tol", "1e-6"};
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_TRUE(json::parse(a.out).at("found").get<bool>());
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ParallelWitnessNeedsSeed) {
    EXPECT_EQ(run({"parallel-witness", "--geometry", "deformed"}).code, 2);
    EXPECT_EQ(run({"parallel-witness", "--geometry", "hyperbolic", "--seed", "1"}).code, 2);
}

TEST(Cli, Axioms) {
    const auto e = run({"axioms", "--geometry", "euclidean", "--dim", "2"});
    EXPECT_EQ(e.code, 0) << e.err;
    EXPECT_TRUE(json::parse(e.out).at("all_hold").get<bool>());
    const auto m = run({"axioms", "--geometry", "minkowski", "--dim", "2"});
    EXPECT_EQ(m.code, 1) << m.err;
    const auto c = run({"axioms", "--geometry", "cutplane", "--points", "-3,3,9"});
    EXPECT_EQ(c.code, 0) << c.err;
    EXPECT_EQ(run({"axioms", "--geometry", "euclidean", "--dim", "2", "--points", "[[0,0],[1"}).code, 2);
}

TEST(Cli, Thickness) {
    const auto r = run({"thickness", "--d0", "0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(json::parse(r.out).at("thickness").get<double>(), std::sqrt(1.43 / 1.2), 1e-9);
    const auto z = run({"thickness", "--d0", "0"});
    ASSERT_EQ(z.code, 0) << z.err;
    EXPECT_EQ(json::parse(z.out).at("thickness").get<double>(), 0.0);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto cfg = tmp("tube_config.json");
    std::ofstream(cfg) << R"({"geometry": "euclidean", "dim": 2, "p0": "0,0", "p1": "1,0", "chart": "-1,1,5"})";
    const auto a = run({"tube", "--config", cfg});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "x0,x1,residual");
    // flags win over the file: the diagonal axis picks up 5 points, not the 5 on x1 = 0
    const auto b = run({"tube", "--config", cfg, "--p1", "1,1", "--out", tmp("tube_cfg.csv")});
    ASSERT_EQ(b.code, 0) << b.err;
    const auto members = slurp(tmp("tube_cfg.csv"));
    EXPECT_NE(members.find("0.5,0.5,"), std::string::npos);
    EXPECT_EQ(members.find("0.5,0,"), std::string::npos);

    const auto bad = tmp("bad_config.json");
    std::ofstream(bad) << R"({"geometry": "euclidean", "colour": "blue"})";
    EXPECT_EQ(run({"tube", "--config", bad, "--p0", "0,0", "--p1", "1,0"}).code, 2);
}

TEST(Cli, WorkersDoNotChangeOutput) {
    const std::vector<std::string> base{"tube", "--geometry", "minkowski", "--dim", "3", "--p0", "0,0,0",
                                        "--p1", "1,0.5,0", "--chart", "-2,2,15", "--band", "0.3"};
    auto one = base, four = base;
    one.insert(one.end(), {"--workers", "1"});
    four.insert(four.end(), {"--workers", "4"});
    const auto a = run(one), b = run(four);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, HelpAndUnknownCommand) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}
