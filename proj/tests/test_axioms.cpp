#include "tgeom/axioms.hpp"
#include "tgeom/error.hpp"
#include "tgeom/spacetime.hpp"

#include <cmath>

#include <gtest/gtest.h>

using namespace tgeom;

namespace {

std::vector<Point> outside_disk(const PointChart& chart) {
    std::vector<Point> out;
    for (auto& p : sample_chart(chart)) {
        if (CutPlaneModel::in_open_region(p)) out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

TEST(SigmaSpace, EuclideanHolds) {
    const auto r = check_sigma_space(euclidean(2), sample_chart(PointChart::cube(2, {-1.0, 1.0}, 6)));
    EXPECT_TRUE(r.all_hold());
    EXPECT_EQ(r.points, 36u);
    EXPECT_EQ(r.at("symmetry").tested, 36u * 35u / 2);
}

TEST(SigmaSpace, InjectedAsymmetry) {
    const std::vector<Point> pts{Point{0.0}, Point{1.0}, Point{2.0}};
    std::vector<std::vector<double>> s{{0.0, 0.5, 2.0}, {0.5, 0.0, 0.5}, {2.0, 0.5, 0.0}};
    s[1][2] = 0.75;
    const auto wf = tabulated_unchecked(pts, s);
    const auto r = check_sigma_space(wf, pts);
    EXPECT_FALSE(r.all_hold());
    const auto& sym = r.at("symmetry");
    EXPECT_EQ(sym.status, AxiomStatus::fails);
    ASSERT_FALSE(sym.witnesses.empty());
    const auto& w = sym.witnesses.front();
    ASSERT_EQ(w.points.size(), 2u);
    EXPECT_EQ(w.points[0], Point{1.0});
    EXPECT_EQ(w.points[1], Point{2.0});
    // witness values are recomputable from the world function
    EXPECT_EQ(w.values[0], wf(w.points[0], w.points[1]));
    EXPECT_EQ(w.values[1], wf(w.points[1], w.points[0]));
    EXPECT_EQ(r.at("zero_diagonal").status, AxiomStatus::holds);
}

TEST(SigmaSpace, InjectedDiagonal) {
    const std::vector<Point> pts{Point{0.0}, Point{1.0}};
    const auto wf = tabulated_unchecked(pts, {{0.0, 0.5}, {0.5, 0.25}});
    const auto r = check_sigma_space(wf, pts);
    EXPECT_EQ(r.at("zero_diagonal").status, AxiomStatus::fails);
    EXPECT_EQ(r.at("zero_diagonal").witnesses.front().points.front(), Point{1.0});
}

TEST(SigmaSpace, DeformedRampHolds) {
    const auto wf = deformed({0.1, 0.1, 2, GapPolicy::linear_ramp});
    const auto r = check_sigma_space(wf, sample_chart(PointChart::cube(2, {-1.0, 1.0}, 9)));
    EXPECT_TRUE(r.all_hold());
}

TEST(SigmaSpace, DeformedGapIsNotFinite) {
    const auto wf = deformed({0.1, 0.1, 2, GapPolicy::error});
    const auto r = check_sigma_space(wf, sample_chart(PointChart::cube(2, {-1.0, 1.0}, 9)));
    EXPECT_EQ(r.at("finite").status, AxiomStatus::fails);
}

TEST(MetricAxioms, EuclideanHolds) {
    const auto r = check_metric_axioms(euclidean(2), sample_chart(PointChart::cube(2, {-1.0, 1.0}, 5)));
    EXPECT_TRUE(r.all_hold());
    EXPECT_FALSE(r.sampled);
    EXPECT_EQ(r.at("triangle_inequality").tested, 25u * 25u * 25u);
}

TEST(MetricAxioms, MinkowskiNotApplicable) {
    const auto wf = minkowski(2);
    const auto r = check_metric_axioms(wf, sample_chart(PointChart::cube(2, {-1.0, 1.0}, 5)));
    EXPECT_FALSE(r.all_hold());
    const auto& nn = r.at("nonnegativity");
    EXPECT_EQ(nn.status, AxiomStatus::fails);
    ASSERT_EQ(nn.witnesses.size(), 1u);
    const auto& w = nn.witnesses.front();
    EXPECT_LT(wf(w.points[0], w.points[1]), 0.0);
    EXPECT_EQ(w.values[0], wf(w.points[0], w.points[1]));
    EXPECT_EQ(r.at("triangle_inequality").status, AxiomStatus::not_applicable);
    EXPECT_EQ(r.at("identity_of_indiscernibles").status, AxiomStatus::not_applicable);
}

TEST(MetricAxioms, LightlikePairsBreakIdentity) {
    // timelike-or-null point set on the light cone: sigma >= 0 but zero off the diagonal
    const std::vector<Point> pts{Point{0.0, 0.0}, Point{1.0, 1.0}, Point{2.0, 2.0}};
    const auto r = check_metric_axioms(minkowski(2), pts);
    EXPECT_EQ(r.at("nonnegativity").status, AxiomStatus::holds);
    EXPECT_EQ(r.at("identity_of_indiscernibles").status, AxiomStatus::fails);
}

TEST(MetricAxioms, CutPlaneTriangleInequality) {
    const auto pts = outside_disk(PointChart::cube(2, {-3.0, 3.0}, 13));
    ASSERT_LE(pts.size(), triple_sweep_cap);
    const auto r = check_metric_axioms(cutplane(), pts);
    EXPECT_TRUE(r.all_hold());
    EXPECT_EQ(r.at("triangle_inequality").tested, pts.size() * pts.size() * pts.size());
}

TEST(MetricAxioms, EuclideanFailsWithoutSqrtLike) {
    // sigma = |x - y|^4 / 2 gives rho = |x - y|^2, which violates the triangle inequality
    const std::vector<Point> pts{Point{0.0}, Point{1.0}, Point{2.0}};
    const auto wf = tabulated(pts, {{0.0, 0.5, 8.0}, {0.5, 0.0, 0.5}, {8.0, 0.5, 0.0}});
    const auto r = check_metric_axioms(wf, pts);
    const auto& tri = r.at("triangle_inequality");
    EXPECT_EQ(tri.status, AxiomStatus::fails);
    ASSERT_FALSE(tri.witnesses.empty());
    const auto& w = tri.witnesses.front();
    EXPECT_LT(w.values[0] + w.values[1], w.values[2]);
}

TEST(MetricAxioms, SubsamplingIsSeeded) {
    const auto pts = sample_chart(PointChart::cube(2, {-1.0, 1.0}, 16));
    const auto a = check_metric_axioms(euclidean(2), pts, 5, 40);
    const auto b = check_metric_axioms(euclidean(2), pts, 5, 40);
    EXPECT_TRUE(a.sampled);
    EXPECT_EQ(a.points, 40u);
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(MetricAxioms, WorkersDoNotChangeReport) {
    const std::vector<Point> pts{Point{0.0}, Point{1.0}, Point{2.0}, Point{3.0}};
    std::vector<std::vector<double>> s(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s[i][j] = std::pow(i - j, 4) / 2.0;
    const auto wf = tabulated(pts, s);
    EXPECT_EQ(check_metric_axioms(wf, pts, 0, 200, 1).to_json().dump(),
              check_metric_axioms(wf, pts, 0, 200, 3).to_json().dump());
}

TEST(MetricAxioms, EmptySet) {
    EXPECT_THROW(check_metric_axioms(euclidean(2), {}), Error);
    EXPECT_THROW(check_sigma_space(euclidean(2), {}), Error);
}
