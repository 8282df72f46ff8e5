#include "tgeom/error.hpp"
#include "tgeom/point.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

using namespace tgeom;

TEST(Point, HoldsCoordinates) {
    const Point p{1.0, -2.5, 3.0};
    EXPECT_EQ(p.dimension(), 3u);
    EXPECT_EQ(p[1], -2.5);
    EXPECT_EQ(p, (Point{1.0, -2.5, 3.0}));
    EXPECT_LT((Point{1.0, 2.0}), (Point{1.0, 3.0}));
}

TEST(Point, RejectsNonFinite) {
    EXPECT_THROW(Point({1.0, std::numeric_limits<double>::quiet_NaN()}), Error);
    EXPECT_THROW(Point({std::numeric_limits<double>::infinity()}), Error);
}

TEST(Point, DimensionCheck) {
    const Point a{0.0, 0.0}, b{0.0, 0.0, 0.0};
    EXPECT_NO_THROW(require_dimension(2, {&a}));
    try {
        require_dimension(2, {&a, &b});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::chart_mismatch);
        EXPECT_NE(std::string(e.what()).find("chart mismatch"), std::string::npos);
    }
}

TEST(PointChart, OneDimensionalLattice) {
    const auto pts = sample_chart(PointChart({{0.0, 1.0}}, {3}));
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(pts[0], Point{0.0});
    EXPECT_EQ(pts[1], Point{0.5});
    EXPECT_EQ(pts[2], Point{1.0});
}

TEST(PointChart, CornersInRowMajorOrder) {
    const auto pts = sample_chart(PointChart({{0.0, 1.0}, {0.0, 1.0}}, {2, 2}));
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_EQ(pts[0], (Point{0.0, 0.0}));
    EXPECT_EQ(pts[1], (Point{0.0, 1.0}));
    EXPECT_EQ(pts[2], (Point{1.0, 0.0}));
    EXPECT_EQ(pts[3], (Point{1.0, 1.0}));
}

TEST(PointChart, EndpointsAreExact) {
    const PointChart c = PointChart::cube(2, {-3.0, 3.0}, 512);
    EXPECT_EQ(c.lattice_size(), 512u * 512u);
    EXPECT_EQ(c.lattice_point(0), (Point{-3.0, -3.0}));
    EXPECT_EQ(c.lattice_point(c.lattice_size() - 1), (Point{3.0, 3.0}));
    EXPECT_DOUBLE_EQ(c.step(0), 6.0 / 511.0);
}

TEST(PointChart, RejectsBadCharts) {
    EXPECT_THROW(PointChart({{1.0, 1.0}}, {3}), Error);
    EXPECT_THROW(PointChart({{2.0, 1.0}}, {3}), Error);
    EXPECT_THROW(PointChart({{0.0, 1.0}}, {1}), Error);
    EXPECT_THROW(PointChart({}, {}), Error);
    EXPECT_THROW(PointChart({{0.0, 1.0}}, {2, 2}), Error);
}

TEST(PointChart, Contains) {
    const PointChart c = PointChart::cube(2, {0.0, 1.0}, 5);
    EXPECT_TRUE(c.contains(Point{0.5, 1.0}));
    EXPECT_FALSE(c.contains(Point{0.5, 1.5}));
    EXPECT_FALSE(c.contains(Point{0.5}));
}
