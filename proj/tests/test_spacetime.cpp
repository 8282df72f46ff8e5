#include "tgeom/error.hpp"
#include "tgeom/random.hpp"
#include "tgeom/spacetime.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

using namespace tgeom;

namespace {

// Shortest path around the unit disk, built explicitly from the two tangent
// points of each endpoint: try both ways round and keep the shorter.
double tangent_oracle_length(double px, double py, double qx, double qy) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double rp = std::hypot(px, py), rq = std::hypot(qx, qy);
    const double fp = std::atan2(py, px), fq = std::atan2(qy, qx);
    const double ap = std::acos(1.0 / rp), aq = std::acos(1.0 / rq);
    double best = INFINITY;
    for (int dir : {+1, -1}) {
        // leave p at its tangent point ahead of it, arrive at q's tangent point behind it
        const double tp = fp + dir * ap;
        const double tq = fq - dir * aq;
        double arc = std::fmod(dir * (tq - tp), two_pi);
        if (arc < 0.0) arc += two_pi;
        const double tpx = std::cos(tp), tpy = std::sin(tp);
        const double tqx = std::cos(tq), tqy = std::sin(tq);
        const double len = std::hypot(px - tpx, py - tpy) + arc + std::hypot(qx - tqx, qy - tqy);
        best = std::min(best, len);
    }
    return best;
}

}  // namespace

TEST(Deformed, Examples) {
    DeformedParams p{0.1, 0.1, 4, GapPolicy::error};
    EXPECT_NEAR(static_cast<double>(deform_sigma(p, 1.0L, false)), 1.1, 1e-15);
    EXPECT_EQ(static_cast<double>(deform_sigma(p, -0.5L, false)), -0.5);
    EXPECT_EQ(static_cast<double>(deform_sigma(p, 0.0L, true)), 0.0);
    EXPECT_THROW(deform_sigma(p, 0.05L, false), Error);
    p.gap_policy = GapPolicy::linear_ramp;
    EXPECT_NEAR(static_cast<double>(deform_sigma(p, 0.05L, false)), 0.1, 1e-15);
}

TEST(Deformed, GapErrorMessage) {
    const DeformedParams p{0.1, 0.1, 2, GapPolicy::error};
    try {
        deformed_sigma(p, Point{0.0, 0.0}, Point{0.3, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::undefined);
        EXPECT_NE(std::string(e.what()).find("world function undefined in gap"), std::string::npos);
    }
}

TEST(Deformed, PointEvaluation) {
    const DeformedParams p{0.1, 0.1, 4, GapPolicy::error};
    EXPECT_NEAR(deformed_sigma(p, Point{0.0, 0.0, 0.0, 0.0}, Point{2.0, 1.0, 0.0, 0.0}), 1.6, 1e-15);
    EXPECT_EQ(deformed_sigma(p, Point{0.0, 0.0, 0.0, 0.0}, Point{0.0, 1.0, 0.0, 0.0}), -0.5);
    const auto wf = deformed(p);
    const Point a{0.1, 0.2, 0.3, 0.4}, b{2.0, -1.0, 0.5, 0.25};
    EXPECT_EQ(wf(a, b), wf(b, a));
    EXPECT_EQ(wf(a, a), 0.0);
}

TEST(Deformed, RampIsContinuous) {
    for (double d0 : {0.05, 0.1, 0.4}) {
        for (double s0 : {0.02, 0.1, 0.3}) {
            const DeformedParams p{d0, s0, 4, GapPolicy::linear_ramp};
            const long double e = 1e-12L;
            // junction at 0: ramp -> 0 from above, spacelike branch -> 0 from below
            EXPECT_NEAR(static_cast<double>(deform_sigma(p, e, false)), 0.0, 1e-10);
            EXPECT_NEAR(static_cast<double>(deform_sigma(p, -e, false)), 0.0, 1e-10);
            // junction at sigma0: both sides approach sigma0 + d0
            EXPECT_NEAR(static_cast<double>(deform_sigma(p, s0 - e, false)), s0 + d0, 1e-10);
            EXPECT_NEAR(static_cast<double>(deform_sigma(p, s0 + e, false)), s0 + d0, 1e-10);
        }
    }
}

TEST(Deformed, ZeroDeformationIsMinkowski) {
    const auto wf = deformed({0.0, 0.0, 3, GapPolicy::error});
    const auto m = minkowski(3);
    SeededSampler rng(29);
    for (int i = 0; i < 200; ++i) {
        const Point a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Point b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        EXPECT_NEAR(wf(a, b), m(a, b), 1e-14);
    }
}

TEST(Deformed, InvalidParams) {
    EXPECT_THROW(deformed({-0.1, 0.1, 4, GapPolicy::error}), Error);
    EXPECT_THROW(deformed({0.1, -0.1, 4, GapPolicy::error}), Error);
    EXPECT_THROW(gap_policy_from_string("clamp"), Error);
    EXPECT_EQ(gap_policy_from_string("linear_ramp"), GapPolicy::linear_ramp);
}

TEST(Thickness, UndeformedIsZero) {
    ThicknessQuery q{Point{0.0, 0.0, 0.0, 0.0}, Point{1.0, 0.0, 0.0, 0.0}, Point{3.0, 0.0, 0.0, 0.0},
                     {0.0, 1.0, 0.0, 0.0}};
    const auto r = tube_thickness({0.0, 0.0, 4, GapPolicy::error}, q);
    EXPECT_FALSE(r.found);
    EXPECT_EQ(r.thickness, 0.0);
}

TEST(Thickness, MatchesClosedForm) {
    // d^2 = [2 d0 (T^2 - T t + t^2) + 3 d0^2] / (T^2 + 2 d0) with T = 1, t = 3.
    ThicknessQuery q{Point{0.0, 0.0, 0.0, 0.0}, Point{1.0, 0.0, 0.0, 0.0}, Point{3.0, 0.0, 0.0, 0.0},
                     {0.0, 1.0, 0.0, 0.0}};
    double previous = 0.0;
    for (double d0 : {0.001, 0.01, 0.05, 0.1, 0.2}) {
        const auto r = tube_thickness(DeformedParams::with_d0(d0), q);
        ASSERT_TRUE(r.found) << d0;
        const double expected = std::sqrt((14.0 * d0 + 3.0 * d0 * d0) / (1.0 + 2.0 * d0));
        EXPECT_NEAR(r.thickness, expected, 1e-9) << d0;
        EXPECT_LE(r.residual, 1e-8);
        EXPECT_LT(r.f_lo * r.f_hi, 0.0);
        EXPECT_GT(r.thickness, previous);
        previous = r.thickness;
    }
}

TEST(Thickness, RotationInvariantDirection) {
    ThicknessQuery q{Point{0.0, 0.0, 0.0, 0.0}, Point{1.0, 0.0, 0.0, 0.0}, Point{3.0, 0.0, 0.0, 0.0},
                     {0.0, 0.6, 0.0, 0.8}};
    const auto r = tube_thickness(DeformedParams::with_d0(0.1), q);
    ASSERT_TRUE(r.found);
    EXPECT_NEAR(r.thickness, std::sqrt(1.43 / 1.2), 1e-9);
}

TEST(Thickness, RejectsBadAxis) {
    ThicknessQuery q{Point{0.0, 0.0, 0.0, 0.0}, Point{0.0, 1.0, 0.0, 0.0}, Point{3.0, 0.0, 0.0, 0.0},
                     {0.0, 0.0, 1.0, 0.0}};
    EXPECT_THROW(tube_thickness(DeformedParams::with_d0(0.1), q), Error);
}

TEST(CutPlane, Examples) {
    const CutPlaneModel m;
    const double l = 2.0 * std::sqrt(3.0) + std::numbers::pi / 3.0;
    EXPECT_NEAR(l, 4.5113, 1e-4);
    EXPECT_NEAR(cutplane_sigma(m, Point{-2.0, 0.0}, Point{2.0, 0.0}), 0.5 * l * l, 1e-12);
    EXPECT_EQ(cutplane_sigma(m, Point{0.0, 2.0}, Point{3.0, 2.0}), 4.5);
    EXPECT_EQ(cutplane_sigma(m, Point{1.5, 1.5}, Point{1.5, 1.5}), 0.0);
}

TEST(CutPlane, RejectsPointsInDisk) {
    const CutPlaneModel m;
    try {
        cutplane_sigma(m, Point{0.5, 0.0}, Point{2.0, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("point not in L2o"), std::string::npos);
    }
    EXPECT_THROW(cutplane_sigma(m, Point{1.0, 0.0}, Point{2.0, 0.0}), Error);
}

TEST(CutPlane, MatchesTangentOracle) {
    const CutPlaneModel m;
    SeededSampler rng(31);
    int crossing = 0;
    for (int i = 0; i < 5000; ++i) {
        const Point p{rng.uniform(-4, 4), rng.uniform(-4, 4)};
        const Point q{rng.uniform(-4, 4), rng.uniform(-4, 4)};
        if (!m.in_open_region(p) || !m.in_open_region(q)) continue;
        const double s = cutplane_sigma(m, p, q);
        EXPECT_EQ(s, cutplane_sigma(m, q, p));
        if (!m.chord_crosses_disk(p, q)) {
            EXPECT_NEAR(s, euclidean(2)(p, q), 1e-12);
            continue;
        }
        ++crossing;
        const double l = tangent_oracle_length(p[0], p[1], q[0], q[1]);
        EXPECT_NEAR(s, 0.5 * l * l, 1e-10 * std::max(1.0, s));
        EXPECT_GT(s, euclidean(2)(p, q));
    }
    EXPECT_GT(crossing, 500);
}

TEST(CutPlane, ConvexityReport) {
    const auto r = convexity_discrepancy(CutPlaneModel{}, PointChart::cube(2, {-3.0, 3.0}, 13));
    EXPECT_GT(r.crossing, 0u);
    EXPECT_GT(r.missing, 0u);
    EXPECT_EQ(r.rows.size(), r.crossing + r.missing);
    EXPECT_TRUE(r.missing_within_tol);
    EXPECT_LE(r.max_missing, 1e-12);
    EXPECT_GT(r.min_crossing, 0.0);
    for (const auto& row : r.rows) {
        if (!row.crosses) continue;
        const double l = tangent_oracle_length(row.p[0], row.p[1], row.q[0], row.q[1]);
        EXPECT_NEAR(row.sigma_cut, 0.5 * l * l, 1e-10 * std::max(1.0, row.sigma_cut));
    }
}

TEST(CutPlane, WorldFunctionHandle) {
    const auto wf = cutplane();
    EXPECT_EQ(wf.kind(), GeometryKind::cutplane);
    EXPECT_EQ(wf.to_json().at("kind"), "cutplane");
}
