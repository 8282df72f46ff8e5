#pragma once

#include "tgeom/world_function.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tgeom {

// -- deformed spacetime ------------------------------------------------------

/// `error` refuses gap values; `linear_ramp` joins the two branches linearly.
enum class GapPolicy { error, linear_ramp };

std::string to_string(GapPolicy policy);
GapPolicy gap_policy_from_string(const std::string& name);

/// Minkowski world function shifted by a constant lump d0 (length^2) on
/// timelike pairs beyond sigma0. d0 = 0 is the undeformed limit.
struct DeformedParams {
    double d0 = 0.1;
    double sigma0 = 0.1;
    std::size_t base_dimension = 4;
    GapPolicy gap_policy = GapPolicy::error;

    /// sigma0 defaults to d0.
    static DeformedParams with_d0(double d0, std::size_t base_dimension = 4,
                                  GapPolicy policy = GapPolicy::error);
    void validate() const;
};

/// sigma_M + d0 for sigma_M > sigma0, sigma_M for sigma_M < 0, gap per policy.
/// `coincident` short-circuits the diagonal to zero.
long double deform_sigma(const DeformedParams& params, long double sigma_m, bool coincident);

double deformed_sigma(const DeformedParams& params, const Point& p, const Point& q);
WorldFunction deformed(const DeformedParams& params);

struct ThicknessQuery {
    Point p0, p1;                  // timelike axis
    Point base;                    // point on the axis line the transverse ray starts from
    std::vector<double> direction; // transverse direction (chart coordinates)
    AxisRange bounds{0.0, 2.0};    // search interval for the offset d
    std::size_t samples = 2000;    // bracketing grid
};

struct ThicknessResult {
    double thickness = 0.0;  // smallest positive root of F2 along the ray, 0 if none
    bool found = false;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    double f_lo = 0.0, f_hi = 0.0;  // F2 at the bracket ends (opposite signs)
    double residual = 0.0;          // |F2| / scale at the root
};

/// Tube radius of the deformed straight along one transverse ray, found by
/// bracketing F2(P0, P1, base + d * direction) on a uniform grid and polishing
/// the first certified sign change.
ThicknessResult tube_thickness(const DeformedParams& params, const ThicknessQuery& query);

// -- cut plane -----------------------------------------------------------------

/// Euclidean plane with the closed unit disk removed; sigma is induced by
/// shortest paths that stay in the remaining region r^2 > 1.
struct CutPlaneModel {
    static bool in_open_region(const Point& p);
    /// True iff the chord pq passes through the open unit disk.
    static bool chord_crosses_disk(const Point& p, const Point& q);
};

double cutplane_sigma(const CutPlaneModel& model, const Point& p, const Point& q);
WorldFunction cutplane();

struct ConvexityRow {
    Point p, q;
    bool crosses = false;
    double sigma_cut = 0.0, sigma_euclid = 0.0, discrepancy = 0.0;
};

struct ConvexityReport {
    std::vector<ConvexityRow> rows;
    std::size_t crossing = 0, missing = 0;
    double max_crossing = 0.0;
    double min_crossing = 0.0;
    double max_missing = 0.0;
    bool missing_within_tol = true;
};

/// All unordered pairs of chart lattice points in r^2 > 1, classified by
/// whether their chord crosses the disk.
ConvexityReport convexity_discrepancy(const CutPlaneModel& model, const PointChart& chart,
                                      double tol = 1e-12);

}  // namespace tgeom
