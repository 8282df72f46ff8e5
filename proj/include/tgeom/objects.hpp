#pragma once

#include "tgeom/gram.hpp"
#include "tgeom/world_function.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tgeom {

struct Membership {
    bool member = false;
    double residual = 0.0;
};

inline constexpr double default_segment_tol = 1e-9;

/// R belongs to the tube through P0, P1 iff F2(P0, P1, R) vanishes.
Membership tube_membership(const WorldFunction& wf, const Point& p0, const Point& p1,
                           const Point& r, double tol = default_gram_tol);

/// R belongs to the plane of the determining set {P0..Pn} iff F_{n+1}(P^n, R)
/// vanishes; the determining set itself must have F_n != 0.
Membership plane_membership(const WorldFunction& wf, std::span<const Point> determining,
                            const Point& r, double tol = default_gram_tol);

/// Squared height F_{n+1}(P^n, R) / F_n(P^n) of R over the plane; the squared
/// point-to-plane distance in Euclidean geometry. May be negative in
/// indefinite geometries.
double plane_height2(const WorldFunction& wf, std::span<const Point> determining, const Point& r);

/// Triangle equality S(P,R) + S(R,Q) = S(P,Q), residual relative to S(P,Q).
Membership segment_membership(const WorldFunction& wf, const Point& p, const Point& q,
                              const Point& r, double tol = default_segment_tol);

// -- sampled objects ---------------------------------------------------------

/// How lattice points are admitted into a Gram-defined object.
///  relative: |F| <= value * scale (the linear-dependence test)
///  band:     |F_{n+1} / F_n| <= value^2, i.e. height within `value`
enum class MembershipRule { relative, band };

struct Tolerance {
    MembershipRule rule = MembershipRule::relative;
    double value = default_gram_tol;

    static Tolerance relative(double v) { return {MembershipRule::relative, v}; }
    static Tolerance band(double v) { return {MembershipRule::band, v}; }
};

struct TubeShape {
    Point p0, p1;
};
struct PlaneShape {
    std::vector<Point> points;
};
struct SegmentShape {
    Point p, q;
};
struct SectionShape {
    Point p0, p1, anchor;
};
struct BrokenLineShape {
    std::vector<Point> vertices;
};

using Shape = std::variant<TubeShape, PlaneShape, SegmentShape, SectionShape, BrokenLineShape>;

struct ObjectSpec {
    Shape shape;
    WorldFunction wf;
    Tolerance tol;
};

std::string shape_name(const Shape& shape);

struct ObjectSample {
    ObjectSpec spec;
    PointChart chart;
    std::vector<Point> members;
    std::vector<double> residuals;
    std::size_t undefined = 0;  // lattice points where the defining function has no value
};

/// Validates the spec's preconditions and sweeps the chart lattice in
/// row-major order; `workers` only changes speed, never the result.
ObjectSample sample_object(const ObjectSpec& spec, const PointChart& chart, unsigned workers = 1);

/// Points sharing both world-function values sigma(P0, .), sigma(P1, .) with
/// `p`, which must lie on the tube through the axis.
ObjectSample section(const WorldFunction& wf, const Point& p0, const Point& p1, const Point& p,
                     const PointChart& chart, double tol = default_segment_tol,
                     double tube_tol = default_gram_tol, unsigned workers = 1);

/// Union of segment samples over consecutive vertices.
ObjectSample broken_line(const WorldFunction& wf, std::span<const Point> vertices,
                         const PointChart& chart, double tol = default_segment_tol,
                         unsigned workers = 1);

struct DefinitenessReport {
    std::size_t tube_members = 0;
    std::size_t trials = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    double worst_residual = 0.0;  // residual w.r.t. the original tube of the worst stray point
    bool ok() const noexcept { return failed == 0; }
};

/// For sampled pairs Q0, Q1 on the tube T(P0,P1) with sigma(Q0,Q1) != 0,
/// checks that every chart member of T(Q0,Q1) is a member of T(P0,P1).
DefinitenessReport definiteness_check(const WorldFunction& wf, const Point& p0, const Point& p1,
                                      const PointChart& chart, Tolerance tol, std::size_t trials,
                                      std::uint64_t seed, unsigned workers = 1);

// -- dimension ----------------------------------------------------------------

inline constexpr double dimension_threshold = 0.05;

struct DimensionEstimate {
    double value = 0.0;
    std::string method = "local principal-spread thresholding";
    double window = 0.0;
    std::size_t support = 0;
    std::vector<double> spreads;  // principal standard deviations, descending
};

/// Number of principal spreads of the members within `window` of `center`
/// that exceed 5% of the dominant one. Needs at least 4n members in the window.
DimensionEstimate estimate_dimension(const ObjectSample& sample, const Point& center, double window);

// -- parallelism -----------------------------------------------------------------

struct BoundVector {
    Point tail, head;
};

/// (P0P1 . Q0Q1) = sigma(P0,Q1) + sigma(P1,Q0) - sigma(P0,Q0) - sigma(P1,Q1).
double two_origin_scalar_product(const WorldFunction& wf, const Point& p0, const Point& p1,
                                 const Point& q0, const Point& q1);

struct ParallelTest {
    bool parallel = false;
    double cosine = 0.0;
};

inline constexpr double default_parallel_tol = 1e-9;

/// Parallel (or antiparallel) iff ||cos| - 1| <= tol. Both vectors need
/// 2 sigma > 0.
ParallelTest parallel(const WorldFunction& wf, const BoundVector& a, const BoundVector& b,
                      double tol = default_parallel_tol);

struct WitnessSearchConfig {
    std::vector<AxisRange> tail_box;          // where vector tails are drawn
    std::vector<AxisRange> displacement_box;  // coordinate displacement of the first vector
    std::uint64_t seed = 0;
    std::uint64_t budget = 100000;
    double tol = default_parallel_tol;
    std::size_t scan_steps = 16;  // bracketing grid for the parallel root search
};

struct ParallelWitness {
    BoundVector a, b, c;
    double cos_ab = 0.0, cos_bc = 0.0, cos_ac = 0.0;
    std::uint64_t trial = 0;
};

struct WitnessSearchResult {
    std::optional<ParallelWitness> witness;
    std::uint64_t trials = 0;
    std::uint64_t chains = 0;  // trials that produced a chain a || b || c
};

/// Seeded search for a || b, b || c with a not parallel to c. Each trial draws
/// a, then looks for b along a one-parameter family through a translated copy
/// of a (accepting the copy itself when it already tests parallel) and does
/// the same for c from b.
WitnessSearchResult find_intransitive_parallel(const WorldFunction& wf,
                                               const WitnessSearchConfig& config);

}  // namespace tgeom
