#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tgeom {

/// A point given by its chart coordinates. The time axis, when present, is
/// coordinate 0 and carries length units (x0 = c t).
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords);

    std::size_t dimension() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }

    std::string to_string() const;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point& a, const Point& b) { return a.coords_ <=> b.coords_; }

private:
    std::vector<double> coords_;
};

/// Throws ErrorCode::chart_mismatch unless every point has dimension `n`.
void require_dimension(std::size_t n, std::initializer_list<const Point*> points);

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
};

/// Rectangular coordinate box with a per-axis lattice resolution.
class PointChart {
public:
    PointChart(std::vector<AxisRange> bounds, std::vector<std::size_t> resolution);
    /// Same range and resolution on every axis.
    static PointChart cube(std::size_t dimension, AxisRange range, std::size_t resolution);

    std::size_t dimension() const noexcept { return bounds_.size(); }
    const std::vector<AxisRange>& bounds() const noexcept { return bounds_; }
    const std::vector<std::size_t>& resolution() const noexcept { return resolution_; }
    std::size_t lattice_size() const noexcept;
    double step(std::size_t axis) const;

    /// Lattice point with row-major index `index` (last axis fastest).
    Point lattice_point(std::size_t index) const;
    bool contains(const Point& p) const;

private:
    std::vector<AxisRange> bounds_;
    std::vector<std::size_t> resolution_;
};

/// Row-major lattice covering the chart bounds inclusively.
std::vector<Point> sample_chart(const PointChart& chart);

}  // namespace tgeom
