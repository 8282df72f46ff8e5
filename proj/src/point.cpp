#include "tgeom/point.hpp"

#include "tgeom/error.hpp"

#include <cmath>
#include <fmt/format.h>

namespace tgeom {

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double c : coords_) {
        if (!std::isfinite(c)) {
            throw Error(ErrorCode::invalid_argument, "point coordinate is not finite");
        }
    }
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

std::string Point::to_string() const {
    return fmt::format("({:.17g})", fmt::join(coords_, ", "));
}

void require_dimension(std::size_t n, std::initializer_list<const Point*> points) {
    for (const Point* p : points) {
        if (p->dimension() != n) {
            throw Error(ErrorCode::chart_mismatch,
                        fmt::format("chart mismatch: point of dimension {} where {} expected",
                                    p->dimension(), n));
        }
    }
}

PointChart::PointChart(std::vector<AxisRange> bounds, std::vector<std::size_t> resolution)
    : bounds_(std::move(bounds)), resolution_(std::move(resolution)) {
    if (bounds_.empty()) {
        throw Error(ErrorCode::invalid_argument, "chart dimension must be at least 1");
    }
    if (resolution_.size() != bounds_.size()) {
        throw Error(ErrorCode::invalid_argument, "chart resolution/bounds length mismatch");
    }
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
        const auto& b = bounds_[i];
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
            throw Error(ErrorCode::invalid_argument,
                        fmt::format("chart axis {} has an empty interval [{}, {}]", i, b.lo, b.hi));
        }
        if (resolution_[i] < 2) {
            throw Error(ErrorCode::invalid_argument,
                        fmt::format("chart axis {} resolution must be >= 2", i));
        }
    }
}

PointChart PointChart::cube(std::size_t dimension, AxisRange range, std::size_t resolution) {
    return PointChart(std::vector<AxisRange>(dimension, range),
                      std::vector<std::size_t>(dimension, resolution));
}

std::size_t PointChart::lattice_size() const noexcept {
    std::size_t n = 1;
    for (auto r : resolution_) n *= r;
    return n;
}

double PointChart::step(std::size_t axis) const {
    const auto& b = bounds_.at(axis);
    return (b.hi - b.lo) / static_cast<double>(resolution_[axis] - 1);
}

Point PointChart::lattice_point(std::size_t index) const {
    std::vector<double> coords(dimension());
    for (std::size_t k = dimension(); k-- > 0;) {
        const std::size_t r = resolution_[k];
        const std::size_t j = index % r;
        index /= r;
        const auto& b = bounds_[k];
        // Endpoints are pinned so the lattice covers the bounds exactly.
        coords[k] = (j + 1 == r) ? b.hi
                                 : b.lo + (b.hi - b.lo) * static_cast<double>(j) /
                                              static_cast<double>(r - 1);
    }
    return Point(std::move(coords));
}

bool PointChart::contains(const Point& p) const {
    if (p.dimension() != dimension()) return false;
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (p[i] < bounds_[i].lo || p[i] > bounds_[i].hi) return false;
    }
    return true;
}

std::vector<Point> sample_chart(const PointChart& chart) {
    std::vector<Point> points;
    const std::size_t n = chart.lattice_size();
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(chart.lattice_point(i));
    return points;
}

}  // namespace tgeom
