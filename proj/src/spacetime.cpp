#include "tgeom/spacetime.hpp"

#include "tgeom/error.hpp"
#include "tgeom/gram.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

namespace tgeom {

std::string to_string(GapPolicy policy) {
    return policy == GapPolicy::error ? "error" : "linear_ramp";
}

GapPolicy gap_policy_from_string(const std::string& name) {
    if (name == "error") return GapPolicy::error;
    if (name == "linear_ramp") return GapPolicy::linear_ramp;
    throw Error(ErrorCode::invalid_argument, "unknown gap policy '" + name + "'");
}

DeformedParams DeformedParams::with_d0(double d0, std::size_t base_dimension, GapPolicy policy) {
    DeformedParams p{d0, d0, base_dimension, policy};
    p.validate();
    return p;
}

void DeformedParams::validate() const {
    if (!(d0 >= 0.0) || !std::isfinite(d0)) throw Error(ErrorCode::invalid_argument, "d0 must be >= 0");
    if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) {
        throw Error(ErrorCode::invalid_argument, "sigma0 must be >= 0");
    }
    if (base_dimension < 2) throw Error(ErrorCode::invalid_argument, "base dimension must be >= 2");
}

long double deform_sigma(const DeformedParams& params, long double sigma_m, bool coincident) {
    if (coincident) return 0.0L;
    // Without a lump both branches are sigma_M and there is no gap to fill.
    if (sigma_m < 0.0L || params.d0 == 0.0) return sigma_m;
    const long double s0 = params.sigma0;
    if (sigma_m > s0) return sigma_m + static_cast<long double>(params.d0);
    if (params.gap_policy == GapPolicy::error) {
        throw Error(ErrorCode::undefined, "world function undefined in gap (value left unspecified by the model)");
    }
    if (s0 == 0.0L) return sigma_m;
    return sigma_m * (1.0L + static_cast<long double>(params.d0) / s0);
}

namespace {

double minkowski_sigma(const Point& p, const Point& q) {
    const double dt = p[0] - q[0];
    double space = 0.0;
    for (std::size_t i = 1; i < p.dimension(); ++i) {
        const double d = p[i] - q[i];
        space += d * d;
    }
    return 0.5 * (dt * dt - space);
}

class DeformedModel final : public WorldFunctionModel {
public:
    explicit DeformedModel(DeformedParams params) : params_(params) { params_.validate(); }
    GeometryKind kind() const noexcept override { return GeometryKind::deformed; }
    std::size_t dimension() const noexcept override { return params_.base_dimension; }
    double evaluate(const Point& p, const Point& q) const override {
        return deformed_sigma(params_, p, q);
    }
    nlohmann::json to_json() const override {
        return {{"kind", "deformed"},
                {"dimension", params_.base_dimension},
                {"params",
                 {{"d0", params_.d0}, {"sigma0", params_.sigma0}, {"gap_policy", to_string(params_.gap_policy)}}}};
    }

private:
    DeformedParams params_;
};

class CutPlaneWorldFunction final : public WorldFunctionModel {
public:
    GeometryKind kind() const noexcept override { return GeometryKind::cutplane; }
    std::size_t dimension() const noexcept override { return 2; }
    double evaluate(const Point& p, const Point& q) const override { return cutplane_sigma({}, p, q); }
    nlohmann::json to_json() const override {
        return {{"kind", "cutplane"}, {"dimension", 2}, {"params", nlohmann::json::object()}};
    }
};

}  // namespace

double deformed_sigma(const DeformedParams& params, const Point& p, const Point& q) {
    require_dimension(params.base_dimension, {&p, &q});
    return static_cast<double>(deform_sigma(params, minkowski_sigma(p, q), p == q));
}

WorldFunction deformed(const DeformedParams& params) {
    return WorldFunction(std::make_shared<DeformedModel>(params));
}

ThicknessResult tube_thickness(const DeformedParams& params, const ThicknessQuery& query) {
    params.validate();
    const std::size_t n = params.base_dimension;
    require_dimension(n, {&query.p0, &query.p1, &query.base});
    if (query.direction.size() != n) {
        throw Error(ErrorCode::chart_mismatch, "chart mismatch: direction has the wrong dimension");
    }
    if (!(query.bounds.lo >= 0.0) || !(query.bounds.hi > query.bounds.lo) || query.samples < 2) {
        throw Error(ErrorCode::invalid_argument, "thickness search needs 0 <= lo < hi and >= 2 samples");
    }
    if (!(minkowski_sigma(query.p0, query.p1) > params.sigma0)) {
        throw Error(ErrorCode::degenerate, "thickness axis must be timelike with sigma_M > sigma0");
    }

    const auto wf = deformed(params);
    auto ray = [&](double d) {
        std::vector<double> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = query.base[i] + d * query.direction[i];
        return Point(std::move(c));
    };
    auto gram_at = [&](double d) {
        const std::vector<Point> tips{query.p1, ray(d)};
        return gram(wf, query.p0, tips);
    };
    auto f = [&](double d) { return gram_at(d).det; };

    ThicknessResult out;
    const double lo = query.bounds.lo, hi = query.bounds.hi;
    auto grid = [&](std::size_t j) {
        return j == query.samples ? hi
                                  : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(query.samples);
    };
    // d = 0 is the axis itself and never counts as a positive root.
    std::size_t j = lo == 0.0 ? 1 : 0;
    double d_prev = grid(j);
    double f_prev = f(d_prev);
    for (++j; j <= query.samples; ++j) {
        const double d = grid(j);
        const double fd = f(d);
        if (f_prev == 0.0 && d_prev > 0.0) {
            out = {d_prev, true, d_prev, d_prev, f_prev, f_prev, 0.0};
            return out;
        }
        if ((f_prev < 0.0) != (fd < 0.0) && fd != 0.0) {
            std::uintmax_t iterations = 200;
            const auto [a, b] = boost::math::tools::toms748_solve(
                f, d_prev, d, f_prev, fd, boost::math::tools::eps_tolerance<double>(52), iterations);
            const double root = std::abs(f(a)) <= std::abs(f(b)) ? a : b;
            const auto g = gram_at(root);
            const double residual = std::abs(g.det) / g.scale;
            // A sign change across a branch jump of sigma is not a root.
            if (residual <= 1e-8) {
                out = {root, true, d_prev, d, f_prev, fd, residual};
                return out;
            }
        }
        d_prev = d;
        f_prev = fd;
    }
    if (f_prev == 0.0 && d_prev > 0.0) out = {d_prev, true, d_prev, d_prev, 0.0, 0.0, 0.0};
    return out;
}

bool CutPlaneModel::in_open_region(const Point& p) {
    return p.dimension() == 2 && p[0] * p[0] + p[1] * p[1] > 1.0;
}

bool CutPlaneModel::chord_crosses_disk(const Point& p, const Point& q) {
    const double dx = q[0] - p[0], dy = q[1] - p[1];
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return p[0] * p[0] + p[1] * p[1] < 1.0;
    // Foot of the perpendicular from the origin, as a fraction of len2.
    const double foot = -(p[0] * dx + p[1] * dy);
    if (foot <= 0.0 || foot >= len2) {
        return std::min(p[0] * p[0] + p[1] * p[1], q[0] * q[0] + q[1] * q[1]) < 1.0;
    }
    // distance^2 = cross^2 / len2, compared without dividing so that tangent
    // chords through lattice points are not misclassified by rounding
    const double cross = p[0] * dy - p[1] * dx;
    return cross * cross < len2;
}

double cutplane_sigma(const CutPlaneModel& model, const Point& p_in, const Point& q_in) {
    require_dimension(2, {&p_in, &q_in});
    for (const Point* x : {&p_in, &q_in}) {
        if (!model.in_open_region(*x)) {
            throw Error(ErrorCode::invalid_argument, "point not in L2o: " + x->to_string());
        }
    }
    // Canonical order keeps the value exactly symmetric.
    const bool swap = q_in < p_in;
    const Point& p = swap ? q_in : p_in;
    const Point& q = swap ? p_in : q_in;
    if (!model.chord_crosses_disk(p, q)) {
        const double dx = p[0] - q[0], dy = p[1] - q[1];
        return 0.5 * (dx * dx + dy * dy);
    }
    const double rp2 = p[0] * p[0] + p[1] * p[1];
    const double rq2 = q[0] * q[0] + q[1] * q[1];
    const double angle = std::atan2(std::abs(p[0] * q[1] - p[1] * q[0]), p[0] * q[0] + p[1] * q[1]);
    const double tangent_angles = std::acos(1.0 / std::sqrt(rp2)) + std::acos(1.0 / std::sqrt(rq2));
    const double arc = std::max(0.0, angle - tangent_angles);
    const double length = (std::sqrt(rp2 - 1.0) + std::sqrt(rq2 - 1.0)) + arc;
    return 0.5 * length * length;
}

WorldFunction cutplane() { return WorldFunction(std::make_shared<CutPlaneWorldFunction>()); }

ConvexityReport convexity_discrepancy(const CutPlaneModel& model, const PointChart& chart, double tol) {
    if (chart.dimension() != 2) throw Error(ErrorCode::chart_mismatch, "chart mismatch: cut plane is 2-D");
    std::vector<Point> pts;
    for (auto& p : sample_chart(chart)) {
        if (model.in_open_region(p)) pts.push_back(std::move(p));
    }
    const auto euclid = euclidean(2);
    ConvexityReport report;
    bool first_crossing = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            ConvexityRow row{pts[i], pts[j], model.chord_crosses_disk(pts[i], pts[j]), 0.0, 0.0, 0.0};
            row.sigma_cut = cutplane_sigma(model, pts[i], pts[j]);
            row.sigma_euclid = euclid(pts[i], pts[j]);
            row.discrepancy = row.sigma_cut - row.sigma_euclid;
            if (row.crosses) {
                ++report.crossing;
                report.max_crossing = std::max(report.max_crossing, row.discrepancy);
                report.min_crossing = first_crossing ? row.discrepancy : std::min(report.min_crossing, row.discrepancy);
                first_crossing = false;
            } else {
                ++report.missing;
                report.max_missing = std::max(report.max_missing, std::abs(row.discrepancy));
            }
            report.rows.push_back(std::move(row));
        }
    }
    report.missing_within_tol = report.max_missing <= tol;
    return report;
}

}  // namespace tgeom
