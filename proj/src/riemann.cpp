#include "tgeom/riemann.hpp"

#include "tgeom/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace tgeom {

VecL to_vec(const Point& p) {
    VecL v(p.dimension());
    for (std::size_t i = 0; i < p.dimension(); ++i) v[i] = p[i];
    return v;
}

Point to_point(const VecL& v) {
    std::vector<double> c(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) c[i] = static_cast<double>(v[i]);
    return Point(std::move(c));
}

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::flat_euclidean: return "flat";
        case MetricKind::flat_minkowski: return "minkowski";
        case MetricKind::unit_sphere: return "sphere";
        case MetricKind::conformal_flat: return "conformal";
    }
    return "unknown";
}

namespace {

PointChart or_default(std::optional<PointChart> domain, PointChart fallback, std::size_t n) {
    if (!domain) return fallback;
    if (domain->dimension() != n) throw Error(ErrorCode::chart_mismatch, "chart mismatch: metric domain");
    return *domain;
}

}  // namespace

MetricField MetricField::flat_euclidean(std::size_t n, std::optional<PointChart> domain) {
    if (n == 0 || n > max_pipeline_dimension) {
        throw Error(ErrorCode::invalid_argument, "metric dimension must be in 1..8");
    }
    return MetricField(MetricKind::flat_euclidean, n, or_default(domain, PointChart::cube(n, {-100, 100}, 2), n));
}

MetricField MetricField::flat_minkowski(std::size_t n, std::optional<PointChart> domain) {
    if (n < 2 || n > max_pipeline_dimension) {
        throw Error(ErrorCode::invalid_argument, "minkowski metric dimension must be in 2..8");
    }
    return MetricField(MetricKind::flat_minkowski, n, or_default(domain, PointChart::cube(n, {-100, 100}, 2), n));
}

MetricField MetricField::unit_sphere(std::optional<PointChart> domain) {
    const double pi = std::numbers::pi;
    return MetricField(MetricKind::unit_sphere, 2,
                       or_default(domain, PointChart({{0.0, pi}, {-pi, pi}}, {2, 2}), 2));
}

MetricField MetricField::conformal_flat(std::vector<PolyTerm> phi, std::optional<PointChart> domain) {
    for (const auto& t : phi) {
        if (t.px < 0 || t.py < 0 || !std::isfinite(t.coeff)) {
            throw Error(ErrorCode::invalid_argument, "conformal exponent must be a polynomial");
        }
    }
    MetricField m(MetricKind::conformal_flat, 2, or_default(domain, PointChart::cube(2, {-3, 3}, 2), 2));
    m.phi_ = std::move(phi);
    return m;
}

MetricField MetricField::from_name(const std::string& name) {
    if (name == "flat") return flat_euclidean(2);
    if (name == "minkowski") return flat_minkowski(2);
    if (name == "sphere") return unit_sphere();
    if (name == "conformal") return conformal_flat({{0.2, 1, 0}, {-0.1, 0, 2}, {0.05, 1, 1}});
    throw Error(ErrorCode::invalid_argument, "unknown metric '" + name + "'");
}

std::string MetricField::signature() const {
    if (kind_ != MetricKind::flat_minkowski) return std::string(n_, '+');
    return "+" + std::string(n_ - 1, '-');
}

long double MetricField::phi(const VecL& x) const {
    long double s = 0.0L;
    for (const auto& t : phi_) s += t.coeff * std::pow(x[0], t.px) * std::pow(x[1], t.py);
    return s;
}

VecL MetricField::grad_phi(const VecL& x) const {
    VecL g = VecL::Zero(2);
    for (const auto& t : phi_) {
        if (t.px > 0) g[0] += t.coeff * t.px * std::pow(x[0], t.px - 1) * std::pow(x[1], t.py);
        if (t.py > 0) g[1] += t.coeff * t.py * std::pow(x[0], t.px) * std::pow(x[1], t.py - 1);
    }
    return g;
}

MatL MetricField::g(const VecL& x) const {
    MatL g = MatL::Identity(n_, n_);
    switch (kind_) {
        case MetricKind::flat_euclidean: break;
        case MetricKind::flat_minkowski:
            for (std::size_t i = 1; i < n_; ++i) g(i, i) = -1.0L;
            break;
        case MetricKind::unit_sphere: {
            const long double s = std::sin(x[0]);
            g(1, 1) = s * s;
            break;
        }
        case MetricKind::conformal_flat: g *= std::exp(2.0L * phi(x)); break;
    }
    return g;
}

Eigen::MatrixXd MetricField::g(const Point& x) const {
    require_dimension(n_, {&x});
    return g(to_vec(x)).cast<double>();
}

VecL MetricField::acceleration(const VecL& x, const VecL& v) const {
    switch (kind_) {
        case MetricKind::flat_euclidean:
        case MetricKind::flat_minkowski: return VecL::Zero(n_);
        case MetricKind::unit_sphere: {
            const long double s = std::sin(x[0]), c = std::cos(x[0]);
            VecL a(2);
            a[0] = s * c * v[1] * v[1];
            // At the pole the chart degenerates; the longitude term drops out.
            a[1] = std::abs(s) < 1e-300L ? 0.0L : -2.0L * (c / s) * v[0] * v[1];
            return a;
        }
        case MetricKind::conformal_flat: {
            const VecL dphi = grad_phi(x);
            return -(2.0L * dphi.dot(v) * v - v.squaredNorm() * dphi);
        }
    }
    return VecL::Zero(n_);
}

bool MetricField::in_domain(const VecL& x) const {
    if (static_cast<std::size_t>(x.size()) != n_) return false;
    const auto& b = domain_.bounds();
    for (std::size_t i = 0; i < n_; ++i) {
        if (x[i] < b[i].lo || x[i] > b[i].hi) return false;
    }
    return true;
}

nlohmann::json MetricField::to_json() const {
    nlohmann::json j{{"metric", to_string(kind_)}, {"dimension", n_}, {"signature", signature()}};
    if (kind_ == MetricKind::conformal_flat) {
        auto terms = nlohmann::json::array();
        for (const auto& t : phi_) terms.push_back({{"coeff", t.coeff}, {"px", t.px}, {"py", t.py}});
        j["phi"] = terms;
    }
    auto bounds = nlohmann::json::array();
    for (const auto& r : domain_.bounds()) bounds.push_back({r.lo, r.hi});
    j["domain"] = bounds;
    return j;
}

namespace {

struct Endpoint {
    VecL y;  // displacement from xp
    long double length = 0.0L;
};

// Compensated increment: keeps the endpoint accurate to a few ulps after
// hundreds of steps, which the nested differences downstream depend on.
template <class T>
void kahan_add(T& sum, T& carry, const T& inc) {
    const T y = inc - carry;
    const T t = sum + y;
    carry = (t - sum) - y;
    sum = t;
}

// RK4 over the unit affine interval on (y, v, s), y = x - xp, s' = sqrt|g(v, v)|.
Endpoint integrate(const MetricField& m, const VecL& xp, const VecL& v0, std::size_t steps,
                   std::vector<Point>* path, bool with_length = false) {
    const auto n = xp.size();
    const long double dt = 1.0L / static_cast<long double>(steps);
    VecL y = VecL::Zero(n), v = v0, cy = VecL::Zero(n), cv = VecL::Zero(n);
    long double s = 0.0L, cs = 0.0L;
    // Newton iterations only need the endpoint; the length is a final pass.
    auto speed = [&](const VecL& yy, const VecL& vv) {
        return with_length ? std::sqrt(std::abs(vv.dot(m.g(VecL(xp + yy)) * vv))) : 0.0L;
    };
    auto accel = [&](const VecL& yy, const VecL& vv) { return m.acceleration(VecL(xp + yy), vv); };
    if (path) {
        path->clear();
        path->reserve(steps + 1);
        path->push_back(to_point(xp));
    }
    for (std::size_t k = 0; k < steps; ++k) {
        const VecL k1y = v, k1v = accel(y, v);
        const long double k1s = speed(y, v);
        const VecL y2 = y + 0.5L * dt * k1y, v2 = v + 0.5L * dt * k1v;
        const VecL k2y = v2, k2v = accel(y2, v2);
        const long double k2s = speed(y2, v2);
        const VecL y3 = y + 0.5L * dt * k2y, v3 = v + 0.5L * dt * k2v;
        const VecL k3y = v3, k3v = accel(y3, v3);
        const long double k3s = speed(y3, v3);
        const VecL y4 = y + dt * k3y, v4 = v + dt * k3v;
        const VecL k4y = v4, k4v = accel(y4, v4);
        const long double k4s = speed(y4, v4);
        kahan_add(y, cy, VecL(dt / 6.0L * (k1y + 2.0L * k2y + 2.0L * k3y + k4y)));
        kahan_add(v, cv, VecL(dt / 6.0L * (k1v + 2.0L * k2v + 2.0L * k3v + k4v)));
        kahan_add(s, cs, dt / 6.0L * (k1s + 2.0L * k2s + 2.0L * k3s + k4s));
        if (path) path->push_back(to_point(VecL(xp + y)));
    }
    return {y, s};
}

}  // namespace

ShotResult shoot(const MetricField& m, const VecL& x, const VecL& xp, const GeodesicOptions& options,
                 const VecL* guess, std::vector<Point>* path) {
    const auto n = x.size();
    ShotResult out;
    if (x == xp) {
        out.velocity = VecL::Zero(n);
        out.converged = true;
        if (path) *path = {to_point(xp)};
        return out;
    }
    const VecL target = x - xp;
    VecL v = guess ? *guess : target;
    Endpoint end = integrate(m, xp, v, options.steps, nullptr);
    long double miss = (end.y - target).norm();
    // Iterate down to the rounding level of the displacement itself.
    const long double floor = 8.0L * std::numeric_limits<long double>::epsilon() * target.norm();

    for (std::size_t it = 0; it < options.max_iterations && miss > floor; ++it) {
        MatL J(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            VecL vj = v;
            const long double delta = 1e-9L * std::max(1.0L, std::abs(v[j]));
            vj[j] += delta;
            J.col(j) = (integrate(m, xp, vj, options.steps, nullptr).y - end.y) / delta;
        }
        Eigen::FullPivLU<MatL> lu(J);
        if (!lu.isInvertible()) break;
        const VecL step = lu.solve(VecL(target - end.y));
        bool improved = false;
        long double alpha = 1.0L;
        for (int k = 0; k < 24; ++k, alpha *= 0.5L) {
            const VecL vt = v + alpha * step;
            Endpoint et = integrate(m, xp, vt, options.steps, nullptr);
            const long double mt = (et.y - target).norm();
            if (std::isfinite(mt) && mt < miss) {
                v = vt;
                end = et;
                miss = mt;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }

    end = integrate(m, xp, v, options.steps, path, true);
    out.velocity = v;
    out.miss = miss;
    out.length = end.length;
    out.converged = miss <= options.tol;
    // Over the unit affine interval g(v, v) is conserved and equals +-S^2.
    out.sigma = 0.5L * v.dot(m.g(xp) * v);
    return out;
}

GeodesicSolution solve_geodesic(const MetricField& m, const Point& x, const Point& xp,
                                const GeodesicOptions& options) {
    require_dimension(m.dimension(), {&x, &xp});
    const VecL vx = to_vec(x), vxp = to_vec(xp);
    if (!m.in_domain(vx) || !m.in_domain(vxp)) {
        throw Error(ErrorCode::invalid_argument, "geodesic endpoints must lie inside the metric domain");
    }
    GeodesicSolution sol;
    sol.x = x;
    sol.xp = xp;
    const ShotResult shot = shoot(m, vx, vxp, options, nullptr, options.store_path ? &sol.path : nullptr);
    sol.length = static_cast<double>(shot.length);
    sol.sigma = static_cast<double>(shot.sigma);
    sol.converged = shot.converged;
    sol.residual = static_cast<double>(shot.miss);
    for (Eigen::Index i = 0; i < shot.velocity.size(); ++i) {
        sol.initial_velocity.push_back(static_cast<double>(shot.velocity[i]));
    }

    if (options.probe_alternate && shot.converged && x != xp) {
        // Shoot the other way round. On the sphere chart the long arc ends at
        // the same point with its longitude shifted by a full turn.
        VecL target = vx;
        VecL guess = -shot.velocity;
        if (m.kind() == MetricKind::unit_sphere && vx[1] != vxp[1]) {
            target[1] -= (vx[1] > vxp[1] ? 2.0L : -2.0L) * std::numbers::pi_v<long double>;
            guess = target - vxp;
        }
        GeodesicOptions probe = options;
        probe.store_path = false;
        const ShotResult alt = shoot(m, target, vxp, probe, &guess, nullptr);
        if (alt.converged && std::abs(alt.length - shot.length) > 1e-6L) {
            sol.alternate_length = static_cast<double>(alt.length);
        }
    }
    return sol;
}

double sigma_from_metric(const MetricField& m, const Point& x, const Point& xp, const GeodesicOptions& options) {
    GeodesicOptions o = options;
    o.store_path = false;
    const auto sol = solve_geodesic(m, x, xp, o);
    if (!sol.converged) {
        throw Error(ErrorCode::not_converged,
                    fmt::format("geodesic solve did not converge (miss {:.3e}) for {} -> {}", sol.residual,
                                xp.to_string(), x.to_string()));
    }
    return sol.sigma;
}

namespace {

class RiemannInducedModel final : public WorldFunctionModel {
public:
    RiemannInducedModel(MetricField m, GeodesicOptions o) : m_(std::move(m)), o_(o) { o_.store_path = false; }
    GeometryKind kind() const noexcept override { return GeometryKind::riemann_induced; }
    std::size_t dimension() const noexcept override { return m_.dimension(); }
    double evaluate(const Point& p, const Point& q) const override {
        if (p == q) return 0.0;
        return q < p ? sigma_from_metric(m_, q, p, o_) : sigma_from_metric(m_, p, q, o_);
    }
    nlohmann::json to_json() const override {
        return {{"kind", "riemann"}, {"dimension", m_.dimension()}, {"params", m_.to_json()}};
    }

private:
    MetricField m_;
    GeodesicOptions o_;
};

}  // namespace

WorldFunction riemann_induced(const MetricField& m, const GeodesicOptions& options) {
    return WorldFunction(std::make_shared<RiemannInducedModel>(m, options));
}

}  // namespace tgeom
