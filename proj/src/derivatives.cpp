#include "tgeom/error.hpp"
#include "tgeom/parallel.hpp"
#include "tgeom/riemann.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace tgeom {

SigmaSource metric_source(const MetricField& m, const GeodesicOptions& options) {
    GeodesicOptions o = options;
    o.store_path = false;
    auto fn = [m, o](const VecL& x, const VecL& xp, VecL* warm) -> long double {
        const bool seeded = warm && warm->size() == x.size();
        const ShotResult shot = shoot(m, x, xp, o, seeded ? warm : nullptr, nullptr);
        if (!shot.converged) {
            throw Error(ErrorCode::not_converged,
                        fmt::format("geodesic solve did not converge (miss {:.3e}) for {} -> {}",
                                    static_cast<double>(shot.miss), to_point(xp).to_string(),
                                    to_point(x).to_string()));
        }
        if (warm && !seeded) *warm = shot.velocity;
        return shot.sigma;
    };
    return SigmaSource{m.dimension(), fn, [m](const VecL& x) { return m.in_domain(x); }, m,
                       "metric:" + to_string(m.kind())};
}

SigmaSource deformed_source(const DeformedParams& params) {
    params.validate();
    if (params.base_dimension > static_cast<std::size_t>(max_pipeline_dimension)) {
        throw Error(ErrorCode::invalid_argument, "derivative pipeline supports dimension <= 8");
    }
    auto fn = [params](const VecL& x, const VecL& xp, VecL*) -> long double {
        const VecL d = x - xp;
        const long double s = d.head(1).squaredNorm() - d.tail(d.size() - 1).squaredNorm();
        return deform_sigma(params, 0.5L * s, x == xp);
    };
    return SigmaSource{params.base_dimension, fn, [](const VecL&) { return true; },
                       MetricField::flat_minkowski(params.base_dimension), "deformed"};
}

SigmaSource sphere_analytic_source() {
    auto fn = [](const VecL& x, const VecL& xp, VecL*) -> long double {
        auto unit = [](const VecL& p) {
            return std::array<long double, 3>{std::sin(p[0]) * std::cos(p[1]), std::sin(p[0]) * std::sin(p[1]),
                                              std::cos(p[0])};
        };
        const auto u = unit(x), w = unit(xp);
        const long double cx = u[1] * w[2] - u[2] * w[1];
        const long double cy = u[2] * w[0] - u[0] * w[2];
        const long double cz = u[0] * w[1] - u[1] * w[0];
        const long double d = std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), u[0] * w[0] + u[1] * w[1] + u[2] * w[2]);
        return 0.5L * d * d;
    };
    const auto m = MetricField::unit_sphere();
    return SigmaSource{2, fn, [m](const VecL& x) { return m.in_domain(x); }, m, "sphere:analytic"};
}

namespace {

using Offset = std::vector<int>;

Offset shifted(Offset k, std::size_t axis, int by) {
    k[axis] += by;
    return k;
}

struct Block {
    long double sigma = 0.0L;
    VecL si, skp;
    MatL M, S, H, G;
    std::vector<MatL> T, Gamma;  // T[j](k,l), Gamma[i](k,l)
};

// Nested central differences of sigma on an integer offset lattice around
// (x, x'). Points are formed as x + h*k so every stencil node is evaluated
// once and shared by all derivative blocks.
class Stencil {
public:
    // `reach` is the largest offset (in steps) taken from x on any axis; x'
    // is only ever shifted by one step.
    Stencil(const SigmaSource& src, VecL x, VecL xp, long double h, int reach)
        : src_(src), x_(std::move(x)), xp_(std::move(xp)), h_(h), n_(x_.size()) {
        require_box(x_, reach);
        require_box(xp_, 1);
        const Offset zero(n_, 0);
        eval(zero, zero, true);
    }

    long double f(const Offset& kx, const Offset& kp) { return eval(kx, kp, false); }

    long double d1x(std::size_t i, const Offset& kx, const Offset& kp) {
        return (f(shifted(kx, i, 1), kp) - f(shifted(kx, i, -1), kp)) / (2 * h_);
    }
    long double d1p(std::size_t k, const Offset& kx, const Offset& kp) {
        return (f(kx, shifted(kp, k, 1)) - f(kx, shifted(kp, k, -1))) / (2 * h_);
    }
    long double mixed(std::size_t l, std::size_t k, const Offset& kx, const Offset& kp) {
        return (d1p(k, shifted(kx, l, 1), kp) - d1p(k, shifted(kx, l, -1), kp)) / (2 * h_);
    }
    long double third(std::size_t k, std::size_t l, std::size_t j, const Offset& kx, const Offset& kp) {
        return (mixed(l, j, shifted(kx, k, 1), kp) - mixed(l, j, shifted(kx, k, -1), kp)) / (2 * h_);
    }
    long double hess(std::size_t i, std::size_t k, const Offset& kx, const Offset& kp) {
        return (d1x(i, shifted(kx, k, 1), kp) - d1x(i, shifted(kx, k, -1), kp)) / (2 * h_);
    }

    Block block(const Offset& kx) {
        const Offset kp(n_, 0);
        Block b;
        b.sigma = f(kx, kp);
        b.si.resize(n_);
        b.skp.resize(n_);
        b.M.resize(n_, n_);
        b.H.resize(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            b.si[i] = d1x(i, kx, kp);
            b.skp[i] = d1p(i, kx, kp);
            for (std::size_t k = 0; k < n_; ++k) {
                b.M(i, k) = mixed(i, k, kx, kp);
                b.H(i, k) = hess(i, k, kx, kp);
            }
        }
        Eigen::FullPivLU<MatL> lu(b.M.transpose());
        lu.setThreshold(1e-12L);
        if (!lu.isInvertible()) {
            throw Error(ErrorCode::degenerate, "conjugate points / degenerate mixed Hessian");
        }
        b.S = lu.inverse();
        b.T.assign(n_, MatL(n_, n_));
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t k = 0; k < n_; ++k) {
                for (std::size_t l = 0; l < n_; ++l) b.T[j](k, l) = third(k, l, j, kx, kp);
            }
        }
        b.Gamma.assign(n_, MatL::Zero(n_, n_));
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) b.Gamma[i] += b.S(i, j) * b.T[j];
        }
        b.G = b.H;
        for (std::size_t l = 0; l < n_; ++l) b.G -= b.si[l] * b.Gamma[l];
        return b;
    }

    std::vector<MatL> g_covariant(const Block& c) {
        const Offset zero(n_, 0);
        std::vector<MatL> out(n_, MatL(n_, n_));
        for (std::size_t l = 0; l < n_; ++l) {
            const MatL dG = (block(shifted(zero, l, 1)).G - block(shifted(zero, l, -1)).G) / (2 * h_);
            for (std::size_t i = 0; i < n_; ++i) {
                for (std::size_t k = 0; k < n_; ++k) {
                    long double v = dG(i, k);
                    for (std::size_t m = 0; m < n_; ++m) {
                        v -= c.Gamma[m](i, l) * c.G(m, k) + c.Gamma[m](k, l) * c.G(i, m);
                    }
                    out[l](i, k) = v;
                }
            }
        }
        return out;
    }

    const VecL& x() const { return x_; }

private:
    void require_box(const VecL& c, int reach) const {
        for (std::size_t corner = 0; corner < (std::size_t{1} << n_); ++corner) {
            VecL p = c;
            for (std::size_t i = 0; i < n_; ++i) p[i] += (corner >> i & 1 ? h_ : -h_) * reach;
            if (!src_.in_domain(p)) {
                throw Error(ErrorCode::invalid_argument, "finite-difference stencil leaves the metric domain");
            }
        }
    }

    long double eval(const Offset& kx, const Offset& kp, bool is_center) {
        Offset key = kx;
        key.insert(key.end(), kp.begin(), kp.end());
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        VecL px(n_), pp(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            px[i] = x_[i] + h_ * kx[i];
            pp[i] = xp_[i] + h_ * kp[i];
        }
        if (!src_.in_domain(px) || !src_.in_domain(pp)) {
            throw Error(ErrorCode::invalid_argument, "finite-difference stencil leaves the metric domain");
        }
        // Every node starts from the centre pair's velocity, so results do not
        // depend on evaluation order.
        VecL warm = is_center ? VecL() : warm_;
        const long double v = src_.sigma(px, pp, &warm);
        if (is_center) warm_ = warm;
        memo_.emplace(std::move(key), v);
        return v;
    }

    const SigmaSource& src_;
    VecL x_, xp_;
    long double h_;
    std::size_t n_;
    VecL warm_;
    std::map<Offset, long double> memo_;
};

void check_pair(const SigmaSource& source, const Point& x, const Point& xp, double h) {
    require_dimension(source.dimension, {&x, &xp});
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::invalid_argument, "step h must be positive");
}

struct Full {
    Block c;
    std::vector<MatL> gcov;
};

Full compute(const SigmaSource& source, const Point& x, const Point& xp, double h, bool with_gcov) {
    check_pair(source, x, xp, h);
    Stencil st(source, to_vec(x), to_vec(xp), h, with_gcov ? 4 : 3);
    Full out;
    out.c = st.block(Offset(x.dimension(), 0));
    if (with_gcov) out.gcov = st.g_covariant(out.c);
    return out;
}

long double identity_residual(const Block& b) {
    const long double lhs = b.si.dot(b.S * b.skp);
    return std::abs(lhs - 2 * b.sigma) / std::max(1.0L, std::abs(2 * b.sigma));
}

long double jh_residual(const SigmaSource& source, const Block& b, const VecL& x) {
    const MatL ginv = source.metric.g(x).inverse();
    const long double lhs = b.si.dot(ginv * b.si);
    return std::abs(lhs - 2 * b.sigma) / std::max(1.0L, std::abs(2 * b.sigma));
}

Eigen::MatrixXd dbl(const MatL& m) { return m.cast<double>(); }
Eigen::VectorXd dbl(const VecL& v) { return v.cast<double>(); }

}  // namespace

SigmaDerivatives sigma_derivatives(const SigmaSource& source, const Point& x, const Point& xp, double h) {
    const Full f = compute(source, x, xp, h, true);
    SigmaDerivatives d;
    d.sigma = static_cast<double>(f.c.sigma);
    d.sigma_i = dbl(f.c.si);
    d.sigma_kp = dbl(f.c.skp);
    d.sigma_lkp = dbl(f.c.M);
    d.sigma_inv = dbl(f.c.S);
    for (const auto& t : f.c.T) d.sigma_klj.push_back(dbl(t));
    for (const auto& g : f.c.Gamma) d.christoffel.push_back(dbl(g));
    d.sigma_ik = dbl(f.c.H);
    d.G = dbl(f.c.G);
    for (const auto& g : f.gcov) d.G_cov.push_back(dbl(g));
    return d;
}

SigmaDerivatives sigma_derivatives(const MetricField& m, const Point& x, const Point& xp, double h) {
    return sigma_derivatives(metric_source(m), x, xp, h);
}

double jacobi_hamilton_residual(const SigmaSource& source, const Point& x, const Point& xp, double h) {
    check_pair(source, x, xp, h);
    Stencil st(source, to_vec(x), to_vec(xp), h, 1);
    const Offset zero(x.dimension(), 0);
    Block b;
    b.sigma = st.f(zero, zero);
    b.si.resize(x.dimension());
    for (std::size_t i = 0; i < x.dimension(); ++i) b.si[i] = st.d1x(i, zero, zero);
    return static_cast<double>(jh_residual(source, b, st.x()));
}

double jacobi_hamilton_residual(const MetricField& m, const Point& x, const Point& xp, double h) {
    return jacobi_hamilton_residual(metric_source(m), x, xp, h);
}

bool ConsistencyReport::within(double threshold) const {
    return max_sigma_identity <= threshold && max_jacobi_hamilton <= threshold && max_symmetry <= threshold &&
           max_diagonal <= threshold && max_g_covariant <= threshold;
}

nlohmann::json ConsistencyReport::to_json() const {
    auto rows = nlohmann::json::array();
    for (const auto& p : pairs) {
        rows.push_back({{"x", std::vector<double>(p.x.coords().begin(), p.x.coords().end())},
                        {"xp", std::vector<double>(p.xp.coords().begin(), p.xp.coords().end())},
                        {"sigma", p.sigma},
                        {"sigma_identity", p.sigma_identity},
                        {"jacobi_hamilton", p.jacobi_hamilton},
                        {"symmetry", p.symmetry},
                        {"diagonal", p.diagonal},
                        {"g_covariant", p.g_covariant}});
    }
    return {{"source", source},
            {"h", h},
            {"max",
             {{"sigma_identity", max_sigma_identity},
              {"jacobi_hamilton", max_jacobi_hamilton},
              {"symmetry", max_symmetry},
              {"diagonal", max_diagonal},
              {"g_covariant", max_g_covariant}}},
            {"pairs", rows}};
}

ConsistencyReport riemann_consistency(const SigmaSource& source, const std::vector<std::pair<Point, Point>>& pairs,
                                      double h, unsigned workers) {
    auto chunks = parallel_chunks(pairs.size(), workers, [&](std::size_t begin, std::size_t end) {
        std::vector<PairResiduals> rows;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& [x, xp] = pairs[i];
            const Full f = compute(source, x, xp, h, true);
            PairResiduals r;
            r.x = x;
            r.xp = xp;
            r.sigma = static_cast<double>(f.c.sigma);
            r.sigma_identity = static_cast<double>(identity_residual(f.c));
            r.jacobi_hamilton = static_cast<double>(jh_residual(source, f.c, to_vec(x)));
            const VecL vx = to_vec(x), vxp = to_vec(xp);
            const long double back = source.sigma(vxp, vx, nullptr);
            r.symmetry = static_cast<double>(std::abs(f.c.sigma - back) / std::max(1.0L, std::abs(f.c.sigma)));
            r.diagonal = static_cast<double>(std::abs(source.sigma(vx, vx, nullptr)));
            long double g = 0.0L;
            for (const auto& m : f.gcov) g = std::max(g, m.cwiseAbs().maxCoeff());
            r.g_covariant = static_cast<double>(g);
            rows.push_back(std::move(r));
        }
        return rows;
    });
    ConsistencyReport rep;
    rep.source = source.name;
    rep.h = h;
    for (auto& c : chunks) {
        for (auto& r : c) {
            rep.max_sigma_identity = std::max(rep.max_sigma_identity, r.sigma_identity);
            rep.max_jacobi_hamilton = std::max(rep.max_jacobi_hamilton, r.jacobi_hamilton);
            rep.max_symmetry = std::max(rep.max_symmetry, r.symmetry);
            rep.max_diagonal = std::max(rep.max_diagonal, r.diagonal);
            rep.max_g_covariant = std::max(rep.max_g_covariant, r.g_covariant);
            rep.pairs.push_back(std::move(r));
        }
    }
    return rep;
}

ConsistencyReport riemann_consistency(const MetricField& m, const std::vector<std::pair<Point, Point>>& pairs,
                                      double h, unsigned workers) {
    return riemann_consistency(metric_source(m), pairs, h, workers);
}

bool HSweepReport::converges(double min_order) const {
    for (const auto& o : orders) {
        if (o.exempt) continue;
        for (double v : o.orders) {
            if (!(v >= min_order)) return false;
        }
    }
    return true;
}

nlohmann::json HSweepReport::to_json() const {
    auto ord = nlohmann::json::array();
    for (const auto& o : orders) {
        ord.push_back({{"residual", o.residual}, {"maxima", o.maxima}, {"orders", o.orders}, {"exempt", o.exempt}});
    }
    auto lv = nlohmann::json::array();
    for (const auto& l : levels) lv.push_back(l.to_json());
    return {{"h", hs}, {"convergence", ord}, {"levels", lv}};
}

HSweepReport h_sweep(const SigmaSource& source, const std::vector<std::pair<Point, Point>>& pairs,
                     const std::vector<double>& hs, unsigned workers, double floor) {
    if (hs.size() < 2) throw Error(ErrorCode::invalid_argument, "h sweep needs at least two step sizes");
    HSweepReport rep;
    rep.hs = hs;
    for (double h : hs) rep.levels.push_back(riemann_consistency(source, pairs, h, workers));
    const std::array<std::pair<const char*, double ConsistencyReport::*>, 3> fields{{
        {"sigma_identity", &ConsistencyReport::max_sigma_identity},
        {"jacobi_hamilton", &ConsistencyReport::max_jacobi_hamilton},
        {"g_covariant", &ConsistencyReport::max_g_covariant},
    }};
    for (const auto& [name, field] : fields) {
        ConvergenceOrder o;
        o.residual = name;
        for (const auto& l : rep.levels) o.maxima.push_back(l.*field);
        for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
            o.orders.push_back(std::log(o.maxima[i] / o.maxima[i + 1]) / std::log(hs[i] / hs[i + 1]));
        }
        o.exempt = std::all_of(o.maxima.begin(), o.maxima.end(), [&](double v) { return v <= floor; });
        rep.orders.push_back(std::move(o));
    }
    return rep;
}

std::vector<Point> geodesic_from_algebraic(const SigmaSource& source, const Point& xp, const std::vector<double>& b,
                                           const std::vector<double>& taus, double h) {
    const std::size_t n = source.dimension;
    require_dimension(n, {&xp});
    if (b.size() != n) throw Error(ErrorCode::chart_mismatch, "chart mismatch: b has the wrong dimension");
    bool nonzero = false;
    for (double v : b) nonzero = nonzero || v != 0.0;
    if (!nonzero) throw Error(ErrorCode::invalid_argument, "direction b must be nonzero");

    VecL vb(n);
    for (std::size_t i = 0; i < n; ++i) vb[i] = b[i];
    const VecL vxp = to_vec(xp);

    // F(x) = sigma_k'(x, xp) - b tau and its Jacobian M(l, k')^T.
    auto system = [&](const VecL& x, long double tau, VecL& F, MatL& J) {
        Stencil st(source, x, vxp, h, 1);
        const Offset zero(n, 0);
        F.resize(n);
        J.resize(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            F[k] = st.d1p(k, zero, zero) - vb[k] * tau;
            for (std::size_t l = 0; l < n; ++l) J(k, l) = st.mixed(l, k, zero, zero);
        }
    };

    std::vector<Point> out;
    VecL x = vxp;
    for (double tau_d : taus) {
        const long double tau = tau_d;
        const long double target = 1e-13L * std::max(1.0L, (vb * tau).norm());
        VecL F;
        MatL J;
        system(x, tau, F, J);
        long double res = F.norm();
        std::size_t it = 0;
        for (; it < 60 && res > target; ++it) {
            Eigen::FullPivLU<MatL> lu(J);
            if (!lu.isInvertible()) {
                throw Error(ErrorCode::degenerate, "conjugate points / degenerate mixed Hessian");
            }
            const VecL step = lu.solve(VecL(-F));
            long double alpha = 1.0L;
            bool improved = false;
            for (int k = 0; k < 30; ++k, alpha *= 0.5L) {
                const VecL xt = x + alpha * step;
                if (!source.in_domain(xt)) continue;
                VecL Ft;
                MatL Jt;
                try {
                    system(xt, tau, Ft, Jt);
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::not_converged || e.code() == ErrorCode::invalid_argument) continue;
                    throw;
                }
                if (Ft.norm() < res) {
                    x = xt;
                    F = Ft;
                    J = Jt;
                    res = Ft.norm();
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        if (res > 1e-9L * std::max(1.0L, (vb * tau).norm())) {
            throw Error(ErrorCode::not_converged,
                        fmt::format("algebraic geodesic solve diverged at tau={} (residual {:.3e}, last iterate {})",
                                    tau_d, static_cast<double>(res), to_point(x).to_string()));
        }
        out.push_back(to_point(x));
    }
    return out;
}

}  // namespace tgeom
