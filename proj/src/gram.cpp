#include "tgeom/gram.hpp"

#include "tgeom/error.hpp"

#include <cmath>

namespace tgeom {

GramMatrix gram(const WorldFunction& wf, const Point& base, std::span<const Point> tips) {
    const std::size_t n = tips.size();
    if (n == 0) throw Error(ErrorCode::invalid_argument, "gram needs at least one tip");
    require_dimension(wf.dimension(), {&base});
    for (const auto& t : tips) require_dimension(wf.dimension(), {&t});

    GramMatrix g;
    g.base = base;
    g.tips.assign(tips.begin(), tips.end());
    g.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    std::vector<double> to_base(n);
    for (std::size_t i = 0; i < n; ++i) to_base[i] = wf(base, tips[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        g.entries(ii, ii) = 2.0 * to_base[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            const double v = to_base[i] + to_base[k] - wf(tips[i], tips[k]);
            g.entries(ii, kk) = v;
            g.entries(kk, ii) = v;
        }
    }
    g.det = n == 1 ? g.entries(0, 0) : g.entries.fullPivLu().determinant();
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        g.scale *= std::max(1.0, std::abs(g.entries(ii, ii)));
    }
    return g;
}

DependenceTest is_linearly_dependent(const GramMatrix& g, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "dependence tolerance must be positive");
    DependenceTest t;
    t.residual = std::abs(g.det) / g.scale;
    t.dependent = t.residual <= tol;
    return t;
}

}  // namespace tgeom
