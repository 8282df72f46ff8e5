#pragma once

#include "tgeom/world_function.hpp"

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tgeom {

/// Matrix of scalar products (P0Pi . P0Pk) for the tuple {P0, P1..Pn}.
struct GramMatrix {
    Point base;
    std::vector<Point> tips;
    Eigen::MatrixXd entries;
    double det = 0.0;    // F_n, signed
    double scale = 1.0;  // prod_i max(1, |entries(i,i)|)

    std::size_t order() const noexcept { return tips.size(); }
};

GramMatrix gram(const WorldFunction& wf, const Point& base, std::span<const Point> tips);

struct DependenceTest {
    bool dependent = false;
    double residual = 0.0;  // |det| / scale
};

inline constexpr double default_gram_tol = 1e-8;

/// Linear dependence of {P0Pi}: |F_n| <= tol * scale.
DependenceTest is_linearly_dependent(const GramMatrix& g, double tol = default_gram_tol);

}  // namespace tgeom
