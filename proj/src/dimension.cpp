#include "tgeom/error.hpp"
#include "tgeom/objects.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace tgeom {

DimensionEstimate estimate_dimension(const ObjectSample& sample, const Point& center, double window) {
    if (!(window > 0.0)) throw Error(ErrorCode::invalid_argument, "window must be positive");
    if (sample.members.empty()) throw Error(ErrorCode::invalid_argument, "sample is empty");
    const std::size_t n = sample.chart.dimension();
    require_dimension(n, {&center});

    std::vector<const Point*> local;
    for (const auto& m : sample.members) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) d2 += (m[i] - center[i]) * (m[i] - center[i]);
        if (d2 <= window * window) local.push_back(&m);
    }
    if (local.size() < 4 * n) throw Error(ErrorCode::degenerate, "window underpopulated");

    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (const auto* p : local) mean += Eigen::Map<const Eigen::VectorXd>(p->coords().data(), dim);
    mean /= static_cast<double>(local.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto* p : local) {
        const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(p->coords().data(), dim) - mean;
        cov.noalias() += d * d.transpose();
    }
    cov /= static_cast<double>(local.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    DimensionEstimate est;
    est.window = window;
    est.support = local.size();
    for (Eigen::Index i = 0; i < dim; ++i) est.spreads.push_back(std::sqrt(std::max(0.0, eig.eigenvalues()(i))));
    std::sort(est.spreads.begin(), est.spreads.end(), std::greater<>());
    const double cutoff = dimension_threshold * est.spreads.front();
    est.value = static_cast<double>(
        std::count_if(est.spreads.begin(), est.spreads.end(), [&](double s) { return s > cutoff; }));
    return est;
}

}  // namespace tgeom
