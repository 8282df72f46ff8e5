#include "tgeom/world_function.hpp"

#include "tgeom/error.hpp"

#include <cmath>
#include <fmt/format.h>

namespace tgeom {

std::string to_string(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::euclidean: return "euclidean";
        case GeometryKind::minkowski: return "minkowski";
        case GeometryKind::deformed: return "deformed";
        case GeometryKind::riemann_induced: return "riemann";
        case GeometryKind::tabulated: return "tabulated";
        case GeometryKind::cutplane: return "cutplane";
    }
    return "unknown";
}

std::string to_string(CausalClass c) {
    switch (c) {
        case CausalClass::timelike: return "timelike";
        case CausalClass::lightlike: return "lightlike";
        case CausalClass::spacelike: return "spacelike";
        case CausalClass::coincident: return "coincident";
    }
    return "unknown";
}

WorldFunction::WorldFunction(std::shared_ptr<const WorldFunctionModel> model)
    : model_(std::move(model)) {
    if (!model_) throw Error(ErrorCode::invalid_argument, "null world function model");
}

double WorldFunction::operator()(const Point& p, const Point& q) const {
    require_dimension(model_->dimension(), {&p, &q});
    return model_->evaluate(p, q);
}

namespace {

class EuclideanModel final : public WorldFunctionModel {
public:
    explicit EuclideanModel(std::size_t n) : n_(n) {}
    GeometryKind kind() const noexcept override { return GeometryKind::euclidean; }
    std::size_t dimension() const noexcept override { return n_; }
    double evaluate(const Point& p, const Point& q) const override {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double d = p[i] - q[i];
            s += d * d;
        }
        return 0.5 * s;
    }
    nlohmann::json to_json() const override {
        return {{"kind", "euclidean"}, {"dimension", n_}, {"params", nlohmann::json::object()}};
    }

private:
    std::size_t n_;
};

class MinkowskiModel final : public WorldFunctionModel {
public:
    explicit MinkowskiModel(std::size_t n) : n_(n) {}
    GeometryKind kind() const noexcept override { return GeometryKind::minkowski; }
    std::size_t dimension() const noexcept override { return n_; }
    double evaluate(const Point& p, const Point& q) const override {
        const double dt = p[0] - q[0];
        double space = 0.0;
        for (std::size_t i = 1; i < n_; ++i) {
            const double d = p[i] - q[i];
            space += d * d;
        }
        return 0.5 * (dt * dt - space);
    }
    nlohmann::json to_json() const override {
        return {{"kind", "minkowski"}, {"dimension", n_}, {"params", nlohmann::json::object()}};
    }

private:
    std::size_t n_;
};

}  // namespace

WorldFunction euclidean(std::size_t dimension) {
    if (dimension == 0) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
    return WorldFunction(std::make_shared<EuclideanModel>(dimension));
}

WorldFunction minkowski(std::size_t dimension) {
    if (dimension < 2) throw Error(ErrorCode::invalid_argument, "minkowski needs dimension >= 2");
    return WorldFunction(std::make_shared<MinkowskiModel>(dimension));
}

TabulatedModel::TabulatedModel(std::vector<Point> points, std::vector<std::vector<double>> sigma,
                               Validation validation)
    : points_(std::move(points)), sigma_(std::move(sigma)) {
    if (points_.empty()) throw Error(ErrorCode::invalid_argument, "tabulated geometry has no points");
    dimension_ = points_.front().dimension();
    const std::size_t n = points_.size();
    if (sigma_.size() != n) {
        throw Error(ErrorCode::invalid_argument, "tabulated sigma must be a square matrix over the points");
    }
    for (std::size_t i = 0; i < n; ++i) {
        require_dimension(dimension_, {&points_[i]});
        if (sigma_[i].size() != n) {
            throw Error(ErrorCode::invalid_argument, "tabulated sigma must be a square matrix over the points");
        }
        if (!index_.emplace(points_[i], i).second) {
            throw Error(ErrorCode::invalid_argument,
                        "tabulated geometry lists point " + points_[i].to_string() + " twice");
        }
    }
    if (validation == Validation::none) return;
    for (std::size_t i = 0; i < n; ++i) {
        if (sigma_[i][i] != 0.0) {
            throw Error(ErrorCode::invalid_argument,
                        fmt::format("tabulated sigma has nonzero diagonal at {}", i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(sigma_[i][j])) {
                throw Error(ErrorCode::invalid_argument, "tabulated sigma has a non-finite entry");
            }
            if (sigma_[i][j] != sigma_[j][i]) {
                throw Error(ErrorCode::invalid_argument,
                            fmt::format("tabulated sigma is not symmetric at ({}, {})", i, j));
            }
        }
    }
}

std::size_t TabulatedModel::index_of(const Point& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) {
        throw Error(ErrorCode::invalid_argument,
                    "point " + p.to_string() + " is not in the tabulated point list");
    }
    return it->second;
}

double TabulatedModel::evaluate(const Point& p, const Point& q) const {
    return sigma_[index_of(p)][index_of(q)];
}

nlohmann::json TabulatedModel::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points_) pts.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
    return {{"kind", "tabulated"}, {"dimension", dimension_}, {"points", pts}, {"sigma", sigma_}};
}

WorldFunction tabulated(std::vector<Point> points, std::vector<std::vector<double>> sigma) {
    return WorldFunction(std::make_shared<TabulatedModel>(std::move(points), std::move(sigma)));
}

WorldFunction tabulated_unchecked(std::vector<Point> points, std::vector<std::vector<double>> sigma) {
    return WorldFunction(std::make_shared<TabulatedModel>(std::move(points), std::move(sigma),
                                                          TabulatedModel::Validation::none));
}

double sigma(const WorldFunction& wf, const Point& p, const Point& q) { return wf(p, q); }

Interval interval(const WorldFunction& wf, const Point& p, const Point& q, double lightlike_tol) {
    Interval out;
    out.sigma = wf(p, q);
    if (out.sigma >= 0.0) out.s = std::sqrt(2.0 * out.sigma);
    if (p == q) {
        out.causal_class = CausalClass::coincident;
    } else if (std::abs(out.sigma) <= lightlike_tol * std::max(1.0, std::abs(out.sigma))) {
        out.causal_class = CausalClass::lightlike;
    } else {
        out.causal_class = out.sigma > 0.0 ? CausalClass::timelike : CausalClass::spacelike;
    }
    return out;
}

double scalar_product(const WorldFunction& wf, const Point& p0, const Point& pi, const Point& pk) {
    return wf(p0, pi) + wf(p0, pk) - wf(pi, pk);
}

}  // namespace tgeom
