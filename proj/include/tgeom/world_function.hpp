#pragma once

#include "tgeom/point.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tgeom {

enum class GeometryKind { euclidean, minkowski, deformed, riemann_induced, tabulated, cutplane };

std::string to_string(GeometryKind kind);

/// Implementation side of a world function. Models must be pure: the same
/// pair always yields the same value. Symmetry and the zero diagonal are the
/// model's responsibility so that they hold structurally, not approximately.
class WorldFunctionModel {
public:
    virtual ~WorldFunctionModel() = default;

    virtual GeometryKind kind() const noexcept = 0;
    virtual std::size_t dimension() const noexcept = 0;
    virtual double evaluate(const Point& p, const Point& q) const = 0;
    /// Geometry-spec JSON that reconstructs this model.
    virtual nlohmann::json to_json() const = 0;
};

/// Two-point world function sigma(P, Q): the sole primitive of a geometry.
/// Cheap to copy; the model is shared and immutable.
class WorldFunction {
public:
    explicit WorldFunction(std::shared_ptr<const WorldFunctionModel> model);

    GeometryKind kind() const noexcept { return model_->kind(); }
    std::size_t dimension() const noexcept { return model_->dimension(); }
    const WorldFunctionModel& model() const noexcept { return *model_; }
    nlohmann::json to_json() const { return model_->to_json(); }

    /// Checks dimensions, then evaluates the model.
    double operator()(const Point& p, const Point& q) const;

private:
    std::shared_ptr<const WorldFunctionModel> model_;
};

/// sigma = |r - r'|^2 / 2.
WorldFunction euclidean(std::size_t dimension);
/// sigma = ((dx0)^2 - sum (dxa)^2) / 2, signature (+,-,-,...).
WorldFunction minkowski(std::size_t dimension);

/// Dense world function over an explicit point list. Queries off the list are
/// rejected; there is no interpolation.
class TabulatedModel final : public WorldFunctionModel {
public:
    enum class Validation { strict, none };

    TabulatedModel(std::vector<Point> points, std::vector<std::vector<double>> sigma,
                   Validation validation = Validation::strict);

    GeometryKind kind() const noexcept override { return GeometryKind::tabulated; }
    std::size_t dimension() const noexcept override { return dimension_; }
    double evaluate(const Point& p, const Point& q) const override;
    nlohmann::json to_json() const override;

    const std::vector<Point>& points() const noexcept { return points_; }

private:
    std::size_t index_of(const Point& p) const;

    std::size_t dimension_ = 0;
    std::vector<Point> points_;
    std::vector<std::vector<double>> sigma_;
    std::map<Point, std::size_t> index_;
};

/// Strictly validated (symmetric, zero diagonal, finite) tabulated geometry.
WorldFunction tabulated(std::vector<Point> points, std::vector<std::vector<double>> sigma);
/// Tabulated geometry without validation, for feeding raw data to the axiom checks.
WorldFunction tabulated_unchecked(std::vector<Point> points,
                                  std::vector<std::vector<double>> sigma);

enum class CausalClass { timelike, lightlike, spacelike, coincident };

std::string to_string(CausalClass c);

struct Interval {
    double sigma = 0.0;
    std::optional<double> s;  // sqrt(2 sigma), only for sigma >= 0
    CausalClass causal_class = CausalClass::coincident;
};

double sigma(const WorldFunction& wf, const Point& p, const Point& q);

/// `lightlike_tol` is relative: |sigma| <= tol * max(1, |sigma|).
Interval interval(const WorldFunction& wf, const Point& p, const Point& q,
                  double lightlike_tol = 1e-9);

/// (P0Pi . P0Pk) = sigma(P0,Pi) + sigma(P0,Pk) - sigma(Pi,Pk).
double scalar_product(const WorldFunction& wf, const Point& p0, const Point& pi, const Point& pk);

}  // namespace tgeom
