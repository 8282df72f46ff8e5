#pragma once

#include "tgeom/spacetime.hpp"
#include "tgeom/world_function.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace tgeom {

// The derivative pipeline runs in extended precision: third and fourth
// differences of sigma at h ~ 1e-3 lose ~12 digits to cancellation.
// Storage is inline (no heap) up to max_pipeline_dimension.
inline constexpr int max_pipeline_dimension = 8;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1, 0, max_pipeline_dimension, 1>;
using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic, 0, max_pipeline_dimension,
                           max_pipeline_dimension>;

VecL to_vec(const Point& p);
Point to_point(const VecL& v);

enum class MetricKind { flat_euclidean, flat_minkowski, unit_sphere, conformal_flat };

std::string to_string(MetricKind kind);

/// One monomial c * x^px * y^py of the conformal factor exponent phi(x, y).
struct PolyTerm {
    double coeff = 0.0;
    int px = 0;
    int py = 0;
};

class MetricField {
public:
    static MetricField flat_euclidean(std::size_t n, std::optional<PointChart> domain = std::nullopt);
    /// Signature (+,-,-,...).
    static MetricField flat_minkowski(std::size_t n, std::optional<PointChart> domain = std::nullopt);
    /// Colatitude/longitude chart (theta, phi), g = diag(1, sin^2 theta).
    static MetricField unit_sphere(std::optional<PointChart> domain = std::nullopt);
    /// g = exp(2 phi(x, y)) delta on the plane.
    static MetricField conformal_flat(std::vector<PolyTerm> phi, std::optional<PointChart> domain = std::nullopt);
    static MetricField from_name(const std::string& name);

    MetricKind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return n_; }
    const PointChart& domain() const noexcept { return domain_; }
    std::string signature() const;
    const std::vector<PolyTerm>& phi_terms() const noexcept { return phi_; }

    MatL g(const VecL& x) const;
    Eigen::MatrixXd g(const Point& x) const;
    /// Geodesic acceleration -Gamma^i_jk(x) v^j v^k.
    VecL acceleration(const VecL& x, const VecL& v) const;
    bool in_domain(const VecL& x) const;
    nlohmann::json to_json() const;

private:
    MetricField(MetricKind kind, std::size_t n, PointChart domain)
        : kind_(kind), n_(n), domain_(std::move(domain)) {}

    long double phi(const VecL& x) const;
    VecL grad_phi(const VecL& x) const;

    MetricKind kind_;
    std::size_t n_;
    PointChart domain_;
    std::vector<PolyTerm> phi_;
};

struct GeodesicOptions {
    std::size_t steps = 512;          // fixed RK4 steps over the unit affine interval
    std::size_t max_iterations = 60;  // Newton iterations on the boundary miss
    double tol = 1e-12;               // miss below which the solve counts as converged
    bool store_path = true;
    bool probe_alternate = false;     // also shoot the opposite way round
};

struct GeodesicSolution {
    Point x, xp;
    std::vector<Point> path;  // from xp to x
    double length = 0.0;      // S >= 0
    double sigma = 0.0;       // g(v0, v0) / 2 at xp over the unit affine interval
    bool converged = false;
    double residual = 0.0;    // boundary miss |x(1) - x|
    std::vector<double> initial_velocity;
    std::optional<double> alternate_length;  // set when a second geodesic also hits x
};

/// Shooting from xp towards x. The sigma value is the extended-precision one.
GeodesicSolution solve_geodesic(const MetricField& m, const Point& x, const Point& xp,
                                const GeodesicOptions& options = {});

/// Raw extended-precision shooting solve used by the derivative pipeline.
/// `guess` seeds the initial velocity (defaults to x - xp).
struct ShotResult {
    long double sigma = 0.0L;
    long double length = 0.0L;
    long double miss = 0.0L;
    VecL velocity;
    bool converged = false;
};
ShotResult shoot(const MetricField& m, const VecL& x, const VecL& xp, const GeodesicOptions& options,
                 const VecL* guess = nullptr, std::vector<Point>* path = nullptr);

/// sigma = S^2 / 2 from the converged geodesic; throws not_converged otherwise.
double sigma_from_metric(const MetricField& m, const Point& x, const Point& xp,
                         const GeodesicOptions& options = {});

/// World function induced by a metric. Pairs are solved in a canonical order
/// so that the value is exactly symmetric.
WorldFunction riemann_induced(const MetricField& m, const GeodesicOptions& options = {});

// -- derivatives -----------------------------------------------------------

/// Any extended-precision sigma(x, x') with a chart domain, plus the metric
/// used for the Jacobi-Hamilton check.
/// `warm` is an optional initial-velocity hint for shooting sources: when
/// non-empty it seeds the solve, when empty it receives the solved velocity.
struct SigmaSource {
    using Fn = std::function<long double(const VecL& x, const VecL& xp, VecL* warm)>;

    std::size_t dimension = 0;
    Fn sigma;
    std::function<bool(const VecL&)> in_domain;
    MetricField metric;
    std::string name;
};

SigmaSource metric_source(const MetricField& m, const GeodesicOptions& options = {});
/// Deformed sigma of the given params, checked against the flat Minkowski metric.
SigmaSource deformed_source(const DeformedParams& params);
/// Closed-form great-circle sigma on the unit sphere chart.
SigmaSource sphere_analytic_source();

struct SigmaDerivatives {
    double sigma = 0.0;
    Eigen::VectorXd sigma_i;              // d sigma / dx^i
    Eigen::VectorXd sigma_kp;             // d sigma / dx'^k
    Eigen::MatrixXd sigma_lkp;            // (l, k'): d^2 sigma / dx^l dx'^k
    Eigen::MatrixXd sigma_inv;            // (i, k'): sigma^{i,k'}
    std::vector<Eigen::MatrixXd> sigma_klj;   // [j'](k, l)
    std::vector<Eigen::MatrixXd> christoffel; // [i](k, l)
    Eigen::MatrixXd sigma_ik;             // d sigma_i / dx^k
    Eigen::MatrixXd G;                    // G_ik = sigma_ik - Gamma^l_ik sigma_l
    std::vector<Eigen::MatrixXd> G_cov;   // [l](i, k): G_{ik||l}
};

SigmaDerivatives sigma_derivatives(const SigmaSource& source, const Point& x, const Point& xp, double h);
SigmaDerivatives sigma_derivatives(const MetricField& m, const Point& x, const Point& xp, double h);

/// |sigma_i g^{ik}(x) sigma_k - 2 sigma| / max(1, |2 sigma|).
double jacobi_hamilton_residual(const SigmaSource& source, const Point& x, const Point& xp, double h);
double jacobi_hamilton_residual(const MetricField& m, const Point& x, const Point& xp, double h);

struct PairResiduals {
    Point x, xp;
    double sigma = 0.0;
    double sigma_identity = 0.0;   // |sigma_i sigma^{i,k'} sigma_k' - 2 sigma| / max(1, |2 sigma|)
    double jacobi_hamilton = 0.0;
    double symmetry = 0.0;         // |sigma(x,x') - sigma(x',x)| / max(1, |sigma|)
    double diagonal = 0.0;         // |sigma(x,x)|
    double g_covariant = 0.0;      // max |G_{ik||l}|
};

struct ConsistencyReport {
    std::string source;
    double h = 0.0;
    std::vector<PairResiduals> pairs;
    double max_sigma_identity = 0.0, max_jacobi_hamilton = 0.0, max_symmetry = 0.0, max_diagonal = 0.0,
           max_g_covariant = 0.0;

    bool within(double threshold) const;
    nlohmann::json to_json() const;
};

ConsistencyReport riemann_consistency(const SigmaSource& source,
                                      const std::vector<std::pair<Point, Point>>& pairs, double h,
                                      unsigned workers = 1);
ConsistencyReport riemann_consistency(const MetricField& m, const std::vector<std::pair<Point, Point>>& pairs,
                                      double h, unsigned workers = 1);

struct ConvergenceOrder {
    std::string residual;
    std::vector<double> maxima;  // one per h level, coarse to fine
    std::vector<double> orders;  // observed order between successive levels
    bool exempt = false;         // every level already at or below the floor; order not meaningful
};

struct HSweepReport {
    std::vector<double> hs;
    std::vector<ConsistencyReport> levels;
    std::vector<ConvergenceOrder> orders;

    /// Every h-dependent residual that is not exempt converges at >= min_order.
    bool converges(double min_order = 1.8) const;
    nlohmann::json to_json() const;
};

/// Runs the consistency check at each h (coarse to fine). A residual whose
/// maxima are at or below `floor` on every level is exempt from the order
/// requirement: it is already at round-off and its ratios are noise.
HSweepReport h_sweep(const SigmaSource& source, const std::vector<std::pair<Point, Point>>& pairs,
                     const std::vector<double>& hs, unsigned workers = 1, double floor = 1e-9);

/// Solves sigma_k'(x, xp) = b_k' tau for x at each tau by damped Newton,
/// continuing from the previous solution.
std::vector<Point> geodesic_from_algebraic(const SigmaSource& source, const Point& xp,
                                           const std::vector<double>& b, const std::vector<double>& taus,
                                           double h = 1e-4);

}  // namespace tgeom
