#include "tgeom/error.hpp"
#include "tgeom/objects.hpp"
#include "tgeom/random.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

namespace tgeom {

double two_origin_scalar_product(const WorldFunction& wf, const Point& p0, const Point& p1,
                                 const Point& q0, const Point& q1) {
    return wf(p0, q1) + wf(p1, q0) - wf(p0, q0) - wf(p1, q1);
}

ParallelTest parallel(const WorldFunction& wf, const BoundVector& a, const BoundVector& b, double tol) {
    const double na = 2.0 * wf(a.tail, a.head);
    const double nb = 2.0 * wf(b.tail, b.head);
    if (!(na > 0.0) || !(nb > 0.0)) throw Error(ErrorCode::degenerate, "parallelism undefined");
    ParallelTest t;
    t.cosine = two_origin_scalar_product(wf, a.tail, a.head, b.tail, b.head) / std::sqrt(na * nb);
    t.parallel = std::abs(std::abs(t.cosine) - 1.0) <= tol;
    return t;
}

namespace {

bool recoverable(const Error& e) {
    return e.code() == ErrorCode::undefined || e.code() == ErrorCode::degenerate;
}

// Random numbers consumed by one attempt to build a parallel partner; drawn
// up front so every trial uses a fixed slice of the stream.
struct PartnerDraw {
    std::vector<double> tail;
    double scale = 1.0;
    std::vector<double> bend;
};

PartnerDraw draw_partner(SeededSampler& rng, const WitnessSearchConfig& cfg) {
    PartnerDraw d;
    for (const auto& r : cfg.tail_box) d.tail.push_back(rng.uniform(r.lo, r.hi));
    d.scale = rng.uniform(0.5, 2.0);
    for (std::size_t i = 0; i < cfg.tail_box.size(); ++i) d.bend.push_back(rng.uniform(-1.0, 1.0));
    return d;
}

std::optional<BoundVector> find_partner(const WorldFunction& wf, const BoundVector& v,
                                        const PartnerDraw& draw, const WitnessSearchConfig& cfg) {
    const std::size_t n = v.tail.dimension();
    std::vector<double> dir(n);
    double reach = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dir[i] = v.head[i] - v.tail[i];
        reach = std::max(reach, std::abs(dir[i]));
    }
    const Point tail(draw.tail);
    auto member = [&](double lambda) {
        std::vector<double> head(n);
        for (std::size_t i = 0; i < n; ++i) {
            head[i] = tail[i] + draw.scale * (dir[i] + lambda * reach * draw.bend[i]);
        }
        return BoundVector{tail, Point(std::move(head))};
    };
    auto excess = [&](double lambda) {
        return std::abs(parallel(wf, v, member(lambda), cfg.tol).cosine) - 1.0;
    };
    auto safe_excess = [&](double lambda) {
        try {
            return excess(lambda);
        } catch (const Error& e) {
            if (!recoverable(e)) throw;
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    // The translated copy itself.
    const double e0 = safe_excess(0.0);
    if (std::abs(e0) <= cfg.tol) return member(0.0);

    const std::size_t k = std::max<std::size_t>(cfg.scan_steps, 2);
    double lo = -1.0;
    double flo = safe_excess(lo);
    for (std::size_t j = 1; j <= k; ++j) {
        const double hi = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(k);
        const double fhi = safe_excess(hi);
        if (std::isfinite(flo) && std::isfinite(fhi) && (flo < 0.0) != (fhi < 0.0)) {
            try {
                std::uintmax_t iterations = 200;
                const auto [a, b] = boost::math::tools::toms748_solve(
                    excess, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iterations);
                const double root = std::abs(excess(a)) <= std::abs(excess(b)) ? a : b;
                // A sign change across a branch jump is not a root.
                if (std::abs(excess(root)) <= 0.5 * cfg.tol) return member(root);
            } catch (const Error& e) {
                if (!recoverable(e)) throw;
            }
        }
        lo = hi;
        flo = fhi;
    }
    return std::nullopt;
}

}  // namespace

WitnessSearchResult find_intransitive_parallel(const WorldFunction& wf, const WitnessSearchConfig& cfg) {
    const std::size_t n = wf.dimension();
    if (cfg.tail_box.size() != n || cfg.displacement_box.size() != n) {
        throw Error(ErrorCode::chart_mismatch, "chart mismatch: witness search boxes have the wrong dimension");
    }
    if (!(cfg.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");

    WitnessSearchResult result;
    SeededSampler rng(cfg.seed);
    for (std::uint64_t trial = 0; trial < cfg.budget; ++trial) {
        ++result.trials;
        std::vector<double> tail, head;
        for (std::size_t i = 0; i < n; ++i) tail.push_back(rng.uniform(cfg.tail_box[i].lo, cfg.tail_box[i].hi));
        for (std::size_t i = 0; i < n; ++i) {
            head.push_back(tail[i] + rng.uniform(cfg.displacement_box[i].lo, cfg.displacement_box[i].hi));
        }
        const auto draw_b = draw_partner(rng, cfg);
        const auto draw_c = draw_partner(rng, cfg);
        try {
            const BoundVector a{Point(tail), Point(head)};
            if (!(wf(a.tail, a.head) > 0.0)) continue;
            const auto b = find_partner(wf, a, draw_b, cfg);
            if (!b) continue;
            const auto c = find_partner(wf, *b, draw_c, cfg);
            if (!c) continue;
            const auto ab = parallel(wf, a, *b, cfg.tol);
            const auto bc = parallel(wf, *b, *c, cfg.tol);
            if (!ab.parallel || !bc.parallel) continue;
            ++result.chains;
            const auto ac = parallel(wf, a, *c, cfg.tol);
            if (!ac.parallel) {
                result.witness = ParallelWitness{a, *b, *c, ab.cosine, bc.cosine, ac.cosine, trial};
                return result;
            }
        } catch (const Error& e) {
            if (!recoverable(e)) throw;
        }
    }
    return result;
}

}  // namespace tgeom
