#include "tgeom/objects.hpp"

#include "tgeom/error.hpp"
#include "tgeom/parallel.hpp"
#include "tgeom/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace tgeom {

namespace {

std::vector<Point> with_point(std::span<const Point> points, const Point& extra) {
    std::vector<Point> out(points.begin(), points.end());
    out.push_back(extra);
    return out;
}

void require_nondegenerate(const WorldFunction& wf, std::span<const Point> determining, double tol,
                           const char* message) {
    if (determining.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "a plane needs at least two determining points");
    }
    const auto g = gram(wf, determining.front(), determining.subspan(1));
    if (is_linearly_dependent(g, tol).dependent) throw Error(ErrorCode::degenerate, message);
}

Membership gram_zero(const WorldFunction& wf, std::span<const Point> determining, const Point& r,
                     double tol) {
    const auto tuple = with_point(determining, r);
    const auto g = gram(wf, tuple.front(), std::span<const Point>(tuple).subspan(1));
    const auto t = is_linearly_dependent(g, tol);
    return {t.dependent, t.residual};
}

double segment_length(const WorldFunction& wf, const Point& a, const Point& b) {
    const double s = wf(a, b);
    if (s < 0.0) throw Error(ErrorCode::undefined, "segment undefined for spacelike legs");
    return std::sqrt(2.0 * s);
}

// Residual of R against the segment [P, Q], or nullopt when a leg is spacelike.
std::optional<double> segment_residual(const WorldFunction& wf, const Point& p, const Point& q,
                                       double span, const Point& r) {
    const double a = wf(p, r);
    const double b = wf(r, q);
    if (a < 0.0 || b < 0.0) return std::nullopt;
    return std::abs(std::sqrt(2.0 * a) + std::sqrt(2.0 * b) - span) / span;
}

double section_residual(const WorldFunction& wf, const Point& p0, const Point& p1, double s0,
                        double s1, const Point& r) {
    const double d0 = std::abs(s0 - wf(p0, r)) / std::max(1.0, std::abs(s0));
    const double d1 = std::abs(s1 - wf(p1, r)) / std::max(1.0, std::abs(s1));
    return std::max(d0, d1);
}

using PointTest = std::function<std::optional<double>(const Point&)>;

struct Chunk {
    std::vector<Point> members;
    std::vector<double> residuals;
    std::size_t undefined = 0;
};

void sweep(ObjectSample& sample, const PointTest& test, unsigned workers) {
    const auto& chart = sample.chart;
    auto chunks = parallel_chunks(chart.lattice_size(), workers, [&](std::size_t begin, std::size_t end) {
        Chunk c;
        for (std::size_t i = begin; i < end; ++i) {
            const Point r = chart.lattice_point(i);
            try {
                if (auto res = test(r)) {
                    c.members.push_back(r);
                    c.residuals.push_back(*res);
                }
            } catch (const Error& e) {
                if (e.code() != ErrorCode::undefined) throw;
                ++c.undefined;
            }
        }
        return c;
    });
    for (auto& c : chunks) {
        sample.members.insert(sample.members.end(), std::make_move_iterator(c.members.begin()),
                              std::make_move_iterator(c.members.end()));
        sample.residuals.insert(sample.residuals.end(), c.residuals.begin(), c.residuals.end());
        sample.undefined += c.undefined;
    }
}

PointTest gram_test(const WorldFunction& wf, std::vector<Point> determining, Tolerance tol) {
    if (tol.rule == MembershipRule::relative) {
        return [wf, det = std::move(determining), t = tol.value](const Point& r) -> std::optional<double> {
            const auto m = gram_zero(wf, det, r, t);
            if (!m.member) return std::nullopt;
            return m.residual;
        };
    }
    const double band2 = tol.value * tol.value;
    return [wf, det = std::move(determining), band2](const Point& r) -> std::optional<double> {
        const double h2 = plane_height2(wf, det, r);
        if (!(std::abs(h2) <= band2)) return std::nullopt;
        return std::sqrt(std::abs(h2));
    };
}

void require_chart(const WorldFunction& wf, const PointChart& chart) {
    if (chart.dimension() != wf.dimension()) {
        throw Error(ErrorCode::chart_mismatch, "chart mismatch: chart and geometry dimensions differ");
    }
}

void require_tolerance(const Tolerance& tol) {
    if (!(tol.value > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
}

}  // namespace

Membership tube_membership(const WorldFunction& wf, const Point& p0, const Point& p1,
                           const Point& r, double tol) {
    const std::vector<Point> axis{p0, p1};
    require_nondegenerate(wf, axis, tol, "lightlike or coincident axis");
    return gram_zero(wf, axis, r, tol);
}

Membership plane_membership(const WorldFunction& wf, std::span<const Point> determining,
                            const Point& r, double tol) {
    require_nondegenerate(wf, determining, tol, "determining points linearly dependent");
    return gram_zero(wf, determining, r, tol);
}

double plane_height2(const WorldFunction& wf, std::span<const Point> determining, const Point& r) {
    if (determining.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "a plane needs at least two determining points");
    }
    const auto base = gram(wf, determining.front(), determining.subspan(1));
    if (base.det == 0.0) throw Error(ErrorCode::degenerate, "determining points linearly dependent");
    const auto tuple = with_point(determining, r);
    const auto full = gram(wf, tuple.front(), std::span<const Point>(tuple).subspan(1));
    return full.det / base.det;
}

Membership segment_membership(const WorldFunction& wf, const Point& p, const Point& q,
                              const Point& r, double tol) {
    const double pq = wf(p, q);
    if (!(pq > 0.0)) throw Error(ErrorCode::undefined, "segment undefined for spacelike legs");
    const double span = std::sqrt(2.0 * pq);
    const double residual =
        std::abs(segment_length(wf, p, r) + segment_length(wf, r, q) - span) / span;
    return {residual <= tol, residual};
}

std::string shape_name(const Shape& shape) {
    struct {
        std::string operator()(const TubeShape&) const { return "tube"; }
        std::string operator()(const PlaneShape&) const { return "plane"; }
        std::string operator()(const SegmentShape&) const { return "segment"; }
        std::string operator()(const SectionShape&) const { return "section"; }
        std::string operator()(const BrokenLineShape&) const { return "broken_line"; }
    } visitor;
    return std::visit(visitor, shape);
}

ObjectSample sample_object(const ObjectSpec& spec, const PointChart& chart, unsigned workers) {
    require_chart(spec.wf, chart);
    require_tolerance(spec.tol);
    const auto& wf = spec.wf;
    ObjectSample sample{spec, chart, {}, {}, 0};

    auto segment_rule = [&]() {
        if (spec.tol.rule != MembershipRule::relative) {
            throw Error(ErrorCode::invalid_argument, "segments only support the relative rule");
        }
    };

    PointTest test;
    if (const auto* tube = std::get_if<TubeShape>(&spec.shape)) {
        std::vector<Point> axis{tube->p0, tube->p1};
        require_nondegenerate(wf, axis, default_gram_tol, "lightlike or coincident axis");
        test = gram_test(wf, std::move(axis), spec.tol);
    } else if (const auto* plane = std::get_if<PlaneShape>(&spec.shape)) {
        require_nondegenerate(wf, plane->points, default_gram_tol, "determining points linearly dependent");
        test = gram_test(wf, plane->points, spec.tol);
    } else if (const auto* seg = std::get_if<SegmentShape>(&spec.shape)) {
        segment_rule();
        const double pq = wf(seg->p, seg->q);
        if (!(pq > 0.0)) throw Error(ErrorCode::undefined, "segment undefined for spacelike legs");
        const double span = std::sqrt(2.0 * pq);
        test = [wf, s = *seg, span, tol = spec.tol.value](const Point& r) -> std::optional<double> {
            auto res = segment_residual(wf, s.p, s.q, span, r);
            if (!res || *res > tol) return std::nullopt;
            return res;
        };
    } else if (const auto* sec = std::get_if<SectionShape>(&spec.shape)) {
        segment_rule();
        if (!tube_membership(wf, sec->p0, sec->p1, sec->anchor).member) {
            throw Error(ErrorCode::degenerate, "section point does not lie on the tube");
        }
        const double s0 = wf(sec->p0, sec->anchor);
        const double s1 = wf(sec->p1, sec->anchor);
        test = [wf, s = *sec, s0, s1, tol = spec.tol.value](const Point& r) -> std::optional<double> {
            const double res = section_residual(wf, s.p0, s.p1, s0, s1, r);
            if (!(res <= tol)) return std::nullopt;
            return res;
        };
    } else if (const auto* line = std::get_if<BrokenLineShape>(&spec.shape)) {
        segment_rule();
        if (line->vertices.size() < 2) {
            throw Error(ErrorCode::invalid_argument, "a broken line needs at least two vertices");
        }
        std::vector<double> spans;
        for (std::size_t k = 0; k + 1 < line->vertices.size(); ++k) {
            const double s = wf(line->vertices[k], line->vertices[k + 1]);
            if (!(s > 0.0)) throw Error(ErrorCode::undefined, "segment undefined for spacelike legs");
            spans.push_back(std::sqrt(2.0 * s));
        }
        test = [wf, v = line->vertices, spans, tol = spec.tol.value](const Point& r) -> std::optional<double> {
            std::optional<double> best;
            for (std::size_t k = 0; k < spans.size(); ++k) {
                auto res = segment_residual(wf, v[k], v[k + 1], spans[k], r);
                if (res && *res <= tol && (!best || *res < *best)) best = res;
            }
            return best;
        };
    }
    sweep(sample, test, workers);
    return sample;
}

ObjectSample section(const WorldFunction& wf, const Point& p0, const Point& p1, const Point& p,
                     const PointChart& chart, double tol, double tube_tol, unsigned workers) {
    if (!tube_membership(wf, p0, p1, p, tube_tol).member) {
        throw Error(ErrorCode::degenerate, "section point does not lie on the tube");
    }
    return sample_object({SectionShape{p0, p1, p}, wf, Tolerance::relative(tol)}, chart, workers);
}

ObjectSample broken_line(const WorldFunction& wf, std::span<const Point> vertices,
                         const PointChart& chart, double tol, unsigned workers) {
    BrokenLineShape shape{std::vector<Point>(vertices.begin(), vertices.end())};
    return sample_object({std::move(shape), wf, Tolerance::relative(tol)}, chart, workers);
}

DefinitenessReport definiteness_check(const WorldFunction& wf, const Point& p0, const Point& p1,
                                      const PointChart& chart, Tolerance tol, std::size_t trials,
                                      std::uint64_t seed, unsigned workers) {
    DefinitenessReport report;
    const auto tube = sample_object({TubeShape{p0, p1}, wf, tol}, chart, workers);
    report.tube_members = tube.members.size();
    if (trials == 0) return report;
    if (tube.members.size() < 2) throw Error(ErrorCode::degenerate, "tube sample too sparse");

    const std::set<Point> members(tube.members.begin(), tube.members.end());
    const std::vector<Point> axis{p0, p1};
    SeededSampler rng(seed);
    const std::size_t max_draws = 64;

    for (std::size_t t = 0; t < trials; ++t) {
        std::optional<std::pair<Point, Point>> pick;
        for (std::size_t draw = 0; draw < max_draws && !pick; ++draw) {
            const auto& q0 = tube.members[rng.index(tube.members.size())];
            const auto& q1 = tube.members[rng.index(tube.members.size())];
            if (q0 == q1) continue;
            try {
                if (!is_linearly_dependent(gram(wf, q0, std::span(&q1, 1)), default_gram_tol).dependent) {
                    pick.emplace(q0, q1);
                }
            } catch (const Error& e) {
                if (e.code() != ErrorCode::undefined) throw;
            }
        }
        if (!pick) continue;
        ++report.trials;
        const auto sub = sample_object({TubeShape{pick->first, pick->second}, wf, tol}, chart, workers);
        bool ok = true;
        for (const auto& r : sub.members) {
            if (members.contains(r)) continue;
            ok = false;
            double residual = 0.0;
            if (tol.rule == MembershipRule::relative) {
                residual = gram_zero(wf, axis, r, tol.value).residual;
            } else {
                residual = std::sqrt(std::abs(plane_height2(wf, axis, r)));
            }
            report.worst_residual = std::max(report.worst_residual, residual);
        }
        ok ? ++report.passed : ++report.failed;
    }
    return report;
}

}  // namespace tgeom
