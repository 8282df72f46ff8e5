#include "cli/commands.hpp"

#include "cli/app.hpp"
#include "tgeom/axioms.hpp"
#include "tgeom/error.hpp"
#include "tgeom/export.hpp"
#include "tgeom/geometry_spec.hpp"
#include "tgeom/objects.hpp"
#include "tgeom/random.hpp"
#include "tgeom/riemann.hpp"
#include "tgeom/spacetime.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tgeom::cli {

using nlohmann::json;

namespace {

void emit(const std::string& path, const std::string& content, Io io) {
    if (path.empty()) {
        io.out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::invalid_argument, "cannot write '" + path + "'");
    f << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json coords(const Point& p) { return std::vector<double>(p.coords().begin(), p.coords().end()); }

Tolerance tolerance(const ObjectOptions& o) {
    if (o.band) return Tolerance::band(*o.band);
    return Tolerance::relative(o.tol);
}

int finish_object(const ObjectOptions& o, const ObjectSample& s, bool with_dimension, Io io) {
    std::optional<DimensionEstimate> dim;
    json note;
    if (with_dimension && !s.members.empty()) {
        const std::size_t n = s.chart.dimension();
        std::vector<double> c(n);
        double diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& b = s.chart.bounds()[i];
            c[i] = 0.5 * (b.lo + b.hi);
            diag += (b.hi - b.lo) * (b.hi - b.lo);
        }
        const Point center = o.center.empty() ? Point(c) : parse_point(o.center, n);
        try {
            dim = estimate_dimension(s, center, o.window.value_or(std::sqrt(diag)));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::degenerate) throw;
            note = e.what();
        }
    }
    json summary = sample_summary(s, dim);
    if (!note.is_null()) summary["dimension_note"] = note;

    std::ostringstream csv;
    write_sample_csv(csv, s);
    emit(o.out, csv.str(), io);
    if (!o.summary.empty()) {
        emit(o.summary, dump(summary), io);
    } else if (!o.out.empty()) {
        io.out << dump(summary);
    }
    return Exit::ok;
}

}  // namespace

int cmd_tube(const ObjectOptions& o, Io io) {
    const auto wf = make_geometry(o.geo);
    const std::size_t n = wf.dimension();
    const auto chart = parse_chart(o.chart, n);
    const ObjectSpec spec{TubeShape{parse_point(o.p0, n), parse_point(o.p1, n)}, wf, tolerance(o)};
    return finish_object(o, sample_object(spec, chart, o.workers), true, io);
}

int cmd_plane(const ObjectOptions& o, Io io) {
    const auto wf = make_geometry(o.geo);
    const std::size_t n = wf.dimension();
    const auto chart = parse_chart(o.chart, n);
    PlaneShape shape;
    for (const auto& p : o.points) shape.points.push_back(parse_point(p, n));
    if (shape.points.size() < 2) throw Error(ErrorCode::invalid_argument, "plane needs at least two --point");
    return finish_object(o, sample_object({shape, wf, tolerance(o)}, chart, o.workers), true, io);
}

int cmd_segment(const ObjectOptions& o, Io io) {
    const auto wf = make_geometry(o.geo);
    const std::size_t n = wf.dimension();
    const auto chart = parse_chart(o.chart, n);
    const ObjectSpec spec{SegmentShape{parse_point(o.p, n), parse_point(o.q, n)}, wf,
                          Tolerance::relative(o.segment_tol)};
    return finish_object(o, sample_object(spec, chart, o.workers), true, io);
}

int cmd_section(const ObjectOptions& o, Io io) {
    const auto wf = make_geometry(o.geo);
    const std::size_t n = wf.dimension();
    const auto chart = parse_chart(o.chart, n);
    const auto s = section(wf, parse_point(o.p0, n), parse_point(o.p1, n), parse_point(o.p, n), chart,
                           o.segment_tol, o.tol, o.workers);
    return finish_object(o, s, false, io);
}

// -- riemann-verify -------------------------------------------------------------

namespace {

MetricField metric_by_name(const std::string& name, std::size_t n) {
    if (name == "flat") return MetricField::flat_euclidean(n);
    if (name == "minkowski") return MetricField::flat_minkowski(n);
    if (n != 2) throw Error(ErrorCode::chart_mismatch, "chart mismatch: metric '" + name + "' is two-dimensional");
    return MetricField::from_name(name);
}

SigmaSource analytic_flat(const MetricField& m) {
    const bool lorentz = m.kind() == MetricKind::flat_minkowski;
    auto fn = [lorentz](const VecL& x, const VecL& xp, VecL*) -> long double {
        const VecL d = x - xp;
        if (!lorentz) return 0.5L * d.squaredNorm();
        return 0.5L * (d.head(1).squaredNorm() - d.tail(d.size() - 1).squaredNorm());
    };
    return SigmaSource{m.dimension(), fn, [](const VecL&) { return true; }, m,
                       lorentz ? "minkowski" : "euclidean"};
}

SigmaSource source_for(const WorldFunction& wf) {
    const json spec = wf.to_json();
    switch (wf.kind()) {
        case GeometryKind::deformed: {
            const auto& p = spec.at("params");
            DeformedParams d;
            d.d0 = p.at("d0").get<double>();
            d.sigma0 = p.at("sigma0").get<double>();
            d.gap_policy = gap_policy_from_string(p.at("gap_policy").get<std::string>());
            d.base_dimension = wf.dimension();
            return deformed_source(d);
        }
        case GeometryKind::riemann_induced: return metric_source(metric_from_json(spec.at("params")));
        case GeometryKind::euclidean: return analytic_flat(MetricField::flat_euclidean(wf.dimension()));
        case GeometryKind::minkowski: return analytic_flat(MetricField::flat_minkowski(wf.dimension()));
        default:
            throw Error(ErrorCode::invalid_argument,
                        "geometry '" + to_string(wf.kind()) + "' has no differentiable world function");
    }
}

struct PairBox {
    std::vector<AxisRange> box;
    bool timelike_deformed = false;
};

// Verification pairs live in a box of unit-order extent so that the default
// step 1e-3 * extent keeps the fourth-order differences above round-off.
PairBox pair_box(const SigmaSource& s) {
    const std::size_t n = s.dimension;
    if (s.name == "deformed") return {std::vector<AxisRange>(n, {0.0, 1.0}), true};
    switch (s.metric.kind()) {
        case MetricKind::unit_sphere: return {{{0.5, std::numbers::pi - 0.5}, {-1.0, 1.0}}, false};
        case MetricKind::conformal_flat: return {{{-1.0, 1.0}, {-1.0, 1.0}}, false};
        default: return {std::vector<AxisRange>(n, {0.0, 1.0}), false};
    }
}

std::vector<std::pair<Point, Point>> draw_pairs(const PairBox& box, std::size_t count, std::uint64_t seed,
                                                double margin) {
    SeededSampler rng(seed);
    const std::size_t n = box.box.size();
    std::vector<std::pair<Point, Point>> pairs;
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = rng.uniform(box.box[i].lo + margin, box.box[i].hi - margin);
        if (box.timelike_deformed) {
            // sigma_M drawn in [0.5, 2], clear of the gap for any sigma0 below 0.5.
            const double target = rng.uniform(0.5, 2.0);
            double space = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                b[i] = a[i] + rng.uniform(-0.5, 0.5);
                space += (b[i] - a[i]) * (b[i] - a[i]);
            }
            b[0] = a[0] + std::sqrt(2.0 * target + space);
        } else {
            for (std::size_t i = 0; i < n; ++i) b[i] = rng.uniform(box.box[i].lo + margin, box.box[i].hi - margin);
        }
        pairs.push_back({Point(b), Point(a)});
    }
    return pairs;
}

}  // namespace

int cmd_riemann_verify(const RiemannOptions& o, Io io) {
    const SigmaSource source =
        o.use_geometry ? source_for(make_geometry(o.geo)) : metric_source(metric_by_name(o.metric, o.geo.dim.value_or(2)));
    const PairBox box = pair_box(source);
    double extent = 0.0;
    for (const auto& r : box.box) extent = std::max(extent, r.hi - r.lo);
    const double h = o.h.value_or(1e-3 * extent);
    if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "--h must be positive");
    if (o.pairs == 0) throw Error(ErrorCode::invalid_argument, "--pairs must be positive");
    // Stencils reach 3h in x (12h at the coarsest sweep level).
    const auto pairs = draw_pairs(box, o.pairs, o.seed, (o.h_sweep ? 16.0 : 4.0) * h);

    if (!o.h_sweep) {
        const auto rep = riemann_consistency(source, pairs, h, o.workers);
        json j = rep.to_json();
        j["threshold"] = o.threshold;
        j["pass"] = rep.within(o.threshold);
        emit(o.out, dump(j), io);
        return rep.within(o.threshold) ? Exit::ok : Exit::fails;
    }
    const auto rep = h_sweep(source, pairs, {4 * h, 2 * h, h}, o.workers, o.threshold);
    const auto& fine = rep.levels.back();
    const bool pass = rep.converges(o.min_order) && fine.max_symmetry <= o.threshold &&
                      fine.max_diagonal <= o.threshold;
    json j = rep.to_json();
    j["min_order"] = o.min_order;
    j["threshold"] = o.threshold;
    j["pass"] = pass;
    emit(o.out, dump(j), io);
    return pass ? Exit::ok : Exit::fails;
}

int cmd_geodesic(const GeodesicCliOptions& o, Io io) {
    const auto xv = parse_reals(o.x);
    const auto m = metric_by_name(o.metric, xv.size());
    const Point x = parse_point(o.x, m.dimension()), xp = parse_point(o.xp, m.dimension());
    GeodesicOptions go;
    go.steps = o.steps;
    go.store_path = o.path;
    go.probe_alternate = o.probe_alternate;
    if (go.steps < 8) throw Error(ErrorCode::invalid_argument, "--steps must be at least 8");
    const auto sol = solve_geodesic(m, x, xp, go);
    json j{{"metric", m.to_json()},
           {"x", coords(x)},
           {"xp", coords(xp)},
           {"length", sol.length},
           {"sigma", sol.sigma},
           {"converged", sol.converged},
           {"residual", sol.residual},
           {"initial_velocity", sol.initial_velocity},
           {"alternate_length", sol.alternate_length ? json(*sol.alternate_length) : json(nullptr)}};
    if (o.path) {
        auto path = json::array();
        for (const auto& p : sol.path) path.push_back(coords(p));
        j["path"] = path;
    }
    if (!o.b.empty() || !o.taus.empty()) {
        if (o.b.empty() || o.taus.empty()) throw Error(ErrorCode::invalid_argument, "--b and --taus go together");
        const auto pts = geodesic_from_algebraic(metric_source(m), xp, parse_reals(o.b), parse_reals(o.taus));
        auto arr = json::array();
        for (const auto& p : pts) arr.push_back(coords(p));
        j["algebraic"] = {{"b", parse_reals(o.b)}, {"taus", parse_reals(o.taus)}, {"points", arr}};
    }
    emit(o.out, dump(j), io);
    return sol.converged ? Exit::ok : Exit::numerical;
}

int cmd_convexity_demo(const ConvexityOptions& o, Io io) {
    const CutPlaneModel model;
    const auto chart = parse_chart(o.chart, 2);
    auto rep = convexity_discrepancy(model, chart, o.tol);
    const auto euclid = euclidean(2);
    for (const auto& text : o.pairs) {
        const auto v = parse_reals(text);
        if (v.size() != 4) throw Error(ErrorCode::invalid_argument, "--pair needs 'px,py,qx,qy'");
        const Point p{v[0], v[1]}, q{v[2], v[3]};
        ConvexityRow row{p, q, model.chord_crosses_disk(p, q), cutplane_sigma(model, p, q), euclid(p, q), 0.0};
        row.discrepancy = row.sigma_cut - row.sigma_euclid;
        rep.rows.push_back(row);
    }
    std::ostringstream csv;
    csv << "px,py,qx,qy,crosses_disk,sigma_cut,sigma_euclid,discrepancy\n";
    for (const auto& r : rep.rows) {
        if (o.miss_only && r.crosses) continue;
        csv << format_real(r.p[0]) << ',' << format_real(r.p[1]) << ',' << format_real(r.q[0]) << ','
            << format_real(r.q[1]) << ',' << (r.crosses ? "true" : "false") << ',' << format_real(r.sigma_cut)
            << ',' << format_real(r.sigma_euclid) << ',' << format_real(r.discrepancy) << '\n';
    }
    emit(o.out, csv.str(), io);
    return Exit::ok;
}

int cmd_parallel_witness(const WitnessOptions& o, Io io) {
    if (!o.seed) throw Error(ErrorCode::invalid_argument, "--seed is required for randomized searches");
    const auto wf = make_geometry(o.geo);
    const std::size_t n = wf.dimension();
    const bool lorentzian = wf.kind() == GeometryKind::minkowski || wf.kind() == GeometryKind::deformed;
    WitnessSearchConfig cfg;
    cfg.seed = *o.seed;
    cfg.budget = o.budget;
    cfg.tol = o.tol;
    auto boxes = [&](const std::vector<std::string>& given, bool displacement) {
        std::vector<AxisRange> b;
        if (!given.empty()) {
            for (const auto& g : given) b.push_back(parse_range(g));
            if (b.size() != n) throw Error(ErrorCode::chart_mismatch, "chart mismatch: box needs one range per axis");
            return b;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (displacement && lorentzian) {
                b.push_back(i == 0 ? AxisRange{1.0, 2.0} : AxisRange{-0.5, 0.5});
            } else {
                b.push_back({-1.0, 1.0});
            }
        }
        return b;
    };
    cfg.tail_box = boxes(o.tail_box, false);
    cfg.displacement_box = boxes(o.displacement_box, true);
    const auto res = find_intransitive_parallel(wf, cfg);
    json j{{"geometry", wf.to_json()},
           {"seed", cfg.seed},
           {"budget", cfg.budget},
           {"tol", cfg.tol},
           {"trials", res.trials},
           {"chains", res.chains},
           {"found", res.witness.has_value()}};
    if (res.witness) {
        const auto& w = *res.witness;
        auto vec = [](const BoundVector& v) { return json{{"tail", coords(v.tail)}, {"head", coords(v.head)}}; };
        j["witness"] = {{"trial", w.trial},
                        {"a", vec(w.a)},
                        {"b", vec(w.b)},
                        {"c", vec(w.c)},
                        {"cos_ab", w.cos_ab},
                        {"cos_bc", w.cos_bc},
                        {"cos_ac", w.cos_ac}};
    }
    emit(o.out, dump(j), io);
    return res.witness ? Exit::ok : Exit::fails;
}

int cmd_axioms(const AxiomsOptions& o, Io io) {
    const auto wf = make_geometry(o.geo);
    auto points = parse_point_set(o.points, wf.dimension());
    std::size_t dropped = 0;
    if (wf.kind() == GeometryKind::cutplane) {
        // The cut plane is only defined on the open region outside the disk.
        std::vector<Point> kept;
        for (auto& p : points) {
            if (CutPlaneModel::in_open_region(p)) kept.push_back(std::move(p));
        }
        dropped = points.size() - kept.size();
        points = std::move(kept);
    }
    const auto space = check_sigma_space(wf, points);
    const auto metric = check_metric_axioms(wf, points, o.seed, o.cap, o.workers);
    const bool hold = space.all_hold() && metric.all_hold();
    json j{{"geometry", wf.to_json()},
           {"points_outside_region", dropped},
           {"sigma_space", space.to_json()},
           {"metric_space", metric.to_json()},
           {"all_hold", hold}};
    emit(o.out, dump(j), io);
    return hold ? Exit::ok : Exit::fails;
}

int cmd_thickness(const ThicknessOptions& o, Io io) {
    const auto p0v = parse_reals(o.p0);
    DeformedParams params;
    params.d0 = o.d0;
    params.sigma0 = o.sigma0.value_or(o.d0);
    params.base_dimension = p0v.size();
    params.gap_policy = gap_policy_from_string(o.gap_policy);
    params.validate();
    const std::size_t n = params.base_dimension;
    ThicknessQuery q{parse_point(o.p0, n), parse_point(o.p1, n), parse_point(o.base, n), parse_reals(o.direction),
                     parse_range(o.bounds), o.samples};
    const auto r = tube_thickness(params, q);
    json j{{"d0", params.d0},
           {"sigma0", params.sigma0},
           {"gap_policy", to_string(params.gap_policy)},
           {"thickness", r.thickness},
           {"found", r.found},
           {"bracket", {r.bracket_lo, r.bracket_hi}},
           {"f_bracket", {r.f_lo, r.f_hi}},
           {"residual", r.residual}};
    emit(o.out, dump(j), io);
    return Exit::ok;
}

}  // namespace tgeom::cli
