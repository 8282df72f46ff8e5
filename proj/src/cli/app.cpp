#include "cli/app.hpp"

#include "cli/commands.hpp"
#include "tgeom/error.hpp"
#include "tgeom/parallel.hpp"

#include <algorithm>
#include <functional>

#include <CLI11.hpp>

namespace tgeom::cli {

namespace {

void geometry_flags(CLI::App* sub, GeometryFlags& g) {
    sub->add_option("--geometry", g.geometry, "Geometry spec: JSON, JSON file, or a kind name");
    sub->add_option("--dim", g.dim, "Dimension for a bare kind name");
    sub->add_option("--d0", g.d0, "Deformation lump d0 (deformed geometry)");
    sub->add_option("--sigma0", g.sigma0, "Gap edge sigma0 (deformed geometry; defaults to d0)");
    sub->add_option("--gap-policy", g.gap_policy, "error | linear_ramp (deformed geometry)");
}

void object_flags(CLI::App* sub, ObjectOptions& o) {
    geometry_flags(sub, o.geo);
    sub->add_option("--chart", o.chart, "Chart: JSON, JSON file, or 'lo,hi,resolution'")->capture_default_str();
    sub->add_option("--tol", o.tol, "Relative Gram tolerance")->capture_default_str();
    sub->add_option("--band", o.band, "Admit points whose height over the object is within this distance");
    sub->add_option("--center", o.center, "Centre of the dimension-estimate window");
    sub->add_option("--window", o.window, "Radius of the dimension-estimate window");
    sub->add_option("--out", o.out, "CSV output path (stdout if omitted)");
    sub->add_option("--summary", o.summary, "JSON summary path");
    sub->add_option("--workers", o.workers, "Worker threads");
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    Io io{out, err};
    CLI::App app{"World-function geometry engine"};
    app.name("tgeom");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    const unsigned workers = default_workers();
    std::function<int()> action;

    ObjectOptions tube, plane, segment, sect;
    for (auto* o : {&tube, &plane, &segment, &sect}) o->workers = workers;
    {
        auto* s = app.add_subcommand("tube", "Sample the tube F2(P0, P1, R) = 0 on a chart");
        object_flags(s, tube);
        s->add_option("--p0", tube.p0, "Axis point P0")->required();
        s->add_option("--p1", tube.p1, "Axis point P1")->required();
        s->callback([&] { action = [&] { return cmd_tube(tube, io); }; });
    }
    {
        auto* s = app.add_subcommand("plane", "Sample the plane of a determining set on a chart");
        object_flags(s, plane);
        s->add_option("--point", plane.points, "Determining point (repeat)")->required();
        s->callback([&] { action = [&] { return cmd_plane(plane, io); }; });
    }
    {
        auto* s = app.add_subcommand("segment", "Sample the segment S(P,R) + S(R,Q) = S(P,Q)");
        object_flags(s, segment);
        s->add_option("--p", segment.p, "End point P")->required();
        s->add_option("--q", segment.q, "End point Q")->required();
        s->add_option("--segment-tol", segment.segment_tol, "Relative triangle-equality tolerance")
            ->capture_default_str();
        s->callback([&] { action = [&] { return cmd_segment(segment, io); }; });
    }
    {
        auto* s = app.add_subcommand("section", "Sample the section of a tube through a point");
        object_flags(s, sect);
        s->add_option("--p0", sect.p0, "Axis point P0")->required();
        s->add_option("--p1", sect.p1, "Axis point P1")->required();
        s->add_option("--p", sect.p, "Tube point defining the section")->required();
        s->add_option("--segment-tol", sect.segment_tol, "Relative tolerance on the two sigma values")
            ->capture_default_str();
        s->callback([&] { action = [&] { return cmd_section(sect, io); }; });
    }

    RiemannOptions rv;
    rv.workers = workers;
    {
        auto* s = app.add_subcommand("riemann-verify", "Check the Riemannian constraint system by finite differences");
        s->add_option("--metric", rv.metric, "flat | minkowski | sphere | conformal")->capture_default_str();
        geometry_flags(s, rv.geo);
        s->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
        s->add_option("--pairs", rv.pairs, "Number of random pairs")->capture_default_str();
        s->add_option("--h", rv.h, "Finite-difference step (default 1e-3 * pair-box extent)");
        s->add_flag("--h-sweep", rv.h_sweep, "Run steps 4h, 2h, h and report convergence orders");
        s->add_option("--seed", rv.seed, "Seed for pair selection")->capture_default_str();
        s->add_option("--threshold", rv.threshold, "Residual threshold")->capture_default_str();
        s->add_option("--min-order", rv.min_order, "Minimum observed order in a sweep")->capture_default_str();
        s->add_option("--out", rv.out, "Report path (stdout if omitted)");
        s->add_option("--workers", rv.workers, "Worker threads");
        s->callback([&, s] {
            rv.use_geometry = s->count("--geometry") > 0;
            action = [&] { return cmd_riemann_verify(rv, io); };
        });
    }

    GeodesicCliOptions geo;
    {
        auto* s = app.add_subcommand("geodesic", "Solve the geodesic boundary-value problem between two points");
        s->add_option("--metric", geo.metric, "flat | minkowski | sphere | conformal")->capture_default_str();
        s->add_option("--x", geo.x, "End point x")->required();
        s->add_option("--xp", geo.xp, "Start point x'")->required();
        s->add_option("--b", geo.b, "Direction b for the algebraic geodesic");
        s->add_option("--taus", geo.taus, "Parameter values for the algebraic geodesic");
        s->add_flag("--path", geo.path, "Include the discretised path");
        s->add_flag("--probe-alternate", geo.probe_alternate, "Also look for a second geodesic");
        s->add_option("--steps", geo.steps, "RK4 steps")->capture_default_str();
        s->add_option("--out", geo.out, "Output path (stdout if omitted)");
        s->callback([&] { action = [&] { return cmd_geodesic(geo, io); }; });
    }

    ConvexityOptions cx;
    {
        auto* s = app.add_subcommand("convexity-demo", "Cut-plane versus Euclidean world function on lattice pairs");
        s->add_option("--chart", cx.chart, "Chart: JSON, JSON file, or 'lo,hi,resolution'")->capture_default_str();
        s->add_option("--pair", cx.pairs, "Extra pair 'px,py,qx,qy' (repeat)");
        s->add_flag("--pairs-miss-only", cx.miss_only, "Only pairs whose chord misses the disk");
        s->add_option("--tol", cx.tol, "Tolerance for the miss class")->capture_default_str();
        s->add_option("--out", cx.out, "CSV path (stdout if omitted)");
        s->callback([&] { action = [&] { return cmd_convexity_demo(cx, io); }; });
    }

    WitnessOptions pw;
    {
        auto* s = app.add_subcommand("parallel-witness", "Seeded search for a || b, b || c, a not || c");
        geometry_flags(s, pw.geo);
        s->add_option("--seed", pw.seed, "Search seed (required)");
        s->add_option("--budget", pw.budget, "Number of trials")->capture_default_str();
        s->add_option("--tol", pw.tol, "Parallelism tolerance on |cos|")->capture_default_str();
        s->add_option("--tail-box", pw.tail_box, "Range 'lo,hi' per axis for vector tails");
        s->add_option("--displacement-box", pw.displacement_box, "Range 'lo,hi' per axis for the first vector");
        s->add_option("--out", pw.out, "Output path (stdout if omitted)");
        s->callback([&] { action = [&] { return cmd_parallel_witness(pw, io); }; });
    }

    AxiomsOptions ax;
    ax.workers = workers;
    {
        auto* s = app.add_subcommand("axioms", "Check sigma-space and metric-space axioms on a point set");
        geometry_flags(s, ax.geo);
        s->add_option("--points", ax.points, "Chart shorthand/JSON, JSON point array, or CSV file")
            ->capture_default_str();
        s->add_option("--seed", ax.seed, "Seed for subsampling large sets")->capture_default_str();
        s->add_option("--cap", ax.cap, "Triple-sweep point cap")->capture_default_str();
        s->add_option("--out", ax.out, "Report path (stdout if omitted)");
        s->add_option("--workers", ax.workers, "Worker threads");
        s->callback([&] { action = [&] { return cmd_axioms(ax, io); }; });
    }

    ThicknessOptions th;
    {
        auto* s = app.add_subcommand("thickness", "Radius of the deformed tube along a transverse ray");
        s->add_option("--d0", th.d0, "Deformation lump d0")->capture_default_str();
        s->add_option("--sigma0", th.sigma0, "Gap edge sigma0 (defaults to d0)");
        s->add_option("--gap-policy", th.gap_policy, "error | linear_ramp")->capture_default_str();
        s->add_option("--p0", th.p0, "Axis point P0")->capture_default_str();
        s->add_option("--p1", th.p1, "Axis point P1")->capture_default_str();
        s->add_option("--base", th.base, "Ray origin on the axis line")->capture_default_str();
        s->add_option("--direction", th.direction, "Transverse direction")->capture_default_str();
        s->add_option("--bounds", th.bounds, "Search interval 'lo,hi' for the offset")->capture_default_str();
        s->add_option("--samples", th.samples, "Bracketing grid size")->capture_default_str();
        s->add_option("--out", th.out, "Output path (stdout if omitted)");
        s->callback([&] { action = [&] { return cmd_thickness(th, io); }; });
    }

    try {
        args = merge_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        // Prints help for --help, or the message plus a usage hint.
        return app.exit(e, out, err) == 0 ? Exit::ok : Exit::usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return Exit::usage;
    }

    try {
        return action();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::chart_mismatch:
            case ErrorCode::invalid_argument: return Exit::usage;
            default: return Exit::numerical;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Exit::numerical;
    }
}

}  // namespace tgeom::cli
