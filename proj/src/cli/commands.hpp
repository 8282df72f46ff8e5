#pragma once

#include "cli/options.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tgeom::cli {

struct Io {
    std::ostream& out;
    std::ostream& err;
};

struct ObjectOptions {
    GeometryFlags geo;
    std::string chart = "-1,1,64";
    std::string p0, p1, p, q;
    std::vector<std::string> points;
    double tol = 1e-8;
    std::optional<double> band;
    double segment_tol = 1e-9;
    std::string center;
    std::optional<double> window;
    std::string out, summary;
    unsigned workers = 1;
};

int cmd_tube(const ObjectOptions& o, Io io);
int cmd_plane(const ObjectOptions& o, Io io);
int cmd_segment(const ObjectOptions& o, Io io);
int cmd_section(const ObjectOptions& o, Io io);

struct RiemannOptions {
    std::string metric = "flat";
    GeometryFlags geo;
    bool use_geometry = false;
    std::size_t pairs = 20;
    std::optional<double> h;
    bool h_sweep = false;
    std::uint64_t seed = 1;
    double threshold = 1e-6;
    double min_order = 1.8;
    std::string out;
    unsigned workers = 1;
};

int cmd_riemann_verify(const RiemannOptions& o, Io io);

struct GeodesicCliOptions {
    std::string metric = "flat";
    std::string x, xp;
    std::string b;
    std::string taus;
    bool path = false;
    std::size_t steps = 512;
    bool probe_alternate = false;
    std::string out;
};

int cmd_geodesic(const GeodesicCliOptions& o, Io io);

struct ConvexityOptions {
    std::string chart = "-3,3,7";
    std::vector<std::string> pairs;
    bool miss_only = false;
    double tol = 1e-12;
    std::string out;
};

int cmd_convexity_demo(const ConvexityOptions& o, Io io);

struct WitnessOptions {
    GeometryFlags geo;
    std::optional<std::uint64_t> seed;
    std::uint64_t budget = 100000;
    double tol = 1e-9;
    std::vector<std::string> tail_box, displacement_box;
    std::string out;
};

int cmd_parallel_witness(const WitnessOptions& o, Io io);

struct AxiomsOptions {
    GeometryFlags geo;
    std::string points = "-2,2,5";
    std::uint64_t seed = 0;
    std::size_t cap = 200;
    std::string out;
    unsigned workers = 1;
};

int cmd_axioms(const AxiomsOptions& o, Io io);

struct ThicknessOptions {
    double d0 = 0.1;
    std::optional<double> sigma0;
    std::string gap_policy = "error";
    std::string p0 = "0,0,0,0", p1 = "1,0,0,0", base = "3,0,0,0", direction = "0,1,0,0";
    std::string bounds = "0,2";
    std::size_t samples = 2000;
    std::string out;
};

int cmd_thickness(const ThicknessOptions& o, Io io);

}  // namespace tgeom::cli
