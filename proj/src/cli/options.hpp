#pragma once

#include "tgeom/point.hpp"
#include "tgeom/world_function.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tgeom::cli {

/// "1,2.5,-3" -> {1, 2.5, -3}.
std::vector<double> parse_reals(const std::string& text);
Point parse_point(const std::string& text, std::size_t dimension);
/// "lo,hi" -> AxisRange.
AxisRange parse_range(const std::string& text);

/// Chart from inline JSON, a JSON file, or the cube shorthand "lo,hi,res".
PointChart parse_chart(const std::string& text, std::size_t dimension);

/// Expands `--config file.json` into flags appended after the existing ones.
/// Flags given on the command line win over config keys.
std::vector<std::string> merge_config(std::vector<std::string> args);

struct GeometryFlags {
    std::string geometry = "euclidean";
    std::optional<std::size_t> dim;
    std::optional<double> d0, sigma0;
    std::optional<std::string> gap_policy;
};

WorldFunction make_geometry(const GeometryFlags& flags);

/// Point list from a JSON array of coordinate arrays, a CSV file with one point
/// per row (header optional), or a chart.
std::vector<Point> parse_point_set(const std::string& text, std::size_t dimension);

}  // namespace tgeom::cli
