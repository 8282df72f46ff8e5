#include "cli/options.hpp"

#include "tgeom/error.hpp"
#include "tgeom/geometry_spec.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tgeom::cli {

using nlohmann::json;

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

json load_json(const std::string& text, const std::string& what) {
    try {
        if (!text.empty() && (text.front() == '{' || text.front() == '[')) return json::parse(text);
        std::ifstream in(text);
        if (!in) throw Error(ErrorCode::invalid_argument, "cannot open " + what + " '" + text + "'");
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_argument, "malformed " + what + ": " + e.what());
    }
}

}  // namespace

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw Error(ErrorCode::invalid_argument, "not a number list: '" + text + "'");
        }
        out.push_back(v);
    }
    return out;
}

Point parse_point(const std::string& text, std::size_t dimension) {
    auto c = parse_reals(text);
    if (c.size() != dimension) {
        throw Error(ErrorCode::chart_mismatch,
                    "chart mismatch: point '" + text + "' needs " + std::to_string(dimension) + " coordinates");
    }
    return Point(std::move(c));
}

AxisRange parse_range(const std::string& text) {
    const auto v = parse_reals(text);
    if (v.size() != 2) throw Error(ErrorCode::invalid_argument, "range needs 'lo,hi': '" + text + "'");
    return {v[0], v[1]};
}

PointChart parse_chart(const std::string& text, std::size_t dimension) {
    if (!text.empty() && text.front() != '{' && !std::filesystem::is_regular_file(text)) {
        const auto v = parse_reals(text);
        if (v.size() != 3 || v[2] < 2 || v[2] != static_cast<double>(static_cast<std::size_t>(v[2]))) {
            throw Error(ErrorCode::invalid_argument, "chart shorthand is 'lo,hi,resolution': '" + text + "'");
        }
        return PointChart::cube(dimension, {v[0], v[1]}, static_cast<std::size_t>(v[2]));
    }
    auto chart = chart_from_json(load_json(text, "chart spec"));
    if (chart.dimension() != dimension) {
        throw Error(ErrorCode::chart_mismatch, "chart mismatch: chart and geometry dimensions differ");
    }
    return chart;
}

std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw Error(ErrorCode::invalid_argument, "--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!path) return rest;
    const json cfg = load_json(*path, "config file");
    if (!cfg.is_object()) throw Error(ErrorCode::invalid_argument, "config file must hold a JSON object");

    auto given = [&](const std::string& flag) {
        return std::any_of(rest.begin(), rest.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    auto scalar = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_array()) {
            std::string s;
            for (const auto& e : v) s += (s.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
            return s;
        }
        return v.dump();
    };
    std::vector<std::string> extra;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const std::string flag = "--" + it.key();
        if (given(flag)) continue;
        const json& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) extra.push_back(flag);
        } else if (v.is_array() && !v.empty() && (v.front().is_array() || v.front().is_string())) {
            for (const auto& e : v) {
                extra.push_back(flag);
                extra.push_back(scalar(e));
            }
        } else {
            extra.push_back(flag);
            extra.push_back(scalar(v));
        }
    }
    rest.insert(rest.end(), extra.begin(), extra.end());
    return rest;
}

WorldFunction make_geometry(const GeometryFlags& f) {
    const bool shorthand = !f.geometry.empty() && f.geometry.front() != '{' &&
                           !std::filesystem::is_regular_file(f.geometry);
    if (shorthand && f.geometry == "deformed") {
        json spec{{"kind", "deformed"}, {"dimension", f.dim.value_or(4)}, {"params", json::object()}};
        if (f.d0) spec["params"]["d0"] = *f.d0;
        if (f.sigma0) spec["params"]["sigma0"] = *f.sigma0;
        if (f.gap_policy) spec["params"]["gap_policy"] = *f.gap_policy;
        return geometry_from_json(spec);
    }
    if (f.d0 || f.sigma0 || f.gap_policy) {
        throw Error(ErrorCode::invalid_argument, "--d0/--sigma0/--gap-policy only apply to --geometry deformed");
    }
    return parse_geometry(f.geometry, f.dim);
}

std::vector<Point> parse_point_set(const std::string& text, std::size_t dimension) {
    const bool file = std::filesystem::is_regular_file(text);
    if (file && text.size() > 4 && text.substr(text.size() - 4) == ".csv") {
        std::ifstream in(text);
        std::vector<Point> pts;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty()) continue;
            if (first && std::any_of(line.begin(), line.end(), [](char c) { return std::isalpha(c) && c != 'e'; })) {
                first = false;
                continue;  // header
            }
            first = false;
            pts.push_back(parse_point(line, dimension));
        }
        return pts;
    }
    if ((!text.empty() && text.front() == '[') || (file && load_json(text, "point set").is_array())) {
        const json arr = load_json(text, "point set");
        std::vector<Point> pts;
        try {
            for (const auto& p : arr) {
                auto c = p.get<std::vector<double>>();
                if (c.size() != dimension) throw Error(ErrorCode::chart_mismatch, "chart mismatch: point set");
                pts.push_back(Point(std::move(c)));
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::invalid_argument, std::string("malformed point set: ") + e.what());
        }
        return pts;
    }
    return sample_chart(parse_chart(text, dimension));
}

}  // namespace tgeom::cli
