#include "tgeom/export.hpp"

#include "tgeom/geometry_spec.hpp"
#include "tgeom/parallel.hpp"

#include <cstdlib>
#include <string>

#include <fmt/format.h>

namespace tgeom {

unsigned default_workers() {
    if (const char* env = std::getenv("TGEOM_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<unsigned>(v);
    }
    return 1;
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void write_sample_csv(std::ostream& out, const ObjectSample& sample) {
    const std::size_t n = sample.chart.dimension();
    for (std::size_t i = 0; i < n; ++i) out << 'x' << i << ',';
    out << "residual\n";
    for (std::size_t k = 0; k < sample.members.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) out << format_real(sample.members[k][i]) << ',';
        out << format_real(sample.residuals[k]) << '\n';
    }
}

nlohmann::json sample_summary(const ObjectSample& sample, const std::optional<DimensionEstimate>& dim) {
    nlohmann::json j{{"spec",
                      {{"object", shape_name(sample.spec.shape)},
                       {"geometry", sample.spec.wf.to_json()},
                       {"tolerance",
                        {{"rule", sample.spec.tol.rule == MembershipRule::relative ? "relative" : "band"},
                         {"value", sample.spec.tol.value}}}}},
                     {"chart", chart_to_json(sample.chart)},
                     {"lattice_points", sample.chart.lattice_size()},
                     {"member_count", sample.members.size()},
                     {"undefined", sample.undefined}};
    if (dim) {
        j["dimension_estimate"] = {{"value", dim->value},
                          {"method", dim->method},
                          {"window", dim->window},
                          {"support", dim->support},
                          {"spreads", dim->spreads}};
    } else {
        j["dimension_estimate"] = nullptr;
    }
    return j;
}

}  // namespace tgeom
