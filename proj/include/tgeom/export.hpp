#pragma once

#include "tgeom/objects.hpp"

#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace tgeom {

/// 17 significant digits: round-trips every double.
std::string format_real(double v);

/// Header x0,...,x{n-1},residual then one row per member.
void write_sample_csv(std::ostream& out, const ObjectSample& sample);

nlohmann::json sample_summary(const ObjectSample& sample, const std::optional<DimensionEstimate>& dim);

}  // namespace tgeom
