#pragma once

#include "tgeom/world_function.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tgeom {

enum class AxiomStatus { holds, fails, not_applicable };

std::string to_string(AxiomStatus s);

struct AxiomWitness {
    std::vector<Point> points;
    std::vector<double> values;  // the violating values, recomputable from the world function
    std::string note;
};

struct AxiomResult {
    std::string name;
    AxiomStatus status = AxiomStatus::holds;
    std::size_t tested = 0;      // tuples examined
    std::size_t violations = 0;  // all violating tuples; only the first few are kept as witnesses
    std::vector<AxiomWitness> witnesses;
};

struct AxiomReport {
    std::vector<AxiomResult> axioms;
    std::size_t points = 0;
    bool sampled = false;  // the point set was subsampled to the triple-sweep cap

    bool all_hold() const;
    const AxiomResult& at(const std::string& name) const;
    nlohmann::json to_json() const;
};

inline constexpr std::size_t max_witnesses = 8;
inline constexpr std::size_t triple_sweep_cap = 200;

/// Zero diagonal, exact symmetry and finiteness over all pairs.
AxiomReport check_sigma_space(const WorldFunction& wf, const std::vector<Point>& points);

/// Nonnegativity, identity of indiscernibles and the triangle inequality for
/// rho = sqrt(2 sigma). Sets larger than `cap` are subsampled with `seed`.
AxiomReport check_metric_axioms(const WorldFunction& wf, const std::vector<Point>& points,
                                std::uint64_t seed = 0, std::size_t cap = triple_sweep_cap,
                                unsigned workers = 1);

}  // namespace tgeom
