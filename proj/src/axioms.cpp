#include "tgeom/axioms.hpp"

#include "tgeom/error.hpp"
#include "tgeom/parallel.hpp"
#include "tgeom/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tgeom {

std::string to_string(AxiomStatus s) {
    switch (s) {
        case AxiomStatus::holds: return "holds";
        case AxiomStatus::fails: return "fails";
        case AxiomStatus::not_applicable: return "not applicable";
    }
    return "unknown";
}

bool AxiomReport::all_hold() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const auto& a) { return a.status == AxiomStatus::holds; });
}

const AxiomResult& AxiomReport::at(const std::string& name) const {
    for (const auto& a : axioms) {
        if (a.name == name) return a;
    }
    throw Error(ErrorCode::invalid_argument, "no axiom named '" + name + "' in report");
}

nlohmann::json AxiomReport::to_json() const {
    auto list = nlohmann::json::array();
    for (const auto& a : axioms) {
        auto ws = nlohmann::json::array();
        for (const auto& w : a.witnesses) {
            auto pts = nlohmann::json::array();
            for (const auto& p : w.points) pts.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
            ws.push_back({{"points", pts}, {"values", w.values}, {"note", w.note}});
        }
        list.push_back({{"axiom", a.name},
                        {"status", to_string(a.status)},
                        {"tested", a.tested},
                        {"violations", a.violations},
                        {"witnesses", ws}});
    }
    return {{"points", points}, {"sampled", sampled}, {"all_hold", all_hold()}, {"axioms", list}};
}

namespace {

AxiomResult named(const char* name) {
    AxiomResult r;
    r.name = name;
    return r;
}

void record(AxiomResult& r, AxiomWitness w) {
    ++r.violations;
    r.status = AxiomStatus::fails;
    if (r.witnesses.size() < max_witnesses) r.witnesses.push_back(std::move(w));
}

}  // namespace

AxiomReport check_sigma_space(const WorldFunction& wf, const std::vector<Point>& points) {
    if (points.empty()) throw Error(ErrorCode::invalid_argument, "axiom check needs a nonempty point set");
    AxiomResult diag = named("zero_diagonal"), sym = named("symmetry"), fin = named("finite");
    const std::size_t n = points.size();
    std::vector<double> s(n * n, 0.0);
    std::vector<char> ok(n * n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            try {
                s[i * n + j] = wf(points[i], points[j]);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::chart_mismatch) throw;
                ok[i * n + j] = 0;
            }
            ++fin.tested;
            if (!ok[i * n + j] || !std::isfinite(s[i * n + j])) {
                ok[i * n + j] = 0;
                record(fin, {{points[i], points[j]}, {s[i * n + j]}, "sigma not a finite real value"});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        ++diag.tested;
        if (ok[i * n + i] && s[i * n + i] != 0.0) record(diag, {{points[i]}, {s[i * n + i]}, "sigma(P,P) != 0"});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!ok[i * n + j] || !ok[j * n + i]) continue;
            ++sym.tested;
            if (s[i * n + j] != s[j * n + i]) {
                record(sym, {{points[i], points[j]}, {s[i * n + j], s[j * n + i]}, "sigma(P,Q) != sigma(Q,P)"});
            }
        }
    }
    AxiomReport rep;
    rep.points = n;
    rep.axioms = {std::move(diag), std::move(sym), std::move(fin)};
    return rep;
}

AxiomReport check_metric_axioms(const WorldFunction& wf, const std::vector<Point>& all_points, std::uint64_t seed,
                                std::size_t cap, unsigned workers) {
    if (all_points.empty()) throw Error(ErrorCode::invalid_argument, "axiom check needs a nonempty point set");
    if (cap < 3) throw Error(ErrorCode::invalid_argument, "triple-sweep cap must be at least 3");
    AxiomReport rep;
    std::vector<Point> points = all_points;
    if (points.size() > cap) {
        std::vector<std::size_t> idx(points.size());
        std::iota(idx.begin(), idx.end(), 0);
        SeededSampler rng(seed);
        for (std::size_t i = 0; i < cap; ++i) std::swap(idx[i], idx[i + rng.index(idx.size() - i)]);
        idx.resize(cap);
        std::sort(idx.begin(), idx.end());
        std::vector<Point> sub;
        for (auto i : idx) sub.push_back(all_points[i]);
        points = std::move(sub);
        rep.sampled = true;
    }
    const std::size_t n = points.size();
    rep.points = n;

    std::vector<double> sigma(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) sigma[i * n + j] = wf(points[i], points[j]);
    }

    AxiomResult nonneg = named("nonnegativity"), ident = named("identity_of_indiscernibles"),
                tri = named("triangle_inequality");
    for (std::size_t i = 0; i < n && nonneg.violations == 0; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ++nonneg.tested;
            if (!(sigma[i * n + j] >= 0.0)) {
                record(nonneg, {{points[i], points[j]}, {sigma[i * n + j]}, "negative sigma: rho undefined"});
                break;
            }
        }
    }
    if (nonneg.violations > 0) {
        ident.status = AxiomStatus::not_applicable;
        tri.status = AxiomStatus::not_applicable;
        rep.axioms = {std::move(nonneg), std::move(ident), std::move(tri)};
        return rep;
    }

    std::vector<double> rho(n * n);
    for (std::size_t k = 0; k < n * n; ++k) rho[k] = std::sqrt(2.0 * sigma[k]);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ++ident.tested;
            const bool same = points[i] == points[j];
            const double r = rho[i * n + j];
            if (same != (r == 0.0)) {
                record(ident, {{points[i], points[j]}, {r}, same ? "rho(P,P) != 0" : "rho(P,Q) = 0 for P != Q"});
            }
        }
    }

    struct Partial {
        std::size_t tested = 0, violations = 0;
        std::vector<AxiomWitness> witnesses;
    };
    auto chunks = parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
        Partial part;
        for (std::size_t p = begin; p < end; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                for (std::size_t r = 0; r < n; ++r) {
                    ++part.tested;
                    const double lhs = rho[p * n + q] + rho[q * n + r];
                    const double rhs = rho[p * n + r];
                    if (lhs < rhs - 1e-12 * std::max(1.0, rhs)) {
                        ++part.violations;
                        if (part.witnesses.size() < max_witnesses) {
                            part.witnesses.push_back({{points[p], points[q], points[r]},
                                                      {rho[p * n + q], rho[q * n + r], rhs},
                                                      "rho(P,Q) + rho(Q,R) < rho(P,R)"});
                        }
                    }
                }
            }
        }
        return part;
    });
    for (auto& c : chunks) {
        tri.tested += c.tested;
        tri.violations += c.violations;
        for (auto& w : c.witnesses) {
            if (tri.witnesses.size() < max_witnesses) tri.witnesses.push_back(std::move(w));
        }
    }
    if (tri.violations > 0) tri.status = AxiomStatus::fails;

    rep.axioms = {std::move(nonneg), std::move(ident), std::move(tri)};
    return rep;
}

}  // namespace tgeom
