#pragma once

// Checks a label map against the four formal properties of a segmentation
// into regions R1..Rn over domain I, for a region predicate H:
//
//   (a) coverage      union of all Ri equals I (no unallocated site)
//   (b) disjointness  Ri and Rj share no site
//   (c) homogeneity   H(Ri) holds for every region
//   (d) maximality    H(Ri u Rj) fails for every adjacent pair
//
// Two regions are adjacent when some site of one is a neighbor (under the
// chosen neighborhood) of some site of the other.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srg/criterion_text.hpp"
#include "srg/error.hpp"
#include "srg/gradient.hpp"
#include "srg/grid.hpp"
#include "srg/label_map.hpp"

namespace srg {

struct RegionPredicate {
    enum class Kind { MaxDeviation, MaxGradientInterior };

    Kind kind = Kind::MaxDeviation;
    double param = 0.0;  // t for MaxDeviation, k for MaxGradientInterior

    [[nodiscard]] static RegionPredicate max_deviation(double t) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("deviation bound t must be finite and >= 0");
        return {Kind::MaxDeviation, t};
    }

    [[nodiscard]] static RegionPredicate max_gradient_interior(double k) {
        if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("gradient fraction k must be finite and > 0");
        return {Kind::MaxGradientInterior, k};
    }

    friend bool operator==(const RegionPredicate&, const RegionPredicate&) = default;
};

// "dev:t=<number>" or "grad:k=<number>".
[[nodiscard]] inline RegionPredicate parse_predicate(std::string_view text) {
    auto value_after = [&](std::string_view prefix) -> std::optional<double> {
        if (!text.starts_with(prefix)) return std::nullopt;
        const std::string_view rest = text.substr(prefix.size());
        double v = 0.0;
        const auto res = std::from_chars(rest.data(), rest.data() + rest.size(), v);
        if (res.ec != std::errc{} || res.ptr != rest.data() + rest.size()) {
            throw ConfigError("predicate '" + std::string(text) + "': malformed number");
        }
        return v;
    };
    if (auto t = value_after("dev:t=")) return RegionPredicate::max_deviation(*t);
    if (auto k = value_after("grad:k=")) return RegionPredicate::max_gradient_interior(*k);
    throw ConfigError("unknown predicate '" + std::string(text) + "' (expected dev:t=<n> or grad:k=<n>)");
}

[[nodiscard]] inline std::string format_predicate(const RegionPredicate& p) {
    return p.kind == RegionPredicate::Kind::MaxDeviation ? "dev:t=" + format_number(p.param)
                                                         : "grad:k=" + format_number(p.param);
}

struct RegionPair {
    Label first = 0;
    Label second = 0;
    friend auto operator<=>(const RegionPair&, const RegionPair&) = default;
};

struct Counterexample {
    char property = 'a';  // 'a'..'d'
    std::optional<Label> region;
    std::optional<RegionPair> pair;
    std::vector<Site> sites;
    std::string detail;

    friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct PropertyReport {
    static constexpr std::size_t kMaxCounterexamples = 10;

    bool covers_domain = true;
    bool disjoint = true;
    std::vector<std::pair<Label, bool>> per_region_homogeneous;
    std::vector<std::pair<RegionPair, bool>> merged_adjacent_inhomogeneous;
    std::vector<Counterexample> counterexamples;

    [[nodiscard]] bool all_homogeneous() const noexcept {
        return std::all_of(per_region_homogeneous.begin(), per_region_homogeneous.end(),
                           [](const auto& e) { return e.second; });
    }
    [[nodiscard]] bool all_maximal() const noexcept {
        return std::all_of(merged_adjacent_inhomogeneous.begin(), merged_adjacent_inhomogeneous.end(),
                           [](const auto& e) { return e.second; });
    }
    [[nodiscard]] bool all_hold() const noexcept {
        return covers_domain && disjoint && all_homogeneous() && all_maximal();
    }

    friend bool operator==(const PropertyReport&, const PropertyReport&) = default;
};

namespace detail {

struct PredicateVerdict {
    bool holds = true;
    std::vector<Site> offenders;  // capped at the report's counterexample limit
    std::string detail;
};

// Evaluates H over `members` (sorted linear indices).
inline PredicateVerdict evaluate_predicate(const RegionPredicate& pred, const ScalarGrid& grid,
                                           const GradientField* grad, const std::vector<std::size_t>& members,
                                           Neighborhood nb) {
    PredicateVerdict v;
    if (members.empty()) return v;
    const GridDims& dims = grid.dims();
    auto offend = [&](std::size_t i) {
        v.holds = false;
        if (v.offenders.size() < PropertyReport::kMaxCounterexamples) v.offenders.push_back(site_at(dims, i));
    };

    if (pred.kind == RegionPredicate::Kind::MaxDeviation) {
        double sum = 0.0;
        for (std::size_t i : members) sum += grid[i];
        const double mean = sum / static_cast<double>(members.size());
        double worst = 0.0;
        for (std::size_t i : members) {
            const double dev = std::abs(grid[i] - mean);
            worst = std::max(worst, dev);
            if (dev > pred.param) offend(i);
        }
        v.detail = "max deviation " + format_number(worst) + " from mean " + format_number(mean) + ", bound " +
                   format_number(pred.param);
        return v;
    }

    const double limit = pred.param * grad->gmax();
    for (std::size_t i : members) {
        bool interior = true;
        for_each_neighbor(dims, i, nb, [&](std::size_t n) {
            if (!std::binary_search(members.begin(), members.end(), n)) interior = false;
        });
        if (interior && grad->gmax() != 0.0 && !(grad->magnitude(i) < limit)) offend(i);
    }
    v.detail = "interior gradient bound " + format_number(limit);
    return v;
}

}  // namespace detail

[[nodiscard]] inline PropertyReport check_properties(const ScalarGrid& grid, const LabelMap& labels,
                                                     const RegionPredicate& pred, Neighborhood nb) {
    const GridDims& dims = grid.dims();
    if (labels.dims() != dims) {
        throw ConfigError("label map " + labels.dims().describe() + " does not match grid " + dims.describe());
    }
    check_compatible(dims, nb);

    std::optional<GradientField> grad;
    if (pred.kind == RegionPredicate::Kind::MaxGradientInterior) grad = compute_gradient(grid);
    const GradientField* gp = grad ? &*grad : nullptr;

    PropertyReport report;
    const std::size_t q = labels.region_count();
    std::vector<std::vector<std::size_t>> members(q + 1);
    for (std::size_t i = 0; i < dims.site_count(); ++i) members[labels[i]].push_back(i);

    // (a)
    if (!members[kUnallocated].empty()) {
        report.covers_domain = false;
        Counterexample c{'a', std::nullopt, std::nullopt, {}, ""};
        for (std::size_t i : members[kUnallocated]) {
            if (c.sites.size() == PropertyReport::kMaxCounterexamples) break;
            c.sites.push_back(site_at(dims, i));
        }
        c.detail = std::to_string(members[kUnallocated].size()) + " unallocated sites";
        report.counterexamples.push_back(std::move(c));
    }

    // (b) Each site carries one label, so overlap can only show up as region
    // bookkeeping that disagrees with the label array.
    {
        std::size_t stats_total = 0;
        std::size_t reported = 0;
        for (Label r = 1; r <= q; ++r) {
            const std::size_t counted = members[r].size();
            const std::size_t recorded = labels.stats(r).size;
            stats_total += recorded;
            if (counted != recorded) {
                report.disjoint = false;
                if (reported++ < PropertyReport::kMaxCounterexamples) {
                    report.counterexamples.push_back(Counterexample{
                        'b', r, std::nullopt, {},
                        "region stats record " + std::to_string(recorded) + " sites, label array holds " +
                            std::to_string(counted)});
                }
            }
        }
        const std::size_t labeled = dims.site_count() - members[kUnallocated].size();
        if (stats_total != labeled) {
            report.disjoint = false;
            if (reported < PropertyReport::kMaxCounterexamples) {
                report.counterexamples.push_back(Counterexample{
                    'b', std::nullopt, std::nullopt, {},
                    "region sizes sum to " + std::to_string(stats_total) + ", labeled sites " + std::to_string(labeled)});
            }
        }
    }

    // (c)
    std::size_t c_reported = 0;
    for (Label r = 1; r <= q; ++r) {
        auto verdict = detail::evaluate_predicate(pred, grid, gp, members[r], nb);
        report.per_region_homogeneous.emplace_back(r, verdict.holds);
        if (!verdict.holds && c_reported++ < PropertyReport::kMaxCounterexamples) {
            report.counterexamples.push_back(
                Counterexample{'c', r, std::nullopt, std::move(verdict.offenders), std::move(verdict.detail)});
        }
    }

    // (d)
    std::set<RegionPair> adjacent;
    for (std::size_t i = 0; i < dims.site_count(); ++i) {
        const Label a = labels[i];
        if (a == kUnallocated) continue;
        for_each_neighbor(dims, i, nb, [&](std::size_t n) {
            const Label b = labels[n];
            if (b != kUnallocated && b != a) adjacent.insert(RegionPair{std::min(a, b), std::max(a, b)});
        });
    }
    std::size_t d_reported = 0;
    for (const RegionPair& p : adjacent) {
        std::vector<std::size_t> merged;
        merged.reserve(members[p.first].size() + members[p.second].size());
        std::merge(members[p.first].begin(), members[p.first].end(), members[p.second].begin(),
                   members[p.second].end(), std::back_inserter(merged));
        auto verdict = detail::evaluate_predicate(pred, grid, gp, merged, nb);
        const bool maximal = !verdict.holds;
        report.merged_adjacent_inhomogeneous.emplace_back(p, maximal);
        if (!maximal && d_reported++ < PropertyReport::kMaxCounterexamples) {
            report.counterexamples.push_back(Counterexample{'d', std::nullopt, p, {},
                                                            "union still homogeneous: " + verdict.detail});
        }
    }
    return report;
}

}  // namespace srg
