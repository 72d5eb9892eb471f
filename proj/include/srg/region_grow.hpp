#pragma once

// Seeded region growing engines.
//
// grow_classic: best-first multi-seed growth. The frontier is every
// unallocated site adjacent to a labeled region; each step allocates the
// (site, region) pair with the smallest delta = |g(site) - mean(region)|,
// ties broken by the tick at which the pair entered the frontier. Runs
// until every site is allocated.
//
// grow_stack: criterion-gated LIFO flood, one seed at a time in input
// order. A site already claimed by an earlier region is never relabeled.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srg/error.hpp"
#include "srg/gradient.hpp"
#include "srg/grid.hpp"
#include "srg/homogeneity.hpp"
#include "srg/label_map.hpp"

namespace srg {

class SeedSet {
public:
    SeedSet() = default;

    explicit SeedSet(std::vector<Site> sites) : sites_(std::move(sites)) {
        if (sites_.empty()) throw ConfigError("at least one seed is required");
    }

    SeedSet(std::initializer_list<Site> sites) : SeedSet(std::vector<Site>(sites)) {}

    [[nodiscard]] std::size_t size() const noexcept { return sites_.size(); }
    [[nodiscard]] const Site& site(std::size_t i) const { return sites_.at(i); }
    [[nodiscard]] Label region_of(std::size_t i) const noexcept { return static_cast<Label>(i + 1); }
    [[nodiscard]] const std::vector<Site>& sites() const noexcept { return sites_; }

    // Bounds-checks every seed and rejects duplicates; returns linear indices.
    [[nodiscard]] std::vector<std::size_t> resolve(const GridDims& dims) const {
        std::vector<std::size_t> out;
        out.reserve(sites_.size());
        for (std::size_t i = 0; i < sites_.size(); ++i) {
            if (!dims.contains(sites_[i])) {
                try {
                    check_site(dims, sites_[i]);
                } catch (const BoundsError& e) {
                    throw BoundsError("seed " + std::to_string(i + 1) + ": " + e.what());
                }
            }
            const std::size_t idx = site_index(dims, sites_[i]);
            for (std::size_t j = 0; j < out.size(); ++j) {
                if (out[j] == idx) {
                    throw ConfigError("seed " + std::to_string(i + 1) + " duplicates seed " + std::to_string(j + 1) +
                                      " at " + to_string(sites_[i]));
                }
            }
            out.push_back(idx);
        }
        return out;
    }

    friend bool operator==(const SeedSet&, const SeedSet&) = default;

private:
    std::vector<Site> sites_;
};

enum class Engine { Classic, Stack };
enum class Termination { FrontierExhausted, AllSitesAllocated };

[[nodiscard]] inline std::string_view to_string(Engine e) noexcept {
    return e == Engine::Classic ? "classic" : "stack";
}

[[nodiscard]] inline Engine parse_engine(std::string_view text) {
    if (text == "classic") return Engine::Classic;
    if (text == "stack") return Engine::Stack;
    throw ConfigError("unknown engine '" + std::string(text) + "' (expected classic or stack)");
}

[[nodiscard]] inline std::string_view to_string(Termination t) noexcept {
    return t == Termination::AllSitesAllocated ? "all_sites_allocated" : "frontier_exhausted";
}

struct GrowReport {
    Engine engine = Engine::Classic;
    std::optional<CriterionConfig> criterion;  // stack engine only
    SeedSet seeds;
    Neighborhood neighborhood = Neighborhood::N4;
    std::size_t sites_examined = 0;
    std::size_t sites_accepted = 0;
    Termination termination = Termination::FrontierExhausted;

    friend bool operator==(const GrowReport&, const GrowReport&) = default;
};

struct GrowResult {
    LabelMap labels;
    GrowReport report;
};

// A candidate allocation in the classic engine: `site` joins `target_region`
// at dissimilarity `delta`. `tick` orders pairs by when they entered the
// frontier and breaks delta ties.
struct FrontierEntry {
    std::size_t site = 0;
    double delta = 0.0;
    Label target_region = 0;
    std::uint64_t tick = 0;
};

namespace detail {

// Frontier of the classic engine.
//
// Deltas go stale whenever a region's mean moves, so instead of keying a
// single heap by delta, each region keeps its frontier ordered by intensity.
// The region's best candidate is then the intensity group nearest its
// current mean, found by binary search. A small heap over regions holds each
// region's current best; only regions whose mean or frontier changed in a
// step are re-evaluated.
class ClassicFrontier {
public:
    ClassicFrontier(const ScalarGrid& grid, const LabelMap& labels)
        : grid_(grid), labels_(labels), per_region_(labels.region_count()),
          version_(labels.region_count(), 0), entries_(grid.size()) {}

    // Adds (site, region) unless that pair is already present.
    bool insert(std::size_t site, Label region) {
        for (const auto& e : entries_[site]) {
            if (e.first == region) return false;
        }
        const std::uint64_t tick = next_tick_++;
        per_region_[region - 1].insert(Key{grid_[site], tick, site});
        entries_[site].emplace_back(region, tick);
        return true;
    }

    // Drops every pair for `site`, appending the regions it was queued for.
    void erase_site(std::size_t site, std::vector<Label>& touched) {
        for (const auto& [region, tick] : entries_[site]) {
            per_region_[region - 1].erase(Key{grid_[site], tick, site});
            touched.push_back(region);
        }
        entries_[site].clear();
        entries_[site].shrink_to_fit();
    }

    void refresh(Label region) {
        ++version_[region - 1];
        if (auto best = best_of(region)) heap_.push(Candidate{*best, version_[region - 1]});
    }

    std::optional<FrontierEntry> pop() {
        while (!heap_.empty()) {
            const Candidate c = heap_.top();
            heap_.pop();
            if (c.version == version_[c.entry.target_region - 1]) return c.entry;
        }
        return std::nullopt;
    }

private:
    struct Key {
        double intensity;
        std::uint64_t tick;
        std::size_t site;
        bool operator<(const Key& o) const noexcept {
            if (intensity != o.intensity) return intensity < o.intensity;
            return tick < o.tick;
        }
    };
    using KeySet = std::set<Key>;

    struct Candidate {
        FrontierEntry entry;
        std::uint64_t version;
    };
    struct Later {
        bool operator()(const Candidate& a, const Candidate& b) const noexcept {
            if (a.entry.delta != b.entry.delta) return a.entry.delta > b.entry.delta;
            return a.entry.tick > b.entry.tick;
        }
    };

    // Minimum (delta, tick) over the region's frontier.
    std::optional<FrontierEntry> best_of(Label region) const {
        const KeySet& set = per_region_[region - 1];
        if (set.empty()) return std::nullopt;
        const double mean = labels_.stats(region).mean();
        std::optional<FrontierEntry> best;
        auto consider = [&](const Key& k) {
            const double delta = std::abs(k.intensity - mean);
            if (!best || delta < best->delta || (delta == best->delta && k.tick < best->tick)) {
                best = FrontierEntry{k.site, delta, region, k.tick};
            }
        };
        constexpr auto kMaxTick = std::numeric_limits<std::uint64_t>::max();

        // Groups at or above the mean, nearest first. The first key of a
        // group carries its smallest tick. Further groups only matter while
        // rounding keeps their delta equal to the nearest group's.
        auto it = set.lower_bound(Key{mean, 0, 0});
        for (std::optional<double> first_delta; it != set.end(); it = set.upper_bound(Key{it->intensity, kMaxTick, 0})) {
            const double delta = std::abs(it->intensity - mean);
            if (first_delta && delta != *first_delta) break;
            first_delta = delta;
            consider(*it);
        }
        // Groups below the mean, nearest first.
        auto hi = set.lower_bound(Key{mean, 0, 0});
        for (std::optional<double> first_delta; hi != set.begin();) {
            const double g = std::prev(hi)->intensity;
            auto group = set.lower_bound(Key{g, 0, 0});
            const double delta = std::abs(g - mean);
            if (first_delta && delta != *first_delta) break;
            first_delta = delta;
            consider(*group);
            hi = group;
        }
        return best;
    }

    const ScalarGrid& grid_;
    const LabelMap& labels_;
    std::vector<KeySet> per_region_;
    std::vector<std::uint64_t> version_;
    std::vector<std::vector<std::pair<Label, std::uint64_t>>> entries_;
    std::priority_queue<Candidate, std::vector<Candidate>, Later> heap_;
    std::uint64_t next_tick_ = 0;
};

inline void sort_unique(std::vector<Label>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace detail

[[nodiscard]] inline GrowResult grow_classic(const ScalarGrid& grid, const SeedSet& seeds, Neighborhood nb) {
    const GridDims& dims = grid.dims();
    check_compatible(dims, nb);
    const std::vector<std::size_t> seed_index = seeds.resolve(dims);

    GrowResult out{LabelMap(dims, seeds.size()), GrowReport{}};
    LabelMap& labels = out.labels;
    GrowReport& report = out.report;
    report.engine = Engine::Classic;
    report.seeds = seeds;
    report.neighborhood = nb;

    for (std::size_t i = 0; i < seed_index.size(); ++i) {
        labels.assign(seed_index[i], seeds.region_of(i), grid[seed_index[i]]);
    }
    report.sites_examined = seed_index.size();
    report.sites_accepted = seed_index.size();

    detail::ClassicFrontier frontier(grid, labels);
    std::vector<Label> dirty;
    auto push_neighbors = [&](std::size_t site, Label region) {
        for_each_neighbor(dims, site, nb, [&](std::size_t n) {
            if (labels[n] == kUnallocated && frontier.insert(n, region)) {
                ++report.sites_examined;
                dirty.push_back(region);
            }
        });
    };

    for (std::size_t i = 0; i < seed_index.size(); ++i) push_neighbors(seed_index[i], seeds.region_of(i));
    for (std::size_t r = 1; r <= seeds.size(); ++r) frontier.refresh(static_cast<Label>(r));
    dirty.clear();

    while (auto next = frontier.pop()) {
        labels.assign(next->site, next->target_region, grid[next->site]);
        ++report.sites_accepted;
        dirty.push_back(next->target_region);
        frontier.erase_site(next->site, dirty);
        push_neighbors(next->site, next->target_region);
        detail::sort_unique(dirty);
        for (Label r : dirty) frontier.refresh(r);
        dirty.clear();
    }

    report.termination = labels.allocated_count() == dims.site_count() ? Termination::AllSitesAllocated
                                                                        : Termination::FrontierExhausted;
    return out;
}

[[nodiscard]] inline GrowResult grow_classic(const ScalarGrid& grid, const SeedSet& seeds) {
    return grow_classic(grid, seeds, default_neighborhood(grid.dims(), true));
}

// `grad` may be default-constructed when the criterion does not read
// gradients.
[[nodiscard]] inline GrowResult grow_stack(const ScalarGrid& grid, const GradientField& grad, const SeedSet& seeds,
                                           Neighborhood nb, const CriterionConfig& cfg) {
    const GridDims& dims = grid.dims();
    check_compatible(dims, nb);
    cfg.validate();
    const bool use_gradient = cfg.needs_gradient();
    if (use_gradient && grad.dims() != dims) {
        throw ConfigError("gradient field " + grad.dims().describe() + " does not match grid " + dims.describe());
    }
    const std::vector<std::size_t> seed_index = seeds.resolve(dims);

    GrowResult out{LabelMap(dims, seeds.size()), GrowReport{}};
    LabelMap& labels = out.labels;
    GrowReport& report = out.report;
    report.engine = Engine::Stack;
    report.criterion = cfg;
    report.seeds = seeds;
    report.neighborhood = nb;

    const double gmax = use_gradient ? grad.gmax() : 0.0;
    const double gmin = use_gradient ? grad.gmin() : 0.0;
    std::vector<std::size_t> stack;

    for (std::size_t r = 0; r < seed_index.size(); ++r) {
        const Label region = seeds.region_of(r);
        ++report.sites_examined;
        if (labels[seed_index[r]] != kUnallocated) continue;  // claimed by an earlier seed's region
        stack.push_back(seed_index[r]);
        while (!stack.empty()) {
            const std::size_t site = stack.back();
            stack.pop_back();
            if (labels[site] != kUnallocated) continue;
            labels.assign(site, region, grid[site]);
            ++report.sites_accepted;
            const double mean = labels.stats(region).mean();
            for_each_neighbor(dims, site, nb, [&](std::size_t n) {
                if (labels[n] != kUnallocated) return;
                ++report.sites_examined;
                AdmissionContext ctx;
                ctx.candidate = site_at(dims, n);
                ctx.region_mean = mean;
                ctx.intensity = grid[n];
                ctx.grad_mag = use_gradient ? grad.magnitude(n) : 0.0;
                ctx.gmax = gmax;
                ctx.gmin = gmin;
                if (admit(cfg, ctx)) stack.push_back(n);
            });
        }
    }

    report.termination = labels.allocated_count() == dims.site_count() ? Termination::AllSitesAllocated
                                                                        : Termination::FrontierExhausted;
    return out;
}

[[nodiscard]] inline GrowResult grow_stack(const ScalarGrid& grid, const SeedSet& seeds, const CriterionConfig& cfg) {
    const GradientField grad = cfg.needs_gradient() ? compute_gradient(grid) : GradientField{};
    return grow_stack(grid, grad, seeds, default_neighborhood(grid.dims(), false), cfg);
}

}  // namespace srg
