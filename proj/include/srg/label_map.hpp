#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srg/error.hpp"
#include "srg/grid.hpp"

namespace srg {

using Label = std::uint32_t;
inline constexpr Label kUnallocated = 0;

// Running statistics of one region, maintained from exact sums.
struct RegionStats {
    std::size_t size = 0;
    double sum = 0.0;
    std::array<double, 3> coord_sum{0.0, 0.0, 0.0};

    [[nodiscard]] double mean() const noexcept { return size ? sum / static_cast<double>(size) : 0.0; }

    [[nodiscard]] std::array<double, 3> centroid() const noexcept {
        if (!size) return {0.0, 0.0, 0.0};
        const auto n = static_cast<double>(size);
        return {coord_sum[0] / n, coord_sum[1] / n, coord_sum[2] / n};
    }

    void add(const Site& s, double intensity) noexcept {
        ++size;
        sum += intensity;
        coord_sum[0] += static_cast<double>(s.x);
        coord_sum[1] += static_cast<double>(s.y);
        coord_sum[2] += static_cast<double>(s.z);
    }

    friend bool operator==(const RegionStats&, const RegionStats&) = default;
};

class LabelMap {
public:
    LabelMap() = default;

    LabelMap(GridDims dims, std::size_t region_count)
        : dims_(dims), labels_(dims.site_count(), kUnallocated), stats_(region_count) {}

    // Rebuilds statistics for an existing label array, e.g. one read from disk.
    // The region count is the largest label present unless a larger one is given.
    [[nodiscard]] static LabelMap from_labels(const ScalarGrid& grid, std::vector<Label> labels,
                                              std::size_t region_count = 0) {
        if (labels.size() != grid.size()) {
            throw ConfigError("label array of " + std::to_string(labels.size()) + " entries does not match grid " +
                              grid.dims().describe());
        }
        for (Label l : labels) region_count = std::max<std::size_t>(region_count, l);
        LabelMap map(grid.dims(), region_count);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] != kUnallocated) map.assign(i, labels[i], grid[i]);
        }
        return map;
    }

    [[nodiscard]] const GridDims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t region_count() const noexcept { return stats_.size(); }
    [[nodiscard]] std::span<const Label> labels() const noexcept { return labels_; }
    [[nodiscard]] Label operator[](std::size_t index) const noexcept { return labels_[index]; }
    [[nodiscard]] Label at(const Site& s) const { return labels_[site_index(dims_, s)]; }

    // Region ids run from 1 to region_count().
    [[nodiscard]] const RegionStats& stats(Label region) const { return stats_.at(region - 1); }
    [[nodiscard]] std::span<const RegionStats> all_stats() const noexcept { return stats_; }

    [[nodiscard]] std::size_t allocated_count() const noexcept {
        std::size_t n = 0;
        for (const auto& s : stats_) n += s.size;
        return n;
    }

    // Allocates an unlabeled site to `region` and folds it into the stats.
    void assign(std::size_t index, Label region, double intensity) {
        if (region == kUnallocated || region > stats_.size()) {
            throw ConfigError("region id " + std::to_string(region) + " outside 1.." + std::to_string(stats_.size()));
        }
        if (labels_[index] != kUnallocated) {
            throw ConfigError("site " + to_string(site_at(dims_, index)) + " is already labeled");
        }
        labels_[index] = region;
        stats_[region - 1].add(site_at(dims_, index), intensity);
    }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    GridDims dims_;
    std::vector<Label> labels_;
    std::vector<RegionStats> stats_;
};

}  // namespace srg
