#pragma once

// Grid model shared by every module: dimensions, site addressing, the
// N4 / N8 / N6 neighborhood systems and the immutable intensity grid.
//
// Linearization is fixed: x varies fastest, then y, then z. Every iteration
// order in the library derives from it, so results never depend on hash or
// pointer order.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srg/error.hpp"

namespace srg {

using Coord = std::int64_t;

struct Site {
    Coord x = 0;
    Coord y = 0;
    Coord z = 0;

    friend bool operator==(const Site&, const Site&) = default;
};

inline std::string to_string(const Site& s) {
    return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + "," + std::to_string(s.z) + ")";
}

class GridDims {
public:
    GridDims() = default;

    GridDims(std::size_t width, std::size_t height, std::size_t depth = 1)
        : width_(width), height_(height), depth_(depth) {
        if (width == 0 || height == 0 || depth == 0) {
            throw ConfigError("grid dimensions must be positive, got " + describe());
        }
        constexpr auto limit = static_cast<std::size_t>(std::numeric_limits<Coord>::max());
        if (width > limit / height || width * height > limit / depth) {
            throw ConfigError("grid " + describe() + " exceeds the addressable site count");
        }
    }

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t depth() const noexcept { return depth_; }
    [[nodiscard]] std::size_t plane_size() const noexcept { return width_ * height_; }
    [[nodiscard]] std::size_t site_count() const noexcept { return width_ * height_ * depth_; }
    [[nodiscard]] bool is_volume() const noexcept { return depth_ > 1; }

    [[nodiscard]] bool contains(const Site& s) const noexcept {
        return s.x >= 0 && s.y >= 0 && s.z >= 0 && static_cast<std::size_t>(s.x) < width_ &&
               static_cast<std::size_t>(s.y) < height_ && static_cast<std::size_t>(s.z) < depth_;
    }

    [[nodiscard]] std::string describe() const {
        return std::to_string(width_) + "x" + std::to_string(height_) + "x" + std::to_string(depth_);
    }

    friend bool operator==(const GridDims&, const GridDims&) = default;

private:
    std::size_t width_ = 1;
    std::size_t height_ = 1;
    std::size_t depth_ = 1;
};

namespace detail {

inline void check_axis(const char* axis, Coord v, std::size_t extent, const Site& s) {
    if (v < 0 || static_cast<std::size_t>(v) >= extent) {
        throw BoundsError(std::string("site ") + to_string(s) + " out of bounds on " + axis + " axis: " + axis +
                          "=" + std::to_string(v) + " not in [0," + std::to_string(extent) + ")");
    }
}

}  // namespace detail

inline void check_site(const GridDims& dims, const Site& s) {
    detail::check_axis("x", s.x, dims.width(), s);
    detail::check_axis("y", s.y, dims.height(), s);
    detail::check_axis("z", s.z, dims.depth(), s);
}

[[nodiscard]] inline std::size_t site_index(const GridDims& dims, const Site& s) {
    check_site(dims, s);
    return static_cast<std::size_t>(s.x) + static_cast<std::size_t>(s.y) * dims.width() +
           static_cast<std::size_t>(s.z) * dims.plane_size();
}

[[nodiscard]] inline Site site_at(const GridDims& dims, std::size_t index) {
    if (index >= dims.site_count()) {
        throw BoundsError("linear index " + std::to_string(index) + " out of range for grid " + dims.describe());
    }
    const std::size_t z = index / dims.plane_size();
    const std::size_t rem = index % dims.plane_size();
    return Site{static_cast<Coord>(rem % dims.width()), static_cast<Coord>(rem / dims.width()), static_cast<Coord>(z)};
}

enum class Neighborhood { N4, N8, N6 };

[[nodiscard]] inline std::string_view to_string(Neighborhood nb) noexcept {
    switch (nb) {
        case Neighborhood::N4: return "n4";
        case Neighborhood::N8: return "n8";
        case Neighborhood::N6: return "n6";
    }
    return "?";
}

[[nodiscard]] inline Neighborhood parse_neighborhood(std::string_view text) {
    if (text == "n4" || text == "N4" || text == "4") return Neighborhood::N4;
    if (text == "n8" || text == "N8" || text == "8") return Neighborhood::N8;
    if (text == "n6" || text == "N6" || text == "6") return Neighborhood::N6;
    throw ConfigError("unknown neighborhood '" + std::string(text) + "' (expected n4, n8 or n6)");
}

struct Offset {
    int dx, dy, dz;
};

// Canonical order: left, right, top, bottom, then front (z+1), back (z-1) for
// N6, or the four in-plane diagonals in row-major order for N8.
[[nodiscard]] inline std::span<const Offset> offsets(Neighborhood nb) noexcept {
    static constexpr std::array<Offset, 4> n4{{{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}}};
    static constexpr std::array<Offset, 8> n8{
        {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}, {1, 1, 0}}};
    static constexpr std::array<Offset, 6> n6{
        {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}}};
    switch (nb) {
        case Neighborhood::N4: return n4;
        case Neighborhood::N8: return n8;
        case Neighborhood::N6: return n6;
    }
    return {};
}

inline void check_compatible(const GridDims& dims, Neighborhood nb) {
    const bool planar = nb != Neighborhood::N6;
    if (planar && dims.is_volume()) {
        throw ConfigError("neighborhood " + std::string(to_string(nb)) + " requires depth 1, grid is " +
                          dims.describe());
    }
    if (!planar && !dims.is_volume()) {
        throw ConfigError("neighborhood n6 requires depth > 1, grid is " + dims.describe());
    }
}

// Hot-loop form of neighbors(): visits in-bounds neighbors of the site at
// `index` in canonical order, passing each neighbor's linear index. No
// validation; callers check compatibility once up front.
template <typename Fn>
    requires std::invocable<Fn&, std::size_t>
inline void for_each_neighbor(const GridDims& dims, std::size_t index, Neighborhood nb, Fn&& fn) {
    const auto w = static_cast<Coord>(dims.width());
    const auto h = static_cast<Coord>(dims.height());
    const auto d = static_cast<Coord>(dims.depth());
    const auto plane = static_cast<Coord>(dims.plane_size());
    const auto z = static_cast<Coord>(index) / plane;
    const auto rem = static_cast<Coord>(index) % plane;
    const auto y = rem / w;
    const auto x = rem % w;
    for (const Offset& o : offsets(nb)) {
        const Coord nx = x + o.dx;
        const Coord ny = y + o.dy;
        const Coord nz = z + o.dz;
        if (nx < 0 || ny < 0 || nz < 0 || nx >= w || ny >= h || nz >= d) continue;
        fn(static_cast<std::size_t>(nx + ny * w + nz * plane));
    }
}

[[nodiscard]] inline std::vector<Site> neighbors(const GridDims& dims, const Site& s, Neighborhood nb) {
    check_site(dims, s);
    check_compatible(dims, nb);
    std::vector<Site> out;
    out.reserve(offsets(nb).size());
    for (const Offset& o : offsets(nb)) {
        const Site n{s.x + o.dx, s.y + o.dy, s.z + o.dz};
        if (dims.contains(n)) out.push_back(n);
    }
    return out;
}

// The conventional default per dimensionality and engine: the best-first
// engine uses the second-order (8-connected) neighborhood in 2D, the stack
// engine the 4-connected one. Volumes always use N6.
[[nodiscard]] inline Neighborhood default_neighborhood(const GridDims& dims, bool second_order) noexcept {
    if (dims.is_volume()) return Neighborhood::N6;
    return second_order ? Neighborhood::N8 : Neighborhood::N4;
}

// Immutable grid of finite intensities.
class ScalarGrid {
public:
    ScalarGrid() = default;

    ScalarGrid(GridDims dims, std::vector<double> values) : dims_(dims), values_(std::move(values)) {
        if (values_.size() != dims_.site_count()) {
            throw DataError("grid " + dims_.describe() + " needs " + std::to_string(dims_.site_count()) +
                            " values, got " + std::to_string(values_.size()));
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw DataError("non-finite intensity at site " + to_string(site_at(dims_, i)));
            }
        }
    }

    ScalarGrid(GridDims dims, double fill) : ScalarGrid(dims, std::vector<double>(dims.site_count(), fill)) {}

    template <typename T>
        requires std::integral<T>
    static ScalarGrid from_integers(GridDims dims, std::span<const T> raw) {
        return ScalarGrid(dims, std::vector<double>(raw.begin(), raw.end()));
    }

    [[nodiscard]] const GridDims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t index) const noexcept { return values_[index]; }
    [[nodiscard]] double at(const Site& s) const { return values_[site_index(dims_, s)]; }

    [[nodiscard]] std::pair<double, double> range() const noexcept {
        double lo = values_.empty() ? 0.0 : values_.front();
        double hi = lo;
        for (double v : values_) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return {lo, hi};
    }

    // Copy of the z-th plane as a 2D grid.
    [[nodiscard]] ScalarGrid slice(std::size_t z) const {
        if (z >= dims_.depth()) {
            throw BoundsError("slice z=" + std::to_string(z) + " out of range for grid " + dims_.describe());
        }
        const auto begin = values_.begin() + static_cast<std::ptrdiff_t>(z * dims_.plane_size());
        return ScalarGrid(GridDims(dims_.width(), dims_.height()),
                          std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(dims_.plane_size())));
    }

    friend bool operator==(const ScalarGrid&, const ScalarGrid&) = default;

private:
    GridDims dims_;
    std::vector<double> values_;
};

}  // namespace srg
