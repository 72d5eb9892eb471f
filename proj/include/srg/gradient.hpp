#pragma once

// Per-site gradient components, magnitudes and their global extrema.
//
// In-plane components come from an unnormalized 3x3 Sobel operator applied
// slice by slice; the depth component is the central difference
// g(z+1) - g(z-1). Borders replicate the edge value, so a flat frame never
// produces spurious maxima. The operator is selectable; CentralDifference
// uses g(x+1) - g(x-1) in-plane as well.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "srg/error.hpp"
#include "srg/grid.hpp"

namespace srg {

enum class GradientOperator { Sobel, CentralDifference };

[[nodiscard]] inline std::string_view to_string(GradientOperator op) noexcept {
    return op == GradientOperator::Sobel ? "sobel" : "central";
}

[[nodiscard]] inline GradientOperator parse_gradient_operator(std::string_view text) {
    if (text == "sobel") return GradientOperator::Sobel;
    if (text == "central") return GradientOperator::CentralDifference;
    throw ConfigError("unknown gradient operator '" + std::string(text) + "' (expected sobel or central)");
}

class GradientField {
public:
    GradientField() = default;

    GradientField(GridDims dims, std::vector<double> gx, std::vector<double> gy, std::vector<double> gz)
        : dims_(dims), gx_(std::move(gx)), gy_(std::move(gy)), gz_(std::move(gz)) {
        const std::size_t n = dims_.site_count();
        if (gx_.size() != n || gy_.size() != n || gz_.size() != n) {
            throw DataError("gradient components do not match grid " + dims_.describe());
        }
        mag_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(gx_[i]) || !std::isfinite(gy_[i]) || !std::isfinite(gz_[i])) {
                throw DataError("non-finite gradient component at site " + to_string(site_at(dims_, i)));
            }
            mag_[i] = std::sqrt(gx_[i] * gx_[i] + gy_[i] * gy_[i] + gz_[i] * gz_[i]);
        }
        const auto [lo, hi] = std::minmax_element(mag_.begin(), mag_.end());
        gmin_ = *lo;
        gmax_ = *hi;
    }

    [[nodiscard]] const GridDims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::span<const double> gx() const noexcept { return gx_; }
    [[nodiscard]] std::span<const double> gy() const noexcept { return gy_; }
    [[nodiscard]] std::span<const double> gz() const noexcept { return gz_; }
    [[nodiscard]] std::span<const double> magnitudes() const noexcept { return mag_; }
    [[nodiscard]] double magnitude(std::size_t index) const noexcept { return mag_[index]; }
    [[nodiscard]] double gmax() const noexcept { return gmax_; }
    [[nodiscard]] double gmin() const noexcept { return gmin_; }

private:
    GridDims dims_;
    std::vector<double> gx_, gy_, gz_, mag_;
    double gmax_ = 0.0;
    double gmin_ = 0.0;
};

[[nodiscard]] inline GradientField compute_gradient(const ScalarGrid& grid,
                                                    GradientOperator op = GradientOperator::Sobel) {
    const GridDims& dims = grid.dims();
    const auto w = static_cast<Coord>(dims.width());
    const auto h = static_cast<Coord>(dims.height());
    const auto d = static_cast<Coord>(dims.depth());
    const std::size_t n = dims.site_count();
    std::vector<double> gx(n), gy(n), gz(n);

    auto sample = [&](Coord x, Coord y, Coord z) {
        x = std::clamp<Coord>(x, 0, w - 1);
        y = std::clamp<Coord>(y, 0, h - 1);
        z = std::clamp<Coord>(z, 0, d - 1);
        return grid[static_cast<std::size_t>(x + y * w + z * w * h)];
    };

    std::size_t i = 0;
    for (Coord z = 0; z < d; ++z) {
        for (Coord y = 0; y < h; ++y) {
            for (Coord x = 0; x < w; ++x, ++i) {
                if (op == GradientOperator::Sobel) {
                    const double tl = sample(x - 1, y - 1, z), t = sample(x, y - 1, z), tr = sample(x + 1, y - 1, z);
                    const double l = sample(x - 1, y, z), r = sample(x + 1, y, z);
                    const double bl = sample(x - 1, y + 1, z), b = sample(x, y + 1, z), br = sample(x + 1, y + 1, z);
                    gx[i] = (tr + 2.0 * r + br) - (tl + 2.0 * l + bl);
                    gy[i] = (bl + 2.0 * b + br) - (tl + 2.0 * t + tr);
                } else {
                    gx[i] = sample(x + 1, y, z) - sample(x - 1, y, z);
                    gy[i] = sample(x, y + 1, z) - sample(x, y - 1, z);
                }
                gz[i] = sample(x, y, z + 1) - sample(x, y, z - 1);
            }
        }
    }
    return GradientField(dims, std::move(gx), std::move(gy), std::move(gz));
}

// Magnitudes mapped linearly onto [0, top] and rounded; a flat field maps to 0.
[[nodiscard]] inline ScalarGrid normalized_magnitudes(const GradientField& field, double top) {
    const double lo = field.gmin();
    const double span = field.gmax() - lo;
    std::vector<double> out(field.magnitudes().begin(), field.magnitudes().end());
    for (double& v : out) v = span > 0.0 ? std::round(top * (v - lo) / span) : 0.0;
    return ScalarGrid(field.dims(), std::move(out));
}

[[nodiscard]] inline double magnitude_at(const GradientField& field, const Site& s) {
    return field.magnitude(site_index(field.dims(), s));
}

}  // namespace srg
