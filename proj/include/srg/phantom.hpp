#pragma once

// Synthetic test images.
//
// BridgedDisks (2D only): two disks of radius R stacked vertically, centers
// (W/2, H/4) and (W/2, 3H/4), R = floor(0.75 * min(W/2, H/4)) - 1. Each disk
// is painted at fg together with a one-pixel boundary layer (its 3x3
// dilation); ground truth labels the disk proper (1 = upper disk A,
// 2 = lower disk B) and leaves the boundary layer, bridge and background
// at 0. A vertical bridge of bridge_width columns fills the gap between the
// painted disks; its intensity ramps linearly from mid = (fg + bg) / 2 on
// the row touching disk A up to fg on the row touching disk B, so a
// mid-to-fg intensity step sits at A's side of the bridge.
//
// StepWedge: bg for x < W/2, fg for x >= W/2; ground truth 1 on the fg side.
// UniformNoise: bg everywhere; ground truth 1 everywhere.
//
// Noise: zero-mean Gaussian with standard deviation noise_sigma, drawn in
// site order from std::mt19937_64 seeded with rng_seed. Each pair of 64-bit
// outputs (a, b) maps to u = ((a >> 11) + 0.5) / 2^53, v = (b >> 11) / 2^53
// and yields sqrt(-2 ln u) * cos(2 pi v), then sqrt(-2 ln u) * sin(2 pi v)
// (Box-Muller). No draws happen when noise_sigma is 0. After noise every
// value is rounded to the nearest integer and clamped to [0, 65535].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "srg/error.hpp"
#include "srg/grid.hpp"
#include "srg/label_map.hpp"

namespace srg {

enum class PhantomKind { BridgedDisks, StepWedge, UniformNoise };

[[nodiscard]] inline std::string_view to_string(PhantomKind k) noexcept {
    switch (k) {
        case PhantomKind::BridgedDisks: return "bridged-disks";
        case PhantomKind::StepWedge: return "step-wedge";
        case PhantomKind::UniformNoise: return "uniform-noise";
    }
    return "?";
}

[[nodiscard]] inline PhantomKind parse_phantom_kind(std::string_view text) {
    if (text == "bridged-disks") return PhantomKind::BridgedDisks;
    if (text == "step-wedge") return PhantomKind::StepWedge;
    if (text == "uniform-noise") return PhantomKind::UniformNoise;
    throw ConfigError("unknown phantom kind '" + std::string(text) +
                      "' (expected bridged-disks, step-wedge or uniform-noise)");
}

struct PhantomSpec {
    PhantomKind kind = PhantomKind::BridgedDisks;
    GridDims dims{64, 64};
    double fg_intensity = 200.0;
    double bg_intensity = 20.0;
    std::size_t bridge_width = 3;
    double noise_sigma = 0.0;
    std::uint64_t rng_seed = 0;
};

struct Phantom {
    ScalarGrid grid;
    LabelMap truth;
};

struct BridgedDisksLayout {
    Site center_a;
    Site center_b;
    Coord radius = 0;
    Coord bridge_first_row = 0;
    Coord bridge_last_row = 0;
    Coord bridge_first_col = 0;
    Coord bridge_last_col = 0;
};

[[nodiscard]] inline BridgedDisksLayout bridged_disks_layout(const GridDims& dims, std::size_t bridge_width) {
    if (dims.is_volume()) throw ConfigError("bridged-disks phantom is 2D only, got " + dims.describe());
    const auto w = static_cast<Coord>(dims.width());
    const auto h = static_cast<Coord>(dims.height());
    BridgedDisksLayout l;
    l.center_a = Site{w / 2, h / 4, 0};
    l.center_b = Site{w / 2, 3 * h / 4, 0};
    l.radius = static_cast<Coord>(std::floor(0.75 * std::min(w / 2.0, h / 4.0))) - 1;
    if (l.radius < 2) {
        throw ConfigError("bridged-disks phantom does not fit in " + dims.describe() + " (need at least 8x16)");
    }
    l.bridge_first_row = l.center_a.y + l.radius + 2;
    l.bridge_last_row = l.center_b.y - l.radius - 2;
    if (l.bridge_last_row < l.bridge_first_row) {
        throw ConfigError("bridged-disks phantom leaves no room for a bridge in " + dims.describe());
    }
    const auto bw = static_cast<Coord>(bridge_width);
    if (bw < 1 || bw > 2 * l.radius + 1) {
        throw ConfigError("bridge width " + std::to_string(bridge_width) + " must lie in 1.." +
                          std::to_string(2 * l.radius + 1) + " for " + dims.describe());
    }
    l.bridge_first_col = l.center_a.x - (bw - 1) / 2;
    l.bridge_last_col = l.bridge_first_col + bw - 1;
    return l;
}

namespace detail {

class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
        const double u = (static_cast<double>(engine_() >> 11) + 0.5) * scale;
        const double v = static_cast<double>(engine_() >> 11) * scale;
        const double r = std::sqrt(-2.0 * std::log(u));
        const double theta = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline bool in_disk(Coord x, Coord y, const Site& c, Coord r) noexcept {
    const Coord dx = x - c.x;
    const Coord dy = y - c.y;
    return dx * dx + dy * dy <= r * r;
}

}  // namespace detail

[[nodiscard]] inline Phantom generate_phantom(const PhantomSpec& spec) {
    auto check_level = [](const char* name, double v) {
        if (!std::isfinite(v) || v < 0.0 || v > 65535.0) {
            throw ConfigError(std::string(name) + " intensity must lie in [0, 65535], got " + std::to_string(v));
        }
    };
    check_level("foreground", spec.fg_intensity);
    check_level("background", spec.bg_intensity);
    if (!std::isfinite(spec.noise_sigma) || spec.noise_sigma < 0.0) {
        throw ConfigError("noise sigma must be finite and >= 0");
    }
    if (spec.kind != PhantomKind::UniformNoise && spec.fg_intensity == spec.bg_intensity) {
        throw ConfigError("contrast phantom needs foreground != background intensity");
    }

    const GridDims& dims = spec.dims;
    const auto w = static_cast<Coord>(dims.width());
    const auto h = static_cast<Coord>(dims.height());
    std::vector<double> values(dims.site_count(), spec.bg_intensity);
    std::vector<Label> truth(dims.site_count(), kUnallocated);
    std::size_t regions = 1;

    switch (spec.kind) {
        case PhantomKind::BridgedDisks: {
            const BridgedDisksLayout l = bridged_disks_layout(dims, spec.bridge_width);
            regions = 2;
            for (Coord y = 0; y < h; ++y) {
                for (Coord x = 0; x < w; ++x) {
                    const auto i = static_cast<std::size_t>(x + y * w);
                    if (detail::in_disk(x, y, l.center_a, l.radius)) truth[i] = 1;
                    if (detail::in_disk(x, y, l.center_b, l.radius)) truth[i] = 2;
                    bool painted = false;
                    for (Coord dy = -1; dy <= 1 && !painted; ++dy) {
                        for (Coord dx = -1; dx <= 1 && !painted; ++dx) {
                            painted = detail::in_disk(x + dx, y + dy, l.center_a, l.radius) ||
                                      detail::in_disk(x + dx, y + dy, l.center_b, l.radius);
                        }
                    }
                    if (painted) values[i] = spec.fg_intensity;
                }
            }
            const double mid = 0.5 * (spec.fg_intensity + spec.bg_intensity);
            const Coord length = l.bridge_last_row - l.bridge_first_row + 1;
            for (Coord j = 0; j < length; ++j) {
                const double v = length == 1 ? mid
                                             : mid + (spec.fg_intensity - mid) * static_cast<double>(j) /
                                                         static_cast<double>(length - 1);
                for (Coord x = l.bridge_first_col; x <= l.bridge_last_col; ++x) {
                    values[static_cast<std::size_t>(x + (l.bridge_first_row + j) * w)] = v;
                }
            }
            break;
        }
        case PhantomKind::StepWedge:
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (static_cast<Coord>(i % dims.width()) >= w / 2) {
                    values[i] = spec.fg_intensity;
                    truth[i] = 1;
                }
            }
            break;
        case PhantomKind::UniformNoise:
            std::fill(truth.begin(), truth.end(), Label{1});
            break;
    }

    if (spec.noise_sigma > 0.0) {
        detail::GaussianNoise noise(spec.rng_seed);
        for (double& v : values) v += spec.noise_sigma * noise.next();
    }
    for (double& v : values) v = std::clamp(std::round(v), 0.0, 65535.0);

    ScalarGrid grid(dims, std::move(values));
    LabelMap labels = LabelMap::from_labels(grid, std::move(truth), regions);
    return Phantom{std::move(grid), std::move(labels)};
}

}  // namespace srg
