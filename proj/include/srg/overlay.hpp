#pragma once

// PNG rendering for visual inspection: label overlays and gradient previews.
// Requires zlib.
//
// Overlay: the image is mapped linearly from its [min, max] range to gray
// 0..255; every labeled site is drawn as the average of that gray and the
// region's palette color. Region r uses kPalette[(r - 1) % 8].

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <zlib.h>

#include "srg/error.hpp"
#include "srg/gradient.hpp"
#include "srg/grid.hpp"
#include "srg/io.hpp"
#include "srg/label_map.hpp"

namespace srg {

struct Rgb {
    std::uint8_t r, g, b;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr std::array<Rgb, 8> kPalette{{{230, 25, 75},
                                              {60, 180, 75},
                                              {0, 130, 200},
                                              {245, 130, 48},
                                              {145, 30, 180},
                                              {70, 240, 240},
                                              {240, 50, 230},
                                              {255, 225, 25}}};

[[nodiscard]] constexpr Rgb palette_color(Label region) noexcept { return kPalette[(region - 1) % kPalette.size()]; }

namespace detail {

inline void put_u32(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_chunk(Bytes& out, const char* type, const Bytes& payload) {
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(4 + payload.size()));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

// channels: 1 (gray) or 3 (RGB), 8 bits each.
inline Bytes encode_png(std::size_t width, std::size_t height, int channels, const Bytes& pixels) {
    Bytes raw;
    const std::size_t stride = width * static_cast<std::size_t>(channels);
    raw.reserve((stride + 1) * height);
    for (std::size_t y = 0; y < height; ++y) {
        raw.push_back(0);  // filter: none
        raw.insert(raw.end(), pixels.begin() + static_cast<std::ptrdiff_t>(y * stride),
                   pixels.begin() + static_cast<std::ptrdiff_t>((y + 1) * stride));
    }
    uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
    Bytes packed(packed_size);
    if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw DataError("zlib compression failed");
    }
    packed.resize(packed_size);

    Bytes out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    Bytes ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(width));
    put_u32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.insert(ihdr.end(), {8, static_cast<std::uint8_t>(channels == 1 ? 0 : 2), 0, 0, 0});
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", packed);
    put_chunk(out, "IEND", {});
    return out;
}

inline std::uint8_t to_gray(double v, double lo, double hi) {
    if (hi <= lo) return 0;
    return static_cast<std::uint8_t>(std::lround(255.0 * (v - lo) / (hi - lo)));
}

}  // namespace detail

[[nodiscard]] inline Bytes render_overlay_png(const ScalarGrid& grid, const LabelMap& labels) {
    if (grid.dims().is_volume()) throw ConfigError("overlays are rendered for 2D images only");
    if (labels.dims() != grid.dims()) throw ConfigError("label map does not match image");
    const auto [lo, hi] = grid.range();
    Bytes rgb;
    rgb.reserve(grid.size() * 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::uint8_t g = detail::to_gray(grid[i], lo, hi);
        if (labels[i] == kUnallocated) {
            rgb.insert(rgb.end(), {g, g, g});
        } else {
            const Rgb c = palette_color(labels[i]);
            rgb.insert(rgb.end(), {static_cast<std::uint8_t>((g + c.r) / 2), static_cast<std::uint8_t>((g + c.g) / 2),
                                   static_cast<std::uint8_t>((g + c.b) / 2)});
        }
    }
    return detail::encode_png(grid.dims().width(), grid.dims().height(), 3, rgb);
}

// Gradient magnitude mapped from [gmin, gmax] to 0..255.
[[nodiscard]] inline Bytes render_gradient_png(const GradientField& field) {
    if (field.dims().is_volume()) throw ConfigError("gradient previews are rendered for 2D images only");
    Bytes gray(field.dims().site_count());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = detail::to_gray(field.magnitude(i), field.gmin(), field.gmax());
    return detail::encode_png(field.dims().width(), field.dims().height(), 1, gray);
}

}  // namespace srg
