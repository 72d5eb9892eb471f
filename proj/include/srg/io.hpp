#pragma once

// File formats.
//
// 2D: binary PGM (P5). maxval <= 255 stores one byte per sample, larger
// maxval two bytes, most significant first. Writers pick maxval 255 when
// every value fits, 65535 otherwise.
//
// 3D: headerless raw samples, x fastest then y then z, described by a text
// sidecar "<path>.hdr" holding one line "width height depth format" with
// format u8 or u16le.
//
// Masks are written with label values verbatim: PGM for 2D grids, raw u16le
// plus sidecar for volumes.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "srg/error.hpp"
#include "srg/grid.hpp"
#include "srg/label_map.hpp"

namespace srg {

using Bytes = std::vector<std::uint8_t>;

[[nodiscard]] inline Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
    return data;
}

inline void write_file(const std::filesystem::path& path, const Bytes& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed on '" + path.string() + "'");
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
    write_file(path, Bytes(text.begin(), text.end()));
}

// ---------------------------------------------------------------- PGM

namespace detail {

class PgmHeaderReader {
public:
    explicit PgmHeaderReader(std::span<const std::uint8_t> data) : data_(data) {}

    void magic() {
        if (data_.size() < 2 || data_[0] != 'P' || data_[1] != '5') {
            throw ParseError("unsupported magic number, expected binary PGM 'P5'", 0);
        }
        pos_ = 2;
    }

    unsigned long number(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        unsigned long v = 0;
        while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
            v = v * 10 + (data_[pos_] - '0');
            if (v > 1'000'000'000UL) throw ParseError(std::string("PGM ") + field + " too large", start);
            ++pos_;
        }
        if (pos_ == start) {
            throw ParseError(std::string("malformed PGM header: expected ") + field, pos_);
        }
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_start() {
        if (pos_ >= data_.size()) throw ParseError("PGM header ends before raster", pos_);
        if (!std::isspace(data_[pos_])) throw ParseError("malformed PGM header: expected whitespace", pos_);
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < data_.size()) {
            if (std::isspace(data_[pos_])) {
                ++pos_;
            } else if (data_[pos_] == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

struct PgmImage {
    GridDims dims;
    unsigned maxval = 255;
    std::vector<std::uint16_t> samples;
};

inline PgmImage decode_pgm_samples(std::span<const std::uint8_t> data) {
    PgmHeaderReader header(data);
    header.magic();
    const auto width = header.number("width");
    const auto height = header.number("height");
    const auto maxval = header.number("maxval");
    if (width == 0 || height == 0) throw ParseError("PGM width and height must be positive", 2);
    if (maxval == 0 || maxval > 65535) {
        throw ParseError("PGM maxval " + std::to_string(maxval) + " outside 1..65535", 2);
    }
    const std::size_t start = header.raster_start();
    const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
    const std::size_t expected = static_cast<std::size_t>(width) * height * bytes_per_sample;
    const std::size_t available = data.size() - start;
    if (available < expected) {
        throw ParseError("truncated PGM payload: expected " + std::to_string(expected) + " bytes, got " +
                             std::to_string(available),
                         data.size());
    }
    // Excess bytes are reported at the last byte that belongs to the raster.
    if (available > expected) {
        throw ParseError("PGM payload length mismatch: expected " + std::to_string(expected) + " bytes, got " +
                             std::to_string(available) + " (trailing data)",
                         start + expected - 1);
    }

    PgmImage img{GridDims(width, height), static_cast<unsigned>(maxval), {}};
    img.samples.resize(img.dims.site_count());
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        const std::size_t at = start + i * bytes_per_sample;
        const unsigned v = bytes_per_sample == 1 ? data[at] : (unsigned{data[at]} << 8) | data[at + 1];
        if (v > maxval) {
            throw ParseError("PGM sample " + std::to_string(v) + " exceeds maxval " + std::to_string(maxval), at);
        }
        img.samples[i] = static_cast<std::uint16_t>(v);
    }
    return img;
}

inline Bytes encode_pgm_samples(const GridDims& dims, const std::vector<std::uint32_t>& samples) {
    if (dims.is_volume()) throw ConfigError("PGM holds 2D images only, grid is " + dims.describe());
    std::uint32_t top = 0;
    for (auto v : samples) top = std::max(top, v);
    if (top > 65535) throw DataError("value " + std::to_string(top) + " exceeds the 16-bit PGM range");
    const unsigned maxval = top <= 255 ? 255 : 65535;
    const std::string header =
        "P5\n" + std::to_string(dims.width()) + " " + std::to_string(dims.height()) + "\n" + std::to_string(maxval) + "\n";
    Bytes out(header.begin(), header.end());
    out.reserve(out.size() + samples.size() * (maxval == 255 ? 1 : 2));
    for (auto v : samples) {
        if (maxval == 255) {
            out.push_back(static_cast<std::uint8_t>(v));
        } else {
            out.push_back(static_cast<std::uint8_t>(v >> 8));
            out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        }
    }
    return out;
}

// Integral values in [0, limit]; anything else cannot be stored losslessly.
inline std::vector<std::uint32_t> integral_samples(const ScalarGrid& grid, double limit) {
    std::vector<std::uint32_t> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = grid[i];
        if (v < 0.0 || v > limit || std::floor(v) != v) {
            throw DataError("intensity " + std::to_string(v) + " at site " + to_string(site_at(grid.dims(), i)) +
                            " is not an integer in [0," + std::to_string(static_cast<long>(limit)) + "]");
        }
        out[i] = static_cast<std::uint32_t>(v);
    }
    return out;
}

}  // namespace detail

[[nodiscard]] inline ScalarGrid decode_pgm(std::span<const std::uint8_t> data) {
    auto img = detail::decode_pgm_samples(data);
    return ScalarGrid::from_integers<std::uint16_t>(img.dims, img.samples);
}

[[nodiscard]] inline Bytes encode_pgm(const ScalarGrid& grid) {
    return detail::encode_pgm_samples(grid.dims(), detail::integral_samples(grid, 65535.0));
}

[[nodiscard]] inline ScalarGrid read_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }

inline void write_pgm(const ScalarGrid& grid, const std::filesystem::path& path) { write_file(path, encode_pgm(grid)); }

// Label values verbatim.
[[nodiscard]] inline Bytes encode_mask_pgm(const LabelMap& labels) {
    return detail::encode_pgm_samples(labels.dims(), {labels.labels().begin(), labels.labels().end()});
}

// Display ramp: 0 stays black, regions cycle through five gray levels
// 255, 207, 159, 111, 63.
[[nodiscard]] constexpr std::uint8_t label_gray(Label l) noexcept {
    return l == kUnallocated ? 0 : static_cast<std::uint8_t>(255 - ((l - 1) % 5) * 48);
}

[[nodiscard]] inline Bytes render_labels_pgm(const LabelMap& labels) {
    std::vector<std::uint32_t> gray(labels.labels().size());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = label_gray(labels[i]);
    return detail::encode_pgm_samples(labels.dims(), gray);
}

// ---------------------------------------------------------------- raw volumes

enum class SampleFormat { U8, U16LE };

[[nodiscard]] inline std::string_view to_string(SampleFormat f) noexcept { return f == SampleFormat::U8 ? "u8" : "u16le"; }

[[nodiscard]] inline SampleFormat parse_sample_format(std::string_view text) {
    if (text == "u8") return SampleFormat::U8;
    if (text == "u16le" || text == "u16") return SampleFormat::U16LE;
    throw ConfigError("unknown sample format '" + std::string(text) + "' (expected u8 or u16le)");
}

[[nodiscard]] constexpr std::size_t sample_size(SampleFormat f) noexcept { return f == SampleFormat::U8 ? 1 : 2; }

struct VolumeHeader {
    GridDims dims;
    SampleFormat format = SampleFormat::U8;
    friend bool operator==(const VolumeHeader&, const VolumeHeader&) = default;
};

[[nodiscard]] inline std::filesystem::path sidecar_path(const std::filesystem::path& raw) {
    return std::filesystem::path(raw.string() + ".hdr");
}

[[nodiscard]] inline VolumeHeader parse_sidecar(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::size_t w = 0, h = 0, d = 0;
    std::string fmt;
    if (!(in >> w >> h >> d >> fmt)) {
        throw ConfigError("malformed volume sidecar, expected 'width height depth format'");
    }
    return VolumeHeader{GridDims(w, h, d), parse_sample_format(fmt)};
}

[[nodiscard]] inline std::string format_sidecar(const VolumeHeader& h) {
    return std::to_string(h.dims.width()) + " " + std::to_string(h.dims.height()) + " " +
           std::to_string(h.dims.depth()) + " " + std::string(to_string(h.format)) + "\n";
}

[[nodiscard]] inline ScalarGrid decode_raw_volume(std::span<const std::uint8_t> data, const GridDims& dims,
                                                  SampleFormat fmt) {
    const std::size_t expected = dims.site_count() * sample_size(fmt);
    if (data.size() != expected) {
        throw DataError("raw volume " + dims.describe() + " " + std::string(to_string(fmt)) + " needs " +
                        std::to_string(expected) + " bytes, file has " + std::to_string(data.size()));
    }
    std::vector<double> values(dims.site_count());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = fmt == SampleFormat::U8 ? data[i] : (unsigned{data[2 * i + 1]} << 8) | data[2 * i];
    }
    return ScalarGrid(dims, std::move(values));
}

[[nodiscard]] inline Bytes encode_raw_samples(const std::vector<std::uint32_t>& samples, SampleFormat fmt) {
    Bytes out;
    out.reserve(samples.size() * sample_size(fmt));
    for (auto v : samples) {
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        if (fmt == SampleFormat::U16LE) out.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    return out;
}

[[nodiscard]] inline Bytes encode_raw_volume(const ScalarGrid& grid, SampleFormat fmt) {
    return encode_raw_samples(detail::integral_samples(grid, fmt == SampleFormat::U8 ? 255.0 : 65535.0), fmt);
}

[[nodiscard]] inline ScalarGrid read_raw_volume(const std::filesystem::path& path, const GridDims& dims,
                                                SampleFormat fmt) {
    return decode_raw_volume(read_file(path), dims, fmt);
}

inline void write_raw_volume(const ScalarGrid& grid, const std::filesystem::path& path, SampleFormat fmt) {
    write_file(path, encode_raw_volume(grid, fmt));
}

// ---------------------------------------------------------------- by extension

[[nodiscard]] inline bool is_pgm_path(const std::filesystem::path& p) {
    auto ext = p.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".pgm";
}

// PGM by extension, otherwise raw samples described by the sidecar.
[[nodiscard]] inline ScalarGrid read_grid(const std::filesystem::path& path) {
    if (is_pgm_path(path)) return read_pgm(path);
    const Bytes side = read_file(sidecar_path(path));
    const VolumeHeader h = parse_sidecar(std::string_view(reinterpret_cast<const char*>(side.data()), side.size()));
    return read_raw_volume(path, h.dims, h.format);
}

inline void write_grid(const ScalarGrid& grid, const std::filesystem::path& path,
                       SampleFormat raw_format = SampleFormat::U16LE) {
    if (is_pgm_path(path)) {
        write_pgm(grid, path);
        return;
    }
    write_raw_volume(grid, path, raw_format);
    write_text(sidecar_path(path), format_sidecar(VolumeHeader{grid.dims(), raw_format}));
}

[[nodiscard]] inline Bytes encode_mask(const LabelMap& labels, bool as_pgm) {
    if (as_pgm) return encode_mask_pgm(labels);
    std::vector<std::uint32_t> samples(labels.labels().begin(), labels.labels().end());
    for (auto v : samples) {
        if (v > 65535) throw DataError("label " + std::to_string(v) + " exceeds the u16 mask range");
    }
    return encode_raw_samples(samples, SampleFormat::U16LE);
}

inline void write_mask(const LabelMap& labels, const std::filesystem::path& path) {
    const bool pgm = is_pgm_path(path);
    if (pgm && labels.dims().is_volume()) {
        throw ConfigError("mask for volume " + labels.dims().describe() + " cannot be written as PGM: " + path.string());
    }
    write_file(path, encode_mask(labels, pgm));
    if (!pgm) write_text(sidecar_path(path), format_sidecar(VolumeHeader{labels.dims(), SampleFormat::U16LE}));
}

// Reads a mask written by write_mask; region statistics are rebuilt against `grid`.
[[nodiscard]] inline LabelMap read_mask(const std::filesystem::path& path, const ScalarGrid& grid) {
    const ScalarGrid raw = read_grid(path);
    if (raw.dims() != grid.dims()) {
        throw ConfigError("mask " + raw.dims().describe() + " does not match image " + grid.dims().describe());
    }
    std::vector<Label> labels(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) labels[i] = static_cast<Label>(raw[i]);
    return LabelMap::from_labels(grid, std::move(labels));
}

}  // namespace srg
