#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

#include "oracles.hpp"
#include "srg/io.hpp"

using namespace srg;
namespace fs = std::filesystem;

namespace {

Bytes bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("srg_io_" + std::to_string(std::random_device{}()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

}  // namespace

TEST(Pgm, DecodesFourByThree) {
    Bytes data = bytes("P5 4 3 255\n");
    for (std::uint8_t i = 0; i < 12; ++i) data.push_back(i * 10);
    const ScalarGrid g = decode_pgm(data);
    EXPECT_EQ(g.dims(), GridDims(4, 3));
    EXPECT_EQ(g.at(Site{3, 2, 0}), 110.0);
    EXPECT_EQ(g.at(Site{1, 0, 0}), 10.0);
}

TEST(Pgm, HeaderCommentsAndSixteenBit) {
    Bytes data = bytes("P5\n# a comment\n2 1\n# another\n1000\n");
    data.insert(data.end(), {0x03, 0xE8, 0x00, 0x07});
    const ScalarGrid g = decode_pgm(data);
    EXPECT_EQ(g[0], 1000.0);
    EXPECT_EQ(g[1], 7.0);
}

TEST(Pgm, ExtraPayloadByteReportedAtLastValidByte) {
    Bytes data = bytes("P5 4 3 255\n");
    const std::size_t start = data.size();
    data.resize(start + 13, 1);
    try {
        (void)decode_pgm(data);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), start + 11);
    }
}

TEST(Pgm, ShortPayloadIsTruncation) {
    Bytes data = bytes("P5 4 3 255\n");
    data.resize(data.size() + 11, 1);
    try {
        (void)decode_pgm(data);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), data.size());
        EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
    }
}

TEST(Pgm, MalformedHeaders) {
    EXPECT_THROW((void)decode_pgm(bytes("P2 1 1 255\n\x01")), ParseError);
    EXPECT_THROW((void)decode_pgm(bytes("")), ParseError);
    EXPECT_THROW((void)decode_pgm(bytes("P5 x 1 255\n\x01")), ParseError);
    EXPECT_THROW((void)decode_pgm(bytes("P5 1 1 70000\n\x01\x01")), ParseError);
    EXPECT_THROW((void)decode_pgm(bytes("P5 0 1 255\n")), ParseError);
    EXPECT_THROW((void)decode_pgm(bytes("P5 1 1 255")), ParseError);
    EXPECT_THROW((void)decode_pgm(bytes("P5 1 1 10\n\x0b")), ParseError);  // sample above maxval
    try {
        (void)decode_pgm(bytes("P6 1 1 255\n\x01"));
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 0u);
    }
}

TEST(Pgm, RoundTripRandomGrids) {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 40; ++t) {
        const int levels = t % 2 ? 256 : 65536;
        const ScalarGrid g = oracle::random_grid(rng, 1 + rng() % 20, 1 + rng() % 20, 1, levels);
        ASSERT_EQ(decode_pgm(encode_pgm(g)), g);
    }
}

TEST(Pgm, WriterPicksMaxval) {
    const auto small = encode_pgm(ScalarGrid(GridDims(1, 1), 255.0));
    EXPECT_EQ(std::string(small.begin(), small.end() - 1), "P5\n1 1\n255\n");
    const auto big = encode_pgm(ScalarGrid(GridDims(1, 1), 256.0));
    EXPECT_EQ(std::string(big.begin(), big.end() - 2), "P5\n1 1\n65535\n");
    EXPECT_EQ(big[big.size() - 2], 0x01);
    EXPECT_EQ(big.back(), 0x00);
}

TEST(Pgm, RejectsUnrepresentable) {
    EXPECT_THROW((void)encode_pgm(ScalarGrid(GridDims(1, 1), 1.5)), DataError);
    EXPECT_THROW((void)encode_pgm(ScalarGrid(GridDims(1, 1), -1.0)), DataError);
    EXPECT_THROW((void)encode_pgm(ScalarGrid(GridDims(1, 1), 70000.0)), DataError);
    EXPECT_THROW((void)encode_pgm(ScalarGrid(GridDims(1, 1, 2), 0.0)), ConfigError);
}

TEST(Raw, ZeroVolume) {
    const Bytes zeros(32, 0);
    const ScalarGrid g = decode_raw_volume(zeros, GridDims(4, 4, 2), SampleFormat::U8);
    for (double v : g.values()) EXPECT_EQ(v, 0.0);
}

TEST(Raw, LittleEndianXFastest) {
    const Bytes data{0x01, 0x02, 0xFF, 0x00};
    const ScalarGrid g = decode_raw_volume(data, GridDims(2, 1, 1), SampleFormat::U16LE);
    EXPECT_EQ(g[0], 0x0201);
    EXPECT_EQ(g[1], 0xFF);
}

TEST(Raw, RoundTripU16) {
    std::mt19937_64 rng(72);
    for (int t = 0; t < 20; ++t) {
        const ScalarGrid g = oracle::random_grid(rng, 1 + rng() % 6, 1 + rng() % 6, 1 + rng() % 6, 65536);
        ASSERT_EQ(decode_raw_volume(encode_raw_volume(g, SampleFormat::U16LE), g.dims(), SampleFormat::U16LE), g);
    }
}

TEST(Raw, SizeMismatchNamesByteCounts) {
    const Bytes data(31, 0);
    try {
        (void)decode_raw_volume(data, GridDims(4, 4, 2), SampleFormat::U8);
        FAIL();
    } catch (const DataError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("32"), std::string::npos) << what;
        EXPECT_NE(what.find("31"), std::string::npos) << what;
    }
    EXPECT_THROW((void)encode_raw_volume(ScalarGrid(GridDims(1, 1), 256.0), SampleFormat::U8), DataError);
}

TEST(Sidecar, ParseFormat) {
    const VolumeHeader h{GridDims(32, 32, 16), SampleFormat::U16LE};
    EXPECT_EQ(format_sidecar(h), "32 32 16 u16le\n");
    EXPECT_EQ(parse_sidecar(format_sidecar(h)), h);
    EXPECT_THROW((void)parse_sidecar("32 32"), ConfigError);
    EXPECT_THROW((void)parse_sidecar("1 1 1 f32"), ConfigError);
}

TEST(Files, GridAndMaskRoundTrip) {
    TempDir dir;
    std::mt19937_64 rng(73);
    const ScalarGrid image = oracle::random_grid(rng, 7, 5, 1, 300);
    write_grid(image, dir / "a.pgm");
    EXPECT_EQ(read_grid(dir / "a.pgm"), image);

    const ScalarGrid volume = oracle::random_grid(rng, 4, 3, 2, 1000);
    write_grid(volume, dir / "v.raw");
    EXPECT_TRUE(fs::exists(dir / "v.raw.hdr"));
    EXPECT_EQ(read_grid(dir / "v.raw"), volume);

    std::vector<Label> labels(volume.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<Label>(i % 4);
    const auto mask = LabelMap::from_labels(volume, labels);
    write_mask(mask, dir / "m.raw");
    EXPECT_EQ(read_mask(dir / "m.raw", volume), mask);
    EXPECT_THROW(write_mask(mask, dir / "m.pgm"), ConfigError);

    const auto flat = LabelMap::from_labels(image, std::vector<Label>(image.size(), 2));
    write_mask(flat, dir / "m2.pgm");
    EXPECT_EQ(read_mask(dir / "m2.pgm", image), flat);
    EXPECT_THROW((void)read_mask(dir / "m2.pgm", volume), ConfigError);
}

TEST(Files, MissingFileIsIoError) {
    EXPECT_THROW((void)read_grid("/nonexistent/srg/x.pgm"), IoError);
    EXPECT_THROW((void)read_grid("/nonexistent/srg/x.raw"), IoError);
}

TEST(LabelRendering, GrayRamp) {
    EXPECT_EQ(label_gray(0), 0);
    EXPECT_EQ(label_gray(1), 255);
    EXPECT_EQ(label_gray(2), 207);
    EXPECT_EQ(label_gray(5), 63);
    EXPECT_EQ(label_gray(6), 255);
    const ScalarGrid g(GridDims(3, 1), 0.0);
    const auto png = render_labels_pgm(LabelMap::from_labels(g, {0, 1, 2}));
    EXPECT_EQ(decode_pgm(png).values()[2], 207.0);
}
