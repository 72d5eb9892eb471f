#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "png_decode.hpp"
#include "srg/overlay.hpp"
#include "srg/region_grow.hpp"
#include "srg/report_io.hpp"
#include "srg/rle.hpp"

using namespace srg;

TEST(Rle, Example) {
    const std::vector<Label> labels{0, 0, 1, 1, 1, 0, 2};
    const auto runs = encode_rle(labels);
    const std::vector<LabelRun> want{{0, 2}, {1, 3}, {0, 1}, {2, 1}};
    EXPECT_EQ(runs, want);
    EXPECT_EQ(decode_rle(runs, labels.size()), labels);
}

TEST(Rle, RoundTripRandomAndCanonical) {
    std::mt19937_64 rng(81);
    for (int t = 0; t < 200; ++t) {
        std::vector<Label> labels(1 + rng() % 100);
        for (auto& l : labels) l = static_cast<Label>(rng() % 3);
        const auto runs = encode_rle(labels);
        for (std::size_t i = 1; i < runs.size(); ++i) ASSERT_NE(runs[i].label, runs[i - 1].label);
        ASSERT_EQ(decode_rle(runs, labels.size()), labels);
    }
}

TEST(Rle, DecodeRejectsWrongLength) {
    const std::vector<LabelRun> runs{{1, 3}};
    EXPECT_THROW((void)decode_rle(runs, 2), DataError);
    EXPECT_THROW((void)decode_rle(runs, 4), DataError);
    EXPECT_THROW((void)decode_rle(std::vector<LabelRun>{{1, 0}}, 0), DataError);
}

TEST(Report, GrowReportJsonFields) {
    const ScalarGrid g(GridDims(5, 1), std::vector<double>{10, 10, 50, 90, 90});
    const auto r = grow_classic(g, SeedSet{{0, 0, 0}, {4, 0, 0}}, Neighborhood::N4);
    const auto j = grow_report_json(r.report, r.labels);
    EXPECT_EQ(j["engine"], "classic");
    EXPECT_TRUE(j["criterion"].is_null());
    EXPECT_EQ(j["neighborhood"], "n4");
    EXPECT_EQ(j["termination"], "all_sites_allocated");
    EXPECT_EQ(j["sites_accepted"], 5);
    EXPECT_EQ(j["seeds"][1]["region"], 2);
    EXPECT_EQ(j["seeds"][1]["site"], nlohmann::json({4, 0, 0}));
    EXPECT_EQ(j["dims"], nlohmann::json({5, 1, 1}));
    EXPECT_EQ(j["regions"][0]["size"], 3);
    EXPECT_EQ(j["regions"][0]["mean"], 70.0 / 3.0);
    EXPECT_EQ(j["regions"][1]["centroid"], nlohmann::json({3.5, 0.0, 0.0}));
    // Same inputs, same bytes.
    const auto again = grow_classic(g, SeedSet{{0, 0, 0}, {4, 0, 0}}, Neighborhood::N4);
    EXPECT_EQ(grow_report_json(again.report, again.labels).dump(), j.dump());
}

TEST(Report, StackReportCarriesCriterion) {
    const ScalarGrid g(GridDims(3, 3), 1.0);
    const auto r = grow_stack(g, SeedSet{{1, 1, 0}}, parse_criterion("and(gn:k=0.5,int:t=2)"));
    const auto j = grow_report_json(r.report, r.labels);
    EXPECT_EQ(j["criterion"], "and(gn:k=0.5,int:t=2)");
    EXPECT_EQ(j["engine"], "stack");
}

TEST(Report, PropertyReportForms) {
    const ScalarGrid g(GridDims(4, 1), std::vector<double>{0, 0, 100, 100});
    const auto p = check_properties(g, LabelMap::from_labels(g, {1, 1, 1, 0}), RegionPredicate::max_deviation(10),
                                    Neighborhood::N4);
    const auto j = property_report_json(p);
    EXPECT_EQ(j["covers_domain"], false);
    EXPECT_EQ(j["all_hold"], false);
    EXPECT_EQ(j["counterexamples"][0]["property"], "a");
    EXPECT_EQ(j["counterexamples"][0]["sites"], nlohmann::json::array({{3, 0, 0}}));
    const std::string text = property_report_text(p);
    EXPECT_NE(text.find("a covers_domain false\n"), std::string::npos) << text;
    EXPECT_NE(text.find("c region 1 homogeneous false\n"), std::string::npos) << text;
    EXPECT_NE(text.find("counterexample a sites (3,0,0) : 1 unallocated sites\n"), std::string::npos) << text;
    EXPECT_NE(text.find("all_hold false\n"), std::string::npos) << text;
}

namespace {

// Recovers which pixels the overlay colored, and with which color.
std::vector<std::optional<Rgb>> colored_pixels(const ScalarGrid& g, const Bytes& png) {
    const auto img = testpng::decode(png);
    EXPECT_EQ(img.channels, 3);
    EXPECT_EQ(img.width, g.dims().width());
    EXPECT_EQ(img.height, g.dims().height());
    std::vector<std::optional<Rgb>> out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::uint8_t r = img.pixels[3 * i], gg = img.pixels[3 * i + 1], b = img.pixels[3 * i + 2];
        if (r == gg && gg == b) {
            out.emplace_back();
        } else {
            out.emplace_back(Rgb{r, gg, b});
        }
    }
    return out;
}

}  // namespace

TEST(Overlay, SeedOnlyRunColorsOnePixel) {
    std::vector<double> v(25, 0.0);
    v[12] = 255.0;  // isolated bright seed pixel, every neighbor differs
    const ScalarGrid g(GridDims(5, 5), v);
    const auto r = grow_stack(g, SeedSet{{2, 2, 0}}, CriterionConfig::simple_intensity(1));
    ASSERT_EQ(r.report.sites_accepted, 1u);
    const auto px = colored_pixels(g, render_overlay_png(g, r.labels));
    for (std::size_t i = 0; i < px.size(); ++i) EXPECT_EQ(px[i].has_value(), i == 12) << i;
    const Rgb c = palette_color(1);
    EXPECT_EQ(*px[12], (Rgb{static_cast<std::uint8_t>((255 + c.r) / 2), static_cast<std::uint8_t>((255 + c.g) / 2),
                            static_cast<std::uint8_t>((255 + c.b) / 2)}));
}

TEST(Overlay, ThreeRegionsThreeColors) {
    std::vector<double> v;
    for (int y = 0; y < 4; ++y) v.insert(v.end(), {10, 10, 90, 90, 170, 170});
    const ScalarGrid g(GridDims(6, 4), v);
    const auto r = grow_stack(g, GradientField{}, SeedSet{{0, 0, 0}, {2, 0, 0}, {4, 0, 0}}, Neighborhood::N4,
                              CriterionConfig::simple_intensity(1));
    const auto px = colored_pixels(g, render_overlay_png(g, r.labels));
    std::set<std::tuple<int, int, int>> colors;
    for (const auto& p : px) {
        ASSERT_TRUE(p.has_value());
        colors.insert({p->r, p->g, p->b});
    }
    EXPECT_EQ(colors.size(), 3u);
}

TEST(Overlay, DeterministicAndRejectsVolumes) {
    std::mt19937_64 rng(82);
    const ScalarGrid g = oracle::blobby_grid(rng, 16, 12);
    const auto r = grow_classic(g, SeedSet{{0, 0, 0}, {15, 11, 0}});
    EXPECT_EQ(render_overlay_png(g, r.labels), render_overlay_png(g, r.labels));
    const ScalarGrid vol(GridDims(2, 2, 2), 0.0);
    EXPECT_THROW((void)render_overlay_png(vol, LabelMap(vol.dims(), 1)), ConfigError);
}

TEST(Overlay, GradientPreviewSpansFullRange) {
    std::vector<double> v;
    for (int y = 0; y < 4; ++y) v.insert(v.end(), {0, 0, 100, 100});
    const auto img = testpng::decode(render_gradient_png(compute_gradient(ScalarGrid(GridDims(4, 4), v))));
    EXPECT_EQ(img.channels, 1);
    EXPECT_EQ(img.pixels[0], 0);
    EXPECT_EQ(img.pixels[1], 255);
}
