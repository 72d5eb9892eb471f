#include <gtest/gtest.h>

#include "srg/label_map.hpp"

using namespace srg;

TEST(LabelMap, AssignTracksStats) {
    const ScalarGrid g(GridDims(3, 2), std::vector<double>{1, 2, 3, 4, 5, 6});
    LabelMap m(g.dims(), 2);
    m.assign(0, 1, g[0]);
    m.assign(4, 1, g[4]);
    m.assign(2, 2, g[2]);
    EXPECT_EQ(m.stats(1).size, 2u);
    EXPECT_EQ(m.stats(1).mean(), 3.0);
    const auto c = m.stats(1).centroid();
    EXPECT_EQ(c[0], 0.5);
    EXPECT_EQ(c[1], 0.5);
    EXPECT_EQ(m.stats(2).mean(), 3.0);
    EXPECT_EQ(m.allocated_count(), 3u);
    EXPECT_EQ(m.at(Site{1, 1, 0}), 1u);
    EXPECT_EQ(m[1], kUnallocated);
}

TEST(LabelMap, RejectsRelabelAndBadRegion) {
    const ScalarGrid g(GridDims(2, 1), 0.0);
    LabelMap m(g.dims(), 1);
    m.assign(0, 1, 0.0);
    EXPECT_THROW(m.assign(0, 1, 0.0), Error);
    EXPECT_THROW(m.assign(1, 2, 0.0), Error);
    EXPECT_THROW(m.assign(1, kUnallocated, 0.0), Error);
}

TEST(LabelMap, FromLabelsRebuildsStats) {
    const ScalarGrid g(GridDims(4, 1), std::vector<double>{0, 0, 100, 100});
    const auto m = LabelMap::from_labels(g, {1, 1, 3, 0});
    EXPECT_EQ(m.region_count(), 3u);
    EXPECT_EQ(m.stats(1).size, 2u);
    EXPECT_EQ(m.stats(2).size, 0u);
    EXPECT_EQ(m.stats(3).sum, 100.0);
    EXPECT_THROW((void)LabelMap::from_labels(g, {1, 1}), ConfigError);
    EXPECT_EQ(LabelMap::from_labels(g, {0, 0, 0, 0}, 2).region_count(), 2u);
}
