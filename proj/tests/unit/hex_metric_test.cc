#include <gtest/gtest.h>

#include "mobius/hex_metric.h"
#include "properties.h"

namespace mobius {
namespace {

TEST(HexMetric, MatchesBreadthFirstSearch) {
    auto r = testing::check_hex_metric(7);
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_EQ(r.checked, 15u * 15u);
}

TEST(HexMetric, OracleSanity) {
    HexCoord o = HexCoord::from_axes(0, 0);
    EXPECT_EQ(testing::hex_bfs(o, o).distance, 0);
    EXPECT_EQ(testing::hex_bfs(o, o).paths, 1u);
    // Straight along one axis: a single path.
    EXPECT_EQ(testing::hex_bfs(o, HexCoord::from_axes(4, 0)).paths, 1u);
    // (2, 2) needs two steps of each kind: C(4, 2) orderings.
    auto two_two = testing::hex_bfs(o, HexCoord::from_axes(2, 2));
    EXPECT_EQ(two_two.distance, 4);
    EXPECT_EQ(two_two.paths, 6u);
}

TEST(HexMetric, DistanceIsTranslationInvariant) {
    HexCoord a = HexCoord::from_axes(3, -2);
    HexCoord b = HexCoord::from_axes(-1, 5);
    HexCoord a2 = HexCoord::from_axes(3 + 10, -2 - 7);
    HexCoord b2 = HexCoord::from_axes(-1 + 10, 5 - 7);
    EXPECT_EQ(hex_distance(a, b), hex_distance(a2, b2));
    EXPECT_EQ(hex_path_count(a, b), hex_path_count(a2, b2));
}

TEST(HexMetric, RejectsInconsistentAxes) {
    EXPECT_THROW(HexCoord(1, 1, 1), std::invalid_argument);
    EXPECT_NO_THROW(HexCoord(1, 3, 2));
}

}  // namespace
}  // namespace mobius
