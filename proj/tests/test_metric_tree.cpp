#include "support.hpp"

#include <gtest/gtest.h>

using namespace lambdatree;

namespace {

LexValue L(const char* s) { return LexValue::parse(s); }

/// Path v0 - v1 - ... with the given edge lengths.
std::shared_ptr<const FiniteEdgeTree> path_tree(const std::vector<LexValue>& lengths)
{
    std::vector<FiniteEdgeTree::Edge> edges;
    for (std::size_t i = 0; i < lengths.size(); ++i)
        edges.push_back({static_cast<int>(i), static_cast<int>(i + 1), lengths[i]});
    return std::make_shared<FiniteEdgeTree>(lengths.front().rank(), lengths.size() + 1, edges);
}

/// Tripod with center 0 and legs 1, 2, 3.
std::shared_ptr<const FiniteEdgeTree> tripod()
{
    return std::make_shared<FiniteEdgeTree>(
        2, 4, std::vector<FiniteEdgeTree::Edge>{{0, 1, L("(1,0)")}, {0, 2, L("(0,1)")}, {0, 3, L("(1,1/2)")}});
}

}  // namespace

TEST(FiniteTree, Examples)
{
    auto T = path_tree({L("(1,0)"), L("(0,2)")});
    EXPECT_EQ(T->distance(VertexPt{0}, VertexPt{0}), L("(0,0)"));
    EXPECT_EQ(T->distance(VertexPt{0}, VertexPt{2}), L("(1,2)"));
}

TEST(FiniteTree, RejectsBadInput)
{
    EXPECT_THROW(FiniteEdgeTree(2, 2, {{0, 1, L("(0,0)")}}), Error);
    EXPECT_THROW(FiniteEdgeTree(2, 2, {{0, 1, L("(-1,5)")}}), Error);
    EXPECT_THROW(FiniteEdgeTree(2, 3, {{0, 1, L("(1,0)")}, {1, 0, L("(1,0)")}}), Error);
    EXPECT_THROW(FiniteEdgeTree(2, 3, {{0, 1, L("(1,0)")}}), Error);
    EXPECT_THROW(FiniteEdgeTree(2, 2, {{0, 1, L("(1)")}}), Error);
    auto T = path_tree({L("(1,0)")});
    EXPECT_THROW(T->validate(EdgePt{0, L("(2,0)")}), Error);
    EXPECT_THROW(T->validate(VertexPt{5}), Error);
}

TEST(FiniteTree, CanonicalEndpoints)
{
    auto T = path_tree({L("(1,0)")});
    EXPECT_TRUE(std::holds_alternative<VertexPt>(T->canonical(EdgePt{0, L("(0,0)")})));
    EXPECT_EQ(std::get<VertexPt>(T->canonical(EdgePt{0, L("(1,0)")})).id, 1);
}

TEST(FiniteTree, DistanceMatchesPathSumOracle)
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 40; ++t) {
        auto T = oracle::random_tree(rng, 3, 9);
        for (int i = 0; i < 50; ++i) {
            TreePoint p = oracle::random_point(rng, *T), q = oracle::random_point(rng, *T);
            EXPECT_EQ(T->distance(p, q), oracle::point_distance(*T, p, q));
        }
    }
}

TEST(FiniteTree, PointAtLiesOnTheSegment)
{
    std::mt19937_64 rng(22);
    for (int t = 0; t < 30; ++t) {
        auto T = oracle::random_tree(rng, 2, 8);
        for (int i = 0; i < 30; ++i) {
            TreePoint p = oracle::random_point(rng, *T), q = oracle::random_point(rng, *T);
            LexValue d = oracle::point_distance(*T, p, q);
            LexValue s = d * random_fraction(rng, 7);
            TreePoint x = T->point_at(p, q, s);
            EXPECT_EQ(oracle::point_distance(*T, p, x), s);
            EXPECT_EQ(oracle::point_distance(*T, x, q), d - s);
        }
    }
}

TEST(FiniteTree, SubdivisionInvariance)
{
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        auto T = oracle::random_tree(rng, 2, 7);
        int e = static_cast<int>(rng() % T->edges().size());
        LexValue at = T->edges()[static_cast<std::size_t>(e)].length * make_rational(1, 3);
        FiniteEdgeTree S = subdivide(*T, e, at);
        for (std::size_t a = 0; a < T->vertex_count(); ++a)
            for (std::size_t b = 0; b < T->vertex_count(); ++b)
                EXPECT_EQ(S.distance(VertexPt{static_cast<int>(a)}, VertexPt{static_cast<int>(b)}),
                          T->distance(VertexPt{static_cast<int>(a)}, VertexPt{static_cast<int>(b)}));
        int w = static_cast<int>(T->vertex_count());
        for (std::size_t a = 0; a < T->vertex_count(); ++a)
            EXPECT_EQ(S.distance(VertexPt{w}, VertexPt{static_cast<int>(a)}),
                      T->distance(EdgePt{e, at}, VertexPt{static_cast<int>(a)}));
    }
}

TEST(Cayley, WordMetric)
{
    CayleyTree T(2, 2, 2);
    EXPECT_EQ(T.distance(CayleyPt{{}, 0, {}}, CayleyPt{{1, -2, 1}, 0, {}}), L("(3,0)"));
    CayleyTree U(2, 2, 1);
    EXPECT_EQ(U.distance(CayleyPt{{}, 0, {}}, CayleyPt{{1, -2, 1}, 0, {}}), L("(0,3)"));
    EXPECT_EQ(U.distance(CayleyPt{{1}, 0, {}}, CayleyPt{{-1}, 0, {}}), L("(0,2)"));
    EXPECT_THROW(U.validate(CayleyPt{{1, -1}, 0, {}}), Error);
    EXPECT_THROW(U.validate(CayleyPt{{3}, 0, {}}), Error);
}

TEST(Cayley, EdgePointsAndInterpolation)
{
    CayleyTree T(2, 2, 1);
    TreePoint o = CayleyPt{{}, 0, {}}, ab = CayleyPt{{1, 2}, 0, {}}, aB = CayleyPt{{1, -2}, 0, {}};
    TreePoint m = T.point_at(ab, aB, L("(0,1/2)"));
    EXPECT_EQ(T.distance(o, m), L("(0,3/2)"));
    EXPECT_EQ(T.distance(m, aB), L("(0,3/2)"));
    std::mt19937_64 rng(24);
    auto pts = T.sample_points(rng, 40);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        LexValue d = T.distance(pts[i], pts[i + 1]);
        TreePoint h = T.point_at(pts[i], pts[i + 1], d.half());
        EXPECT_EQ(T.distance(pts[i], h), d.half());
        EXPECT_EQ(T.distance(h, pts[i + 1]), d.half());
    }
}

TEST(LambdaLineTree, DistanceAndBounds)
{
    LambdaLine line(2, 2, L("(0,0)"), L("(3,0)"));
    EXPECT_EQ(line.distance(LinePt{L("(1,5)")}, LinePt{L("(2,-1)")}), L("(1,-6)"));
    EXPECT_THROW(line.validate(LinePt{L("(4,0)")}), Error);
    LambdaLine low(2, 1);
    EXPECT_THROW(low.validate(LinePt{L("(1,0)")}), Error);
    EXPECT_EQ(low.distance(LinePt{L("(0,4)")}, LinePt{L("(0,-1)")}), L("(0,5)"));
}

TEST(Median, Examples)
{
    auto T = path_tree({L("(1,0)"), L("(0,2)")});
    TreePoint m = median(*T, VertexPt{0}, VertexPt{1}, VertexPt{2});
    EXPECT_TRUE(same_point(*T, m, VertexPt{1}));
    EXPECT_TRUE(same_point(*T, median(*T, VertexPt{0}, VertexPt{0}, VertexPt{2}), VertexPt{0}));
    auto Y = tripod();
    EXPECT_TRUE(same_point(*Y, median(*Y, VertexPt{1}, VertexPt{2}, VertexPt{3}), VertexPt{0}));
}

TEST(Median, LiesOnAllThreeSegments)
{
    std::mt19937_64 rng(25);
    for (int t = 0; t < 30; ++t) {
        auto T = oracle::random_tree(rng, 3, 10);
        for (int i = 0; i < 30; ++i) {
            TreePoint p = oracle::random_point(rng, *T), q = oracle::random_point(rng, *T),
                      r = oracle::random_point(rng, *T);
            TreePoint m = median(*T, p, q, r);
            auto on = [&](const TreePoint& a, const TreePoint& b) {
                return oracle::point_distance(*T, a, m) + oracle::point_distance(*T, m, b) ==
                       oracle::point_distance(*T, a, b);
            };
            EXPECT_TRUE(on(p, q));
            EXPECT_TRUE(on(q, r));
            EXPECT_TRUE(on(p, r));
        }
    }
}

TEST(FourPoint, Examples)
{
    // 4-cycle with unit sides: opposite corners at distance 2.
    DistanceMatrix c;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int k = std::abs(i - j);
            c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = LexValue{Rational(k == 3 ? 1 : k)};
        }
    EXPECT_FALSE(four_point_check(c));

    auto T = tripod();
    EXPECT_TRUE(four_point_check(distance_matrix(*T, {VertexPt{1}, VertexPt{1}, VertexPt{2}, VertexPt{3}})));

    DistanceMatrix bad = c;
    bad[0][1] = LexValue{Rational(7)};
    EXPECT_THROW(four_point_check(bad), Error);
}

TEST(FourPoint, HoldsOnRandomTrees)
{
    std::mt19937_64 rng(26);
    for (int t = 0; t < 30; ++t) {
        auto T = oracle::random_tree(rng, 3, 12);
        for (int i = 0; i < 100; ++i) {
            std::array<TreePoint, 4> q;
            for (auto& x : q) x = oracle::random_point(rng, *T);
            EXPECT_TRUE(four_point_check(distance_matrix(*T, q)));
        }
    }
}

TEST(Projection, Examples)
{
    auto T = tripod();
    ClosedSubtree Y = segment_subtree(VertexPt{1}, VertexPt{2});
    EXPECT_TRUE(same_point(*T, project_to_subtree(*T, VertexPt{1}, Y), VertexPt{1}));
    EXPECT_TRUE(same_point(*T, project_to_subtree(*T, VertexPt{3}, Y), VertexPt{0}));
    EXPECT_TRUE(same_point(*T, project_to_subtree(*T, VertexPt{3}, WholeTree{}), VertexPt{3}));
}

TEST(Projection, NearestPointOfHull)
{
    std::mt19937_64 rng(27);
    for (int t = 0; t < 30; ++t) {
        auto T = oracle::random_tree(rng, 2, 9);
        std::vector<TreePoint> gens;
        for (int g = 0; g < 3; ++g) gens.push_back(oracle::random_point(rng, *T));
        for (int i = 0; i < 20; ++i) {
            TreePoint x = oracle::random_point(rng, *T);
            TreePoint p = project_to_subtree(*T, x, hull_of(gens));
            EXPECT_TRUE(oracle::in_hull(*T, gens, p));
            // The bridge property: every generator is reached from x through p.
            for (const auto& g : gens)
                EXPECT_EQ(oracle::point_distance(*T, x, g),
                          oracle::point_distance(*T, x, p) + oracle::point_distance(*T, p, g));
        }
    }
}

TEST(SegmentIntersection, Examples)
{
    auto T = path_tree({L("(1,0)"), L("(1,0)"), L("(1,0)")});
    auto same = segment_intersection(*T, VertexPt{0}, VertexPt{1}, VertexPt{0}, VertexPt{1});
    ASSERT_TRUE(same);
    EXPECT_EQ(same->generators.size(), 2u);
    EXPECT_FALSE(segment_intersection(*T, VertexPt{0}, VertexPt{1}, VertexPt{2}, VertexPt{3}));
    auto mid = segment_intersection(*T, VertexPt{0}, VertexPt{2}, VertexPt{1}, VertexPt{3});
    ASSERT_TRUE(mid);
    ASSERT_EQ(mid->generators.size(), 2u);
    EXPECT_TRUE(same_point(*T, mid->generators[0], VertexPt{1}));
    EXPECT_TRUE(same_point(*T, mid->generators[1], VertexPt{2}));
}

TEST(SegmentIntersection, MatchesPointwiseMembership)
{
    std::mt19937_64 rng(28);
    for (int t = 0; t < 30; ++t) {
        auto T = oracle::random_tree(rng, 2, 8);
        for (int i = 0; i < 10; ++i) {
            TreePoint a = oracle::random_point(rng, *T), b = oracle::random_point(rng, *T),
                      c = oracle::random_point(rng, *T), d = oracle::random_point(rng, *T);
            auto I = segment_intersection(*T, a, b, c, d);
            // Every vertex is in the intersection iff it lies on both segments.
            for (std::size_t v = 0; v < T->vertex_count(); ++v) {
                TreePoint x = VertexPt{static_cast<int>(v)};
                bool both = oracle::in_hull(*T, {a, b}, x) && oracle::in_hull(*T, {c, d}, x);
                bool in = I && oracle::in_hull(*T, I->generators, x);
                EXPECT_EQ(both, in);
            }
        }
    }
}
