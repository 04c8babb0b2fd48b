#include "support.hpp"

#include <gtest/gtest.h>

using namespace lambdatree;

namespace {

LexValue L(const char* s) { return LexValue::parse(s); }

struct CayleyFixture
{
    Alphabet names;
    std::shared_ptr<const CayleyGroupAction> G = free_cayley(names, 2, 2, 1);
    Word w(const char* s) const { return names.parse(s); }
};

/// Z * Z as two unit-speed lines glued along [0, (0,1/2)]: c acts on the first line,
/// x on the second, both by (1,0).
struct FreeProductFixture
{
    std::shared_ptr<Alphabet> names = std::make_shared<Alphabet>();
    VertexActionData V = abelian_free_product(names, {"c"}, {L("(1,0)")}, {"x"}, {L("(1,0)")}, L("(0,1/2)"));
    Word w(const char* s) const { return names->parse(s); }
};

}  // namespace

TEST(TranslationLength, Examples)
{
    CayleyFixture f;
    EXPECT_EQ(translation_length(*f.G, {}), L("(0,0)"));
    EXPECT_EQ(translation_length(*f.G, f.w("a")), L("(0,1)"));
    EXPECT_EQ(translation_length(*f.G, f.w("a*b*a^-1")), L("(0,1)"));

    Alphabet n;
    auto line = lex_line_abelian(n, {"t"}, {L("(1,0)")});
    EXPECT_EQ(translation_length(*line, n.parse("t")), L("(1,0)"));
    EXPECT_EQ(translation_length(*line, n.parse("t^-3")), L("(3,0)"));
}

TEST(TranslationLength, CyclicallyReducedWordLength)
{
    CayleyFixture f;
    auto ball = word_ball(f.G->generators(), 5);
    for (const auto& w : ball) {
        // Cyclic reduction by hand on the spelled-out word: strip inverse letters from both ends.
        std::vector<int> s;
        for (const auto& l : w)
            for (long k = 0; k < std::abs(l.exp); ++k) s.push_back(l.exp > 0 ? l.gen + 1 : -(l.gen + 1));
        std::size_t i = 0, j = s.size();
        while (j - i >= 2 && s[i] == -s[j - 1]) {
            ++i;
            --j;
        }
        EXPECT_EQ(translation_length(*f.G, w), LexValue::unit(2, 1) * Rational(static_cast<long>(j - i)));
    }
}

TEST(TranslationLength, BasepointIndependenceAndAxisPowers)
{
    std::mt19937_64 rng(41);
    CayleyFixture f;
    FreeProductFixture fp;
    std::vector<std::pair<const GroupAction*, Word>> cases{
        {f.G.get(), f.w("a")},       {f.G.get(), f.w("a*b^-1")},   {f.G.get(), f.w("b*a*b*a^-1")},
        {fp.V.action.get(), fp.w("c")}, {fp.V.action.get(), fp.w("c*x")}, {fp.V.action.get(), fp.w("x^-1*c^2*x")}};
    for (const auto& [G, g] : cases) {
        LexValue l = translation_length(*G, g);
        EXPECT_GT(l.sign(), 0);
        for (const auto& x : G->tree().sample_points(rng, 100)) {
            EXPECT_EQ(translation_length(*G, g, x), l);
            TreePoint p = classify(*G, g, x).axis_sample;
            for (long k = -5; k <= 5; ++k)
                EXPECT_EQ(G->tree().distance(p, G->act(power(g, k), p)), Rational(std::abs(k)) * l);
        }
    }
}

TEST(Classify, Examples)
{
    CayleyFixture f;
    TreePoint x = CayleyPt{{1, 2}, 0, {}};
    auto id = classify(*f.G, {}, x);
    EXPECT_EQ(id.type, IsometryType::elliptic);
    EXPECT_TRUE(same_point(f.G->tree(), id.axis_sample, x));

    auto T = std::make_shared<FiniteEdgeTree>(2, 2, std::vector<FiniteEdgeTree::Edge>{{0, 1, L("(1,0)")}});
    Alphabet n;
    int z = n.add("z");
    TrivialAction triv(T, {z}, VertexPt{0});
    auto r = classify(triv, {{z, 1}}, VertexPt{1});
    EXPECT_EQ(r.type, IsometryType::elliptic);
    EXPECT_TRUE(same_point(*T, r.axis_sample, VertexPt{1}));
}

TEST(Classify, OffAxisPointProjectsToTheLine)
{
    FreeProductFixture fp;
    const TreeSpace& T = fp.V.action->tree();
    // A point of the second line outside the glued segment.
    TreePoint x = make_dual(1, LinePt{L("(-5,0)")});
    auto r = classify(*fp.V.action, fp.w("c"), x);
    ASSERT_EQ(r.type, IsometryType::hyperbolic);
    EXPECT_TRUE(same_point(T, r.axis_sample, fp.V.axis->project(x)));
    EXPECT_TRUE(same_point(T, r.axis_sample, make_dual(0, LinePt{L("(0,0)")})));
    // Bridge identity d(x, gx) = 2 d(x, p) + l(g).
    EXPECT_EQ(T.distance(x, fp.V.action->act(fp.w("c"), x)), 2 * T.distance(x, r.axis_sample) + r.length);
}

TEST(SameAxis, Examples)
{
    CayleyFixture f;
    TreePoint o = f.G->base_point();
    EXPECT_EQ(same_axis_test(*f.G, f.w("a"), f.w("a^2"), 3, o), AxisVerdict::same);
    EXPECT_EQ(same_axis_test(*f.G, f.w("a"), f.w("b"), 3, o), AxisVerdict::different);
    EXPECT_EQ(same_axis_test(*f.G, f.w("a"), f.w("a"), 0, o), AxisVerdict::inconclusive);
    EXPECT_THROW(same_axis_test(*f.G, f.w("a"), {}, 3, o), Error);

    Alphabet n;
    auto line = lex_line_abelian(n, {"s", "t"}, {L("(0,1)"), L("(0,2)")});
    EXPECT_EQ(same_axis_test(*line, n.parse("s"), n.parse("t"), 3, line->base_point()), AxisVerdict::same);
}

TEST(AxesIntersection, DisjointAxesInAGluedTree)
{
    FreeProductFixture fp;
    TranslatedLine moved(fp.V.action, fp.V.axis, fp.w("x"));
    auto r = axes_intersection(fp.V.action->tree(), *fp.V.axis, moved);
    EXPECT_FALSE(r.intersection);
    EXPECT_EQ(r.magnitude, 0u);
}

TEST(AxesIntersection, CommonAxisIsUnbounded)
{
    FreeProductFixture fp;
    EXPECT_THROW(axes_intersection(fp.V.action->tree(), *fp.V.axis, *fp.V.axis), UnboundedOverlap);
}

TEST(AxesIntersection, FreeGeneratorsMeetInOnePoint)
{
    CayleyFixture f;
    GroupAxis A(f.G, {f.w("a")}), B(f.G, {f.w("b")});
    auto r = axes_intersection(f.G->tree(), A, B);
    ASSERT_TRUE(r.intersection);
    EXPECT_EQ(r.intersection->generators.size(), 1u);
    EXPECT_EQ(r.diameter, L("(0,0)"));
}

TEST(CommutatorCheck, Examples)
{
    Alphabet n;
    auto line = lex_line_abelian(n, {"s", "t"}, {L("(0,1)"), L("(0,2)")});
    LineChart chart(line->line());
    auto r = commutator_elliptic_check(*line, n.parse("s"), n.parse("t"), chart, chart);
    ASSERT_TRUE(r);
    EXPECT_TRUE(*r);

    CayleyFixture f;
    GroupAxis A(f.G, {f.w("a")}), B(f.G, {f.w("b")});
    EXPECT_FALSE(commutator_elliptic_check(*f.G, f.w("a"), f.w("b"), A, B));
}

TEST(VerifyFreeBall, Examples)
{
    CayleyFixture f;
    auto free6 = verify_free_ball(*f.G, f.G->generators(), 6);
    EXPECT_TRUE(free6.pass);
    EXPECT_EQ(free6.words_checked, 4u + 12 + 36 + 108 + 324 + 972);

    auto T = std::make_shared<FiniteEdgeTree>(2, 1, std::vector<FiniteEdgeTree::Edge>{});
    Alphabet n;
    int z = n.add("z");
    TrivialAction triv(T, {z}, VertexPt{0});
    auto fail = verify_free_ball(triv, {z}, 3);
    EXPECT_FALSE(fail.pass);
    ASSERT_TRUE(fail.failure);
    EXPECT_EQ(n.format(*fail.failure), "z");

    Alphabet m;
    auto line = lex_line_abelian(m, {"s", "t"}, {L("(1,0)"), L("(0,1)")});
    EXPECT_TRUE(verify_free_ball(*line, line->generators(), 8).pass);
}

TEST(VerifyFreeBall, FirstFailureDoesNotDependOnJobs)
{
    Alphabet m;
    // s^2 t^-1 is trivial, so the ball contains elliptic words.
    auto line = lex_line_abelian(m, {"s", "t"}, {L("(0,1)"), L("(0,2)")});
    auto one = verify_free_ball(*line, line->generators(), 4, 1);
    auto four = verify_free_ball(*line, line->generators(), 4, 4);
    ASSERT_FALSE(one.pass);
    ASSERT_TRUE(one.failure && four.failure);
    EXPECT_EQ(m.format(*one.failure), m.format(*four.failure));
    EXPECT_EQ(one.words_checked, four.words_checked);
}
