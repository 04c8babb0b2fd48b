#include "support.hpp"

#include <gtest/gtest.h>

using namespace lambdatree;

namespace {

LexValue L(const char* s) { return LexValue::parse(s); }

VertexActionData z2_star(std::shared_ptr<Alphabet> names, const char* extra, std::size_t rank)
{
    if (rank == 2)
        return abelian_free_product(names, {"c1", "c2"}, {L("(1,0)"), L("(0,1)")}, {extra}, {L("(0,1/3)")},
                                    L("(0,1/2)"));
    return abelian_free_product(names, {"c1", "c2"}, {L("(1,0,0)"), L("(0,1,0)")}, {extra}, {L("(0,0,1/3)")},
                                L("(0,0,1/2)"));
}

}  // namespace

TEST(StockActions, Examples)
{
    Alphabet n;
    auto F = free_cayley(n, 2, 2, 1);
    EXPECT_EQ(translation_length(*F, n.parse("a")), L("(0,1)"));
    EXPECT_THROW(free_cayley(n, 2, 2, 3), Error);

    Alphabet m;
    auto Z2 = lex_line_abelian(m, {"s", "t"}, {L("(1,0)"), L("(0,1)")});
    EXPECT_TRUE(verify_free_ball(*Z2, Z2->generators(), 6).pass);
    Alphabet k;
    EXPECT_THROW(lex_line_abelian(k, {"s"}, {L("(0,0)")}), Error);

    auto T = finite_tree(2, 2, {{0, 1, L("(1,0)")}});
    EXPECT_EQ(T->tree().distance(VertexPt{0}, VertexPt{1}), L("(1,0)"));
}

TEST(BranchingLocus, SingleAxisHasNoLocus)
{
    Alphabet n;
    auto Z2 = lex_line_abelian(n, {"s", "t"}, {L("(1,0)"), L("(0,1)")});
    VertexActionData V{Z2, Z2->generators(), std::make_shared<LineChart>(Z2->line()), {}};
    auto B = branching_locus(V, 4);
    EXPECT_TRUE(B.pieces.empty());
    EXPECT_TRUE(B.points.empty());
    EXPECT_TRUE(B.D.empty());
    EXPECT_EQ(B.conjugates, 0u);
}

TEST(BranchingLocus, TwoLinesCrossingAtAPoint)
{
    Alphabet n;
    auto F = free_cayley(n, 2, 2, 1);
    auto a = std::make_shared<GroupAxis>(F, std::vector<Word>{n.parse("a")});
    auto b = std::make_shared<GroupAxis>(F, std::vector<Word>{n.parse("b")});
    VertexActionData V{F, {n.id("a")}, a, {b}};
    auto B = branching_locus(V, 0);
    ASSERT_EQ(B.pieces.size(), 1u);
    ASSERT_EQ(B.points.size(), 1u);
    EXPECT_TRUE(same_point(F->tree(), B.points[0], F->base_point()));
    ASSERT_EQ(B.D.size(), 1u);
    EXPECT_EQ(B.D[0].lo, L("(0,0)"));
    EXPECT_EQ(B.D[0].hi, L("(0,0)"));
}

TEST(BranchingLocus, MagnitudeBoundForZ2Axes)
{
    auto names = std::make_shared<Alphabet>();
    auto V = z2_star(names, "x", 2);
    auto B = branching_locus(V, 4);
    ASSERT_TRUE(B.magnitude_bound);
    EXPECT_EQ(*B.magnitude_bound, 1u);
    EXPECT_GT(B.conjugates, 0u);
    EXPECT_FALSE(B.pieces.empty());
    EXPECT_TRUE(B.bound_holds) << B.bound_violation;
    for (const auto& d : B.D) EXPECT_LE(d.width().magnitude(), 1u);
    for (const auto& p : B.pieces) {
        EXPECT_LE(p.diameter.magnitude(), 1u);
        // Each piece lies on both the axis and the conjugate line.
        TranslatedLine line(V.action, V.axis, p.conjugator);
        EXPECT_TRUE(same_point(V.action->tree(), line.project(p.lo), p.lo));
        EXPECT_TRUE(same_point(V.action->tree(), line.project(p.hi), p.hi));
    }
}

TEST(Amalgam, AutoOffsetAvoidsTheProhibitedSet)
{
    auto names = std::make_shared<Alphabet>();
    auto A = z2_star(names, "x", 2), B = z2_star(names, "y", 2);
    auto r = acylindrical_amalgam(A, B, std::nullopt, 4, 6, names);
    EXPECT_TRUE(r.offset_auto);
    EXPECT_FALSE(r.offset_prohibited);
    for (const auto& d : r.prohibited) EXPECT_FALSE(d.contains(r.offset));
    // The smallest admissible j/7 at the top level of C.
    EXPECT_EQ(r.offset, L("(1/7,0)"));
    for (long j = 0; j < 1; ++j) {
        LexValue t = generic_candidate(2, 2, j, 6);
        EXPECT_TRUE(std::any_of(r.prohibited.begin(), r.prohibited.end(),
                                [&](const DifferenceInterval& d) { return d.contains(t); }));
    }
    auto ball = verify_free_ball(*r.action, r.action->generators(), 4);
    EXPECT_TRUE(ball.pass);
}

TEST(Amalgam, ProhibitedOffsetIsFlagged)
{
    auto names = std::make_shared<Alphabet>();
    auto A = z2_star(names, "x", 2), B = z2_star(names, "y", 2);
    auto r = acylindrical_amalgam(A, B, L("(0,0)"), 4, 6, names);
    EXPECT_FALSE(r.offset_auto);
    EXPECT_TRUE(r.offset_prohibited);
    AmalgamView view(r.action, r.probes);
    FreenessOptions opt;
    opt.max_class_diameter = 2;
    auto rep = freeness_criterion_check(view, 3, 6, opt);
    EXPECT_NE(rep.status, FreenessStatus::pass);
    EXPECT_FALSE(rep.witnesses.empty());
}

TEST(Amalgam, WholeLineGluingIsALine)
{
    auto names = std::make_shared<Alphabet>();
    auto A = lex_line_abelian(*names, {"s", "t"}, {L("(1,0)"), L("(0,1)")});
    auto B = lex_line_abelian(*names, {"s", "t"}, {L("(1,0)"), L("(0,1)")});
    VertexActionData VA{A, A->generators(), std::make_shared<LineChart>(A->line()), {}};
    VertexActionData VB{B, B->generators(), std::make_shared<LineChart>(B->line()), {}};
    auto r = acylindrical_amalgam(VA, VB, L("(0,0)"), 4, 6, names);
    EXPECT_TRUE(r.prohibited.empty());
    const TreeSpace& T = r.action->tree();
    std::mt19937_64 rng(61);
    for (int i = 0; i < 30; ++i) {
        LexValue x{random_rational(rng), random_rational(rng)}, y{random_rational(rng), random_rational(rng)};
        EXPECT_EQ(T.distance(make_dual(0, LinePt{x}), make_dual(1, LinePt{y})), (x - y).abs());
        EXPECT_EQ(T.distance(make_dual(0, LinePt{x}), make_dual(1, LinePt{x})), L("(0,0)"));
    }
    EXPECT_TRUE(verify_free_ball(*r.action, r.action->generators(), 5).pass);
}

TEST(Amalgam, RejectsMismatchedEdgeGroups)
{
    auto names = std::make_shared<Alphabet>();
    auto A = z2_star(names, "x", 2);
    auto B = abelian_free_product(names, {"c1", "c2"}, {L("(1,0)"), L("(0,2)")}, {"y"}, {L("(0,1/3)")}, L("(0,1/2)"));
    EXPECT_THROW(acylindrical_amalgam(A, B, std::nullopt, 2, 6, names), Error);
}

TEST(Hnn, AutoLengthsAvoidCollisions)
{
    auto names = std::make_shared<Alphabet>();
    auto A = z2_star(names, "x", 3);
    auto r = hnn_abelianized(names, A, 1, std::nullopt, 4, 5);
    EXPECT_TRUE(r.lengths_auto);
    ASSERT_EQ(r.lengths.size(), 1u);
    EXPECT_EQ(r.lengths[0].magnitude(), 1u);
    EXPECT_TRUE(r.collisions.empty());
    EXPECT_TRUE(r.locus.bound_holds) << r.locus.bound_violation;
    ASSERT_TRUE(r.locus.magnitude_bound);
    EXPECT_EQ(*r.locus.magnitude_bound, 2u);
    // No element of the exponent ball outside C has its length in D.
    for (long e0 = -2; e0 <= 2; ++e0)
        for (long e1 = -2; e1 <= 2; ++e1)
            for (long e2 = -2; e2 <= 2; ++e2) {
                if (e2 == 0 || std::labs(e0) + std::labs(e1) + std::labs(e2) > 5) continue;
                LexValue t = L("(1,0,0)") * Rational(e0) + L("(0,1,0)") * Rational(e1) + r.lengths[0] * Rational(e2);
                EXPECT_FALSE(r.locus.in_D(t)) << t;
            }
    EXPECT_TRUE(verify_free_ball(*r.action, r.action->generators(), 3).pass);
}

TEST(Hnn, LengthInsideDReproducesTheCollision)
{
    auto names = std::make_shared<Alphabet>();
    auto A = z2_star(names, "x", 3);
    auto r = hnn_abelianized(names, A, 1, std::vector<LexValue>{L("(0,0,1/6)")}, 4, 5);
    ASSERT_FALSE(r.collisions.empty());
    const TreeSpace& T = A.action->tree();
    for (const auto& c : r.collisions) {
        EXPECT_TRUE(r.locus.in_D(c.length));
        EXPECT_EQ(c.x2 - c.x, c.length);
        EXPECT_EQ(T.distance(c.p, c.p2), c.length.abs());
        EXPECT_EQ(A.axis->coordinate(c.p), c.x);
    }
}

TEST(Hnn, RejectsDegenerateInput)
{
    auto names = std::make_shared<Alphabet>();
    auto A = z2_star(names, "x", 3);
    EXPECT_THROW(hnn_abelianized(names, A, 0, std::nullopt, 2, 5), Error);
    EXPECT_THROW(hnn_abelianized(names, A, 2, std::nullopt, 2, 5), Error);
    EXPECT_THROW(hnn_abelianized(names, A, 1, std::vector<LexValue>{L("(0,0,1)"), L("(0,0,2)")}, 2, 5), Error);
}
