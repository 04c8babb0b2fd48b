#pragma once

#include "lambdatree/tree_point.hpp"

#include <array>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace lambdatree {

/// Capability contract for a presented Λ-tree.
///
/// Implementations must provide an exact metric and geodesic interpolation;
/// medians, projections and segment intersections are derived from those two.
class TreeSpace
{
  public:
    virtual ~TreeSpace() = default;

    /// Rank n of the ambient group Q^n.
    virtual std::size_t rank() const = 0;

    /// Throws `Error` when `p` does not denote a point of this tree.
    virtual void validate(const TreePoint& p) const = 0;

    /// Normal form of a point; equal points of a non-glued tree have equal normal forms.
    virtual TreePoint canonical(const TreePoint& p) const
    {
        validate(p);
        return p;
    }

    virtual LexValue distance(const TreePoint& p, const TreePoint& q) const = 0;

    /// The point of [from, to] at distance t from `from`; requires 0 <= t <= d(from, to).
    virtual TreePoint point_at(const TreePoint& from, const TreePoint& to, const LexValue& t) const = 0;

    /// Deterministic pseudo-random points for property checks.
    virtual std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const = 0;

    virtual std::string describe(const TreePoint& p) const = 0;

    /// Median of three points; trees with a cheaper formula may override.
    virtual TreePoint median3(const TreePoint& p, const TreePoint& q, const TreePoint& r) const
    {
        LexValue dpq = distance(p, q), dpr = distance(p, r), dqr = distance(q, r);
        return point_at(p, q, (dpq + dpr - dqr).half());
    }

  protected:
    void check_interpolation(const LexValue& t, const LexValue& d) const
    {
        if (t.sign() < 0 || d < t) throw Error("interpolation parameter outside the segment");
    }
};

using TreePtr = std::shared_ptr<const TreeSpace>;

inline bool same_point(const TreeSpace& T, const TreePoint& p, const TreePoint& q)
{
    return T.distance(p, q).is_zero();
}

inline bool on_segment(const TreeSpace& T, const TreePoint& x, const TreePoint& a, const TreePoint& b)
{
    return T.distance(a, x) + T.distance(x, b) == T.distance(a, b);
}

/// The unique point lying on all three segments spanned by p, q, r.
inline TreePoint median(const TreeSpace& T, const TreePoint& p, const TreePoint& q, const TreePoint& r)
{
    return T.median3(p, q, r);
}

inline TreePoint midpoint(const TreeSpace& T, const TreePoint& p, const TreePoint& q)
{
    return T.point_at(p, q, T.distance(p, q).half());
}

/// A closed linear subtree with an isometric chart onto a convex subset of Q^n.
class LinearSubtree
{
  public:
    virtual ~LinearSubtree() = default;

    virtual const TreeSpace& tree() const = 0;

    /// Gate projection of an arbitrary point of the tree onto the line.
    virtual TreePoint project(const TreePoint& x) const = 0;

    /// Signed chart coordinate of a point lying on the line.
    virtual LexValue coordinate(const TreePoint& p) const = 0;

    /// Point with the given chart coordinate; throws if it is off the presented line.
    virtual TreePoint at(const LexValue& s) const = 0;

    /// A point far out in the given direction (+1/-1); larger `scale` goes further.
    virtual std::optional<TreePoint> far_point(int direction, long scale) const = 0;

    virtual std::string describe() const = 0;
};

using LinePtr = std::shared_ptr<const LinearSubtree>;

/// Convex hull of finitely many points.
struct Hull
{
    std::vector<TreePoint> generators;
};

struct WholeTree
{
};

/// A closed subtree presented as a finite hull, a full line, or the whole tree.
using ClosedSubtree = std::variant<Hull, LinePtr, WholeTree>;

inline ClosedSubtree hull_of(std::vector<TreePoint> gens)
{
    if (gens.empty()) throw Error("empty hull");
    return Hull{std::move(gens)};
}

inline ClosedSubtree segment_subtree(TreePoint a, TreePoint b) { return Hull{{std::move(a), std::move(b)}}; }
inline ClosedSubtree point_subtree(TreePoint a) { return Hull{{std::move(a)}}; }

/// Projection of x onto hull{a, b}.
inline TreePoint project_to_segment(const TreeSpace& T, const TreePoint& x, const TreePoint& a, const TreePoint& b)
{
    return median(T, x, a, b);
}

/// Projection onto a finite hull: nearest of the projections onto the generator
/// segments [g0, gj], which together cover the hull.
inline TreePoint project_to_hull(const TreeSpace& T, const TreePoint& x, const std::vector<TreePoint>& gens)
{
    if (gens.empty()) throw Error("projection onto an empty subtree");
    if (gens.size() == 2) return project_to_segment(T, x, gens[0], gens[1]);
    TreePoint best = gens.front();
    LexValue best_d = T.distance(x, best);
    for (std::size_t j = 1; j < gens.size(); ++j) {
        TreePoint p = project_to_segment(T, x, gens.front(), gens[j]);
        LexValue d = T.distance(x, p);
        if (d < best_d) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

inline TreePoint project_to_subtree(const TreeSpace& T, const TreePoint& x, const ClosedSubtree& Y)
{
    T.validate(x);
    if (auto h = std::get_if<Hull>(&Y)) return project_to_hull(T, x, h->generators);
    if (auto l = std::get_if<LinePtr>(&Y)) return (*l)->project(x);
    return x;
}

inline bool subtree_contains(const TreeSpace& T, const ClosedSubtree& Y, const TreePoint& x)
{
    if (std::holds_alternative<WholeTree>(Y)) return true;
    return same_point(T, project_to_subtree(T, x, Y), x);
}

/// [a,b] ∩ [c,d]: empty, a single point, or a segment (returned as a one- or two-point hull).
inline std::optional<Hull> segment_intersection(const TreeSpace& T, const TreePoint& a, const TreePoint& b,
                                                const TreePoint& c, const TreePoint& d)
{
    TreePoint p = median(T, a, b, c);
    TreePoint q = median(T, a, b, d);
    if (!same_point(T, p, q)) return Hull{{p, q}};
    if (on_segment(T, p, c, d)) return Hull{{p}};
    return std::nullopt;
}

/// Intersection of a segment with a closed subtree.
inline std::optional<Hull> segment_subtree_intersection(const TreeSpace& T, const TreePoint& a, const TreePoint& b,
                                                        const ClosedSubtree& Y)
{
    if (std::holds_alternative<WholeTree>(Y)) return Hull{{a, b}};
    TreePoint p = project_to_subtree(T, a, Y);
    TreePoint q = project_to_subtree(T, b, Y);
    if (!same_point(T, p, q)) return Hull{{p, q}};
    if (on_segment(T, p, a, b)) return Hull{{p}};
    return std::nullopt;
}

/// Reduces a hull to a minimal generating set (points not inside the hull of the others).
inline Hull prune_hull(const TreeSpace& T, Hull h)
{
    std::vector<TreePoint> uniq;
    for (auto& g : h.generators) {
        bool dup = false;
        for (auto& u : uniq)
            if (same_point(T, u, g)) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(g);
    }
    bool changed = true;
    while (changed && uniq.size() > 2) {
        changed = false;
        for (std::size_t i = 0; i < uniq.size(); ++i) {
            std::vector<TreePoint> rest;
            for (std::size_t j = 0; j < uniq.size(); ++j)
                if (j != i) rest.push_back(uniq[j]);
            if (same_point(T, project_to_hull(T, uniq[i], rest), uniq[i])) {
                uniq = std::move(rest);
                changed = true;
                break;
            }
        }
    }
    return Hull{std::move(uniq)};
}

/// Signals a line-line overlap that extends beyond every far point the lines expose.
class UnboundedOverlap : public Error
{
  public:
    UnboundedOverlap() : Error("line overlap exceeds the presented far points") {}
};

/// Intersection of two lines: empty, a point or a segment. Throws `UnboundedOverlap`
/// when the overlap could not be bounded by 2^20 far-point doublings.
inline std::optional<Hull> line_intersection(const TreeSpace& T, const LinearSubtree& L1, const LinearSubtree& L2)
{
    auto b = L2.at(LexValue::zero(T.rank()));
    TreePoint p = L1.project(b);
    if (!same_point(T, L2.project(p), p)) return std::nullopt;
    std::array<TreePoint, 2> ends{p, p};
    LexValue cp = L1.coordinate(p);
    for (int side = 0; side < 2; ++side) {
        int dir = side == 0 ? -1 : 1;
        bool bounded = false;
        for (long scale = 1; scale <= (1L << 20); scale *= 2) {
            auto f = L1.far_point(dir, scale);
            if (!f) {
                bounded = true;
                break;
            }
            if ((L1.coordinate(*f) - cp).sign() * dir < 0) continue;
            TreePoint q = L2.project(*f);
            if (!same_point(T, q, *f)) {
                ends[side] = q;
                bounded = true;
                break;
            }
            if (scale > 1 && same_point(T, ends[side], *f)) {
                bounded = true;
                break;
            }
            ends[side] = *f;
        }
        if (!bounded) throw UnboundedOverlap();
    }
    if (same_point(T, ends[0], ends[1])) return Hull{{ends[0]}};
    return Hull{{ends[0], ends[1]}};
}

/// Intersection of two closed subtrees of T (result is a hull, or nullopt if empty).
inline std::optional<Hull> subtree_intersection(const TreeSpace& T, const ClosedSubtree& A, const ClosedSubtree& B)
{
    auto whole_as_hull = [&](const ClosedSubtree& other) -> std::optional<Hull> {
        if (auto h = std::get_if<Hull>(&other)) return *h;
        throw Error("intersection of the whole tree with a line has no finite hull");
    };
    if (std::holds_alternative<WholeTree>(A)) return whole_as_hull(B);
    if (std::holds_alternative<WholeTree>(B)) return whole_as_hull(A);
    auto la = std::get_if<LinePtr>(&A);
    auto lb = std::get_if<LinePtr>(&B);
    if (la && lb) return line_intersection(T, **la, **lb);
    const Hull& h = la ? std::get<Hull>(B) : std::get<Hull>(A);
    const ClosedSubtree& other = la ? A : B;
    std::vector<TreePoint> pieces;
    const auto& g = h.generators;
    for (std::size_t j = 0; j < g.size(); ++j) {
        auto piece = segment_subtree_intersection(T, g.front(), g[j], other);
        if (piece)
            for (auto& pt : piece->generators) pieces.push_back(pt);
    }
    if (pieces.empty()) return std::nullopt;
    return prune_hull(T, Hull{std::move(pieces)});
}

/// Chart on a segment hull{a, b}: coordinate is the distance from a.
class SegmentChart final : public LinearSubtree
{
  public:
    SegmentChart(TreePtr tree, TreePoint a, TreePoint b)
        : tree_(std::move(tree)), a_(std::move(a)), b_(std::move(b)), length_(tree_->distance(a_, b_))
    {
    }

    const TreeSpace& tree() const override { return *tree_; }
    TreePoint project(const TreePoint& x) const override { return median(*tree_, x, a_, b_); }
    LexValue coordinate(const TreePoint& p) const override { return tree_->distance(a_, p); }
    TreePoint at(const LexValue& s) const override
    {
        if (s.sign() < 0 || length_ < s) throw Error("coordinate " + s.str() + " is off the segment");
        return tree_->point_at(a_, b_, s);
    }
    std::optional<TreePoint> far_point(int direction, long) const override { return direction < 0 ? a_ : b_; }
    std::string describe() const override
    {
        return "segment[" + tree_->describe(a_) + "," + tree_->describe(b_) + "]";
    }

  private:
    TreePtr tree_;
    TreePoint a_, b_;
    LexValue length_;
};

/// A 4x4 symmetric distance matrix.
using DistanceMatrix = std::array<std::array<LexValue, 4>, 4>;

/// Validates the matrix is a pseudo-metric on four labels; throws `Error` otherwise.
inline void validate_distance_matrix(const DistanceMatrix& m)
{
    for (int i = 0; i < 4; ++i) {
        if (!m[i][i].is_zero()) throw Error("distance matrix has a nonzero diagonal entry");
        for (int j = 0; j < 4; ++j) {
            if (m[i][j] != m[j][i]) throw Error("distance matrix is not symmetric");
            if (m[i][j].sign() < 0) throw Error("distance matrix has a negative entry");
            for (int k = 0; k < 4; ++k)
                if (m[i][j] + m[j][k] < m[i][k]) throw Error("distance matrix violates the triangle inequality");
        }
    }
}

/// 0-hyperbolicity: d(x,y)+d(u,v) <= max{d(x,u)+d(y,v), d(x,v)+d(y,u)} for every relabeling.
inline bool four_point_check(const DistanceMatrix& m)
{
    validate_distance_matrix(m);
    // The three pairings of {0,1,2,3}; the condition for all labelings is that the
    // largest of the three sums is attained at least twice.
    std::array<LexValue, 3> s{m[0][1] + m[2][3], m[0][2] + m[1][3], m[0][3] + m[1][2]};
    for (int i = 0; i < 3; ++i) {
        const LexValue& a = s[static_cast<std::size_t>((i + 1) % 3)];
        const LexValue& b = s[static_cast<std::size_t>((i + 2) % 3)];
        if (lex_max(a, b) < s[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

inline DistanceMatrix distance_matrix(const TreeSpace& T, const std::array<TreePoint, 4>& pts)
{
    DistanceMatrix m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                i == j ? LexValue::zero(T.rank())
                       : T.distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    return m;
}

/// Small random rational in [0, 1] with bounded denominator.
inline Rational random_fraction(std::mt19937_64& rng, long max_den = 12)
{
    std::uniform_int_distribution<long> den(1, max_den);
    long q = den(rng);
    std::uniform_int_distribution<long> num(0, q);
    return make_rational(num(rng), q);
}

inline Rational random_rational(std::mt19937_64& rng, long bound = 5, long max_den = 6)
{
    std::uniform_int_distribution<long> den(1, max_den);
    long q = den(rng);
    std::uniform_int_distribution<long> num(-bound * q, bound * q);
    return make_rational(num(rng), q);
}

}  // namespace lambdatree
