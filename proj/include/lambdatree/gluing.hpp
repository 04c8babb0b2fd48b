#pragma once

#include "lambdatree/tree_space.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lambdatree {

/// An isometry between closed subtrees of two trees.
///
/// Hull form: generators a_i of the source correspond to b_i of the target, and the
/// correspondence must preserve all pairwise distances. Linear form: two charted lines,
/// an anchor pair and an orientation.
class GluingMap
{
  public:
    static GluingMap hulls(TreePtr src_tree, std::vector<TreePoint> src, TreePtr tgt_tree, std::vector<TreePoint> tgt)
    {
        if (src.empty() || src.size() != tgt.size()) throw Error("hull gluing needs matching nonempty generator lists");
        for (const auto& p : src) src_tree->validate(p);
        for (const auto& p : tgt) tgt_tree->validate(p);
        for (std::size_t i = 0; i < src.size(); ++i)
            for (std::size_t j = i + 1; j < src.size(); ++j)
                if (src_tree->distance(src[i], src[j]) != tgt_tree->distance(tgt[i], tgt[j]))
                    throw Error("hull gluing does not preserve the distance between generators " + std::to_string(i) +
                                " and " + std::to_string(j));
        GluingMap m;
        m.src_tree_ = std::move(src_tree);
        m.tgt_tree_ = std::move(tgt_tree);
        m.src_gens_ = std::move(src);
        m.tgt_gens_ = std::move(tgt);
        return m;
    }

    static GluingMap point(TreePtr src_tree, TreePoint a, TreePtr tgt_tree, TreePoint b)
    {
        return hulls(std::move(src_tree), {std::move(a)}, std::move(tgt_tree), {std::move(b)});
    }

    /// phi(x) = tgt.at(t0 + orientation * (src.coordinate(x) - s0)).
    static GluingMap lines(TreePtr src_tree, LinePtr src, TreePtr tgt_tree, LinePtr tgt, const TreePoint& s0,
                           const TreePoint& t0, int orientation)
    {
        if (orientation != 1 && orientation != -1) throw Error("orientation must be +1 or -1");
        GluingMap m;
        m.src_tree_ = std::move(src_tree);
        m.tgt_tree_ = std::move(tgt_tree);
        m.src_line_ = std::move(src);
        m.tgt_line_ = std::move(tgt);
        m.s0_ = m.src_line_->coordinate(m.src_line_->project(s0));
        m.t0_ = m.tgt_line_->coordinate(m.tgt_line_->project(t0));
        m.orientation_ = orientation;
        return m;
    }

    /// Linear form with anchors given as chart coordinates.
    static GluingMap lines_by_coordinate(TreePtr src_tree, LinePtr src, TreePtr tgt_tree, LinePtr tgt, LexValue s0,
                                         LexValue t0, int orientation)
    {
        if (orientation != 1 && orientation != -1) throw Error("orientation must be +1 or -1");
        GluingMap m;
        m.src_tree_ = std::move(src_tree);
        m.tgt_tree_ = std::move(tgt_tree);
        m.src_line_ = std::move(src);
        m.tgt_line_ = std::move(tgt);
        m.s0_ = std::move(s0);
        m.t0_ = std::move(t0);
        m.orientation_ = orientation;
        return m;
    }

    bool is_linear() const { return src_line_ != nullptr; }
    const TreeSpace& source_tree() const { return *src_tree_; }
    const TreeSpace& target_tree() const { return *tgt_tree_; }
    TreePtr source_tree_ptr() const { return src_tree_; }
    TreePtr target_tree_ptr() const { return tgt_tree_; }
    const LinePtr& source_line() const { return src_line_; }
    const LinePtr& target_line() const { return tgt_line_; }
    const LexValue& source_anchor() const { return s0_; }
    const LexValue& target_anchor() const { return t0_; }
    int orientation() const { return orientation_; }
    const std::vector<TreePoint>& source_generators() const { return src_gens_; }
    const std::vector<TreePoint>& target_generators() const { return tgt_gens_; }

    ClosedSubtree source() const
    {
        if (src_line_) return src_line_;
        return Hull{src_gens_};
    }

    ClosedSubtree target() const
    {
        if (tgt_line_) return tgt_line_;
        return Hull{tgt_gens_};
    }

    /// Image of a point of the source subtree.
    TreePoint apply(const TreePoint& x) const
    {
        if (src_line_) {
            LexValue s = src_line_->coordinate(x);
            return tgt_line_->at(t0_ + (s - s0_) * Rational(orientation_));
        }
        const TreeSpace& Y = *src_tree_;
        if (src_gens_.size() == 1 || same_point(Y, x, src_gens_.front())) {
            if (!same_point(Y, x, src_gens_.front())) throw Error("point is outside the glued subtree");
            return tgt_gens_.front();
        }
        for (std::size_t j = 1; j < src_gens_.size(); ++j)
            if (on_segment(Y, x, src_gens_.front(), src_gens_[j]))
                return tgt_tree_->point_at(tgt_gens_.front(), tgt_gens_[j], Y.distance(src_gens_.front(), x));
        throw Error("point is outside the glued subtree");
    }

    GluingMap inverse() const
    {
        GluingMap m;
        m.src_tree_ = tgt_tree_;
        m.tgt_tree_ = src_tree_;
        m.src_gens_ = tgt_gens_;
        m.tgt_gens_ = src_gens_;
        m.src_line_ = tgt_line_;
        m.tgt_line_ = src_line_;
        m.s0_ = t0_;
        m.t0_ = s0_;
        m.orientation_ = orientation_;
        return m;
    }

  private:
    GluingMap() = default;

    TreePtr src_tree_, tgt_tree_;
    std::vector<TreePoint> src_gens_, tgt_gens_;
    LinePtr src_line_, tgt_line_;
    LexValue s0_, t0_;
    int orientation_ = 1;
};

/// Distance in Y1 glued to Y2 along phi, by the projection form
/// d1(x, p1(x)) + d2(phi(p1(x)), p2(y)) + d2(p2(y), y).
inline LexValue glued_distance(const GluingMap& phi, const TreePoint& x, const TreePoint& y)
{
    const TreeSpace& Y1 = phi.source_tree();
    const TreeSpace& Y2 = phi.target_tree();
    TreePoint p = project_to_subtree(Y1, x, phi.source());
    TreePoint q = project_to_subtree(Y2, y, phi.target());
    return Y1.distance(x, p) + Y2.distance(phi.apply(p), q) + Y2.distance(q, y);
}

}  // namespace lambdatree
