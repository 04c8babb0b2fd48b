#pragma once

#include "lambdatree/cayley_tree.hpp"
#include "lambdatree/lambda_line.hpp"
#include "lambdatree/tree_space.hpp"
#include "lambdatree/word.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <utility>

namespace lambdatree {

/// A finitely generated group acting by isometries on a presented tree.
/// Elements are words over global generator ids; `normalize` is a normal form.
class GroupAction
{
  public:
    virtual ~GroupAction() = default;

    virtual TreePtr tree_ptr() const = 0;
    const TreeSpace& tree() const { return *tree_ptr(); }

    virtual const std::vector<int>& generators() const = 0;
    virtual TreePoint base_point() const = 0;
    virtual Word normalize(const Word& w) const = 0;
    virtual TreePoint act(const Word& g, const TreePoint& x) const = 0;

    /// Writes g = rep * h with h in the subgroup generated by `subgroup`, rep canonical for the coset.
    virtual std::pair<Word, Word> split_right(const Word& g, const std::vector<int>& subgroup) const = 0;

    virtual std::string kind() const = 0;

    bool owns(int gen) const
    {
        const auto& g = generators();
        return std::find(g.begin(), g.end(), gen) != g.end();
    }

    bool is_identity(const Word& w) const { return normalize(w).empty(); }
    Word multiply(const Word& a, const Word& b) const { return normalize(concat(a, b)); }

    bool commute(const Word& a, const Word& b) const
    {
        return is_identity(concat(concat(a, b), concat(inverse(a), inverse(b))));
    }

  protected:
    void check_word(const Word& w) const
    {
        for (const auto& l : w)
            if (!owns(l.gen)) throw Error("generator id " + std::to_string(l.gen) + " does not belong to this group");
    }
};

using ActionPtr = std::shared_ptr<const GroupAction>;

/// Z^k acting on a Λ-line by translations.
class LineGroupAction final : public GroupAction
{
  public:
    LineGroupAction(std::shared_ptr<const LambdaLine> line, std::vector<int> gens, std::vector<LexValue> lengths)
        : line_(std::move(line)), gens_(std::move(gens)), lengths_(std::move(lengths))
    {
        if (gens_.size() != lengths_.size()) throw Error("one translation length per generator is required");
        if (line_->lower() || line_->upper()) throw Error("translations need an unbounded line");
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (lengths_[i].is_zero()) throw Error("zero generator length");
            if (lengths_[i].rank() != line_->rank() || lengths_[i].magnitude() > line_->level())
                throw Error("generator length " + lengths_[i].str() + " is not a translation of the line");
        }
    }

    TreePtr tree_ptr() const override { return line_; }
    const std::vector<int>& generators() const override { return gens_; }
    const std::vector<LexValue>& lengths() const { return lengths_; }
    std::shared_ptr<const LambdaLine> line() const { return line_; }
    TreePoint base_point() const override { return LinePt{LexValue::zero(line_->rank())}; }
    std::string kind() const override { return "line"; }

    LexValue length_of(int gen) const
    {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i] == gen) return lengths_[i];
        throw Error("unknown generator");
    }

    Word normalize(const Word& w) const override
    {
        check_word(w);
        std::map<int, long> exps;
        for (const auto& l : w) exps[l.gen] += l.exp;
        Word out;
        for (const auto& [g, e] : exps)
            if (e != 0) out.push_back({g, e});
        return out;
    }

    LexValue displacement(const Word& g) const
    {
        LexValue s = LexValue::zero(line_->rank());
        for (const auto& l : normalize(g)) s += length_of(l.gen) * Rational(l.exp);
        return s;
    }

    TreePoint act(const Word& g, const TreePoint& x) const override
    {
        line_->validate(x);
        return LinePt{std::get<LinePt>(x).x + displacement(g)};
    }

    std::pair<Word, Word> split_right(const Word& g, const std::vector<int>& subgroup) const override
    {
        Word rep, h;
        for (const auto& l : normalize(g)) {
            if (std::find(subgroup.begin(), subgroup.end(), l.gen) != subgroup.end())
                h.push_back(l);
            else
                rep.push_back(l);
        }
        for (int s : subgroup)
            if (!owns(s)) throw Error("subgroup generator outside the group");
        return {rep, h};
    }

  private:
    std::shared_ptr<const LambdaLine> line_;
    std::vector<int> gens_;
    std::vector<LexValue> lengths_;
};

/// A free group acting on its Cayley tree by left multiplication.
class CayleyGroupAction final : public GroupAction
{
  public:
    CayleyGroupAction(std::shared_ptr<const CayleyTree> tree, std::vector<int> gens)
        : tree_(std::move(tree)), gens_(std::move(gens))
    {
        if (gens_.size() != tree_->free_rank()) throw Error("one generator per free letter is required");
    }

    TreePtr tree_ptr() const override { return tree_; }
    const std::vector<int>& generators() const override { return gens_; }
    TreePoint base_point() const override { return CayleyPt{{}, 0, {}}; }
    std::string kind() const override { return "cayley"; }

    Word normalize(const Word& w) const override
    {
        check_word(w);
        return reduce(w);
    }

    std::vector<int> letters(const Word& g) const
    {
        std::vector<int> out;
        for (const auto& l : normalize(g)) {
            int idx = static_cast<int>(std::find(gens_.begin(), gens_.end(), l.gen) - gens_.begin()) + 1;
            for (long i = 0; i < std::labs(l.exp); ++i) CayleyTree::push(out, l.exp > 0 ? idx : -idx);
        }
        return out;
    }

    TreePoint act(const Word& g, const TreePoint& x) const override
    {
        CayleyPt p = std::get<CayleyPt>(tree_->canonical(x));
        p.word = CayleyTree::multiply(letters(g), p.word);
        return tree_->canonical(p);
    }

    std::pair<Word, Word> split_right(const Word& g, const std::vector<int>& subgroup) const override
    {
        for (int s : subgroup)
            if (!owns(s)) throw Error("subgroup generator outside the group");
        Word rep = normalize(g), tail;
        while (!rep.empty() && std::find(subgroup.begin(), subgroup.end(), rep.back().gen) != subgroup.end()) {
            tail.insert(tail.begin(), rep.back());
            rep.pop_back();
        }
        return {rep, tail};
    }

  private:
    std::shared_ptr<const CayleyTree> tree_;
    std::vector<int> gens_;
};

/// A free group acting trivially on a tree; used as a non-free reference action.
class TrivialAction final : public GroupAction
{
  public:
    TrivialAction(TreePtr tree, std::vector<int> gens, TreePoint base)
        : tree_(std::move(tree)), gens_(std::move(gens)), base_(std::move(base))
    {
    }

    TreePtr tree_ptr() const override { return tree_; }
    const std::vector<int>& generators() const override { return gens_; }
    TreePoint base_point() const override { return base_; }
    std::string kind() const override { return "trivial"; }
    Word normalize(const Word& w) const override
    {
        check_word(w);
        return reduce(w);
    }
    TreePoint act(const Word&, const TreePoint& x) const override { return tree_->canonical(x); }
    std::pair<Word, Word> split_right(const Word& g, const std::vector<int>& subgroup) const override
    {
        Word rep = normalize(g), tail;
        while (!rep.empty() && std::find(subgroup.begin(), subgroup.end(), rep.back().gen) != subgroup.end()) {
            tail.insert(tail.begin(), rep.back());
            rep.pop_back();
        }
        return {rep, tail};
    }

  private:
    TreePtr tree_;
    std::vector<int> gens_;
    TreePoint base_;
};

/// The common axis of a family of commuting hyperbolic elements, charted by signed
/// distance from the midpoint of [x, g0 x].
class GroupAxis final : public LinearSubtree
{
  public:
    GroupAxis(ActionPtr action, std::vector<Word> elements) : action_(std::move(action)), elements_(std::move(elements))
    {
        if (elements_.empty()) throw Error("an axis needs at least one element");
        g0_ = action_->normalize(elements_.front());
        g0inv_ = action_->normalize(inverse(g0_));
        const TreeSpace& T = action_->tree();
        TreePoint x = action_->base_point();
        TreePoint gx = action_->act(g0_, x);
        TreePoint ggx = action_->act(g0_, gx);
        LexValue l = T.distance(x, ggx) - T.distance(x, gx);
        if (l.sign() <= 0) throw Error("axis element is not hyperbolic");
        base_ = midpoint(T, x, gx);
        for (const auto& e : elements_) shifts_.push_back(coordinate(action_->act(e, base_)));
    }

    const TreeSpace& tree() const override { return action_->tree(); }
    const GroupAction& action() const { return *action_; }
    const std::vector<Word>& elements() const { return elements_; }
    const TreePoint& base() const { return base_; }

    /// Signed translation of the i-th element along the chart.
    const LexValue& shift(std::size_t i) const { return shifts_.at(i); }

    TreePoint project(const TreePoint& x) const override
    {
        return median(tree(), action_->act(g0inv_, x), x, action_->act(g0_, x));
    }

    LexValue coordinate(const TreePoint& p) const override
    {
        const TreeSpace& T = tree();
        LexValue d = T.distance(base_, p);
        if (d.is_zero()) return d;
        LexValue back = T.distance(action_->act(g0inv_, base_), p);
        LexValue fwd = T.distance(action_->act(g0_, base_), p);
        return fwd < back ? d : -d;
    }

    TreePoint at(const LexValue& s) const override
    {
        if (s.is_zero()) return base_;
        std::size_t best = 0;
        for (std::size_t i = 1; i < shifts_.size(); ++i)
            if (shifts_[i].magnitude() > shifts_[best].magnitude()) best = i;
        const LexValue& tau = shifts_[best];
        if (tau.magnitude() < s.magnitude()) throw Error("coordinate " + s.str() + " is beyond the presented axis");
        long k = 1;
        LexValue step = tau.abs();
        while (step * Rational(k) < s.abs()) k *= 2;
        long sign = s.sign() * tau.sign();
        TreePoint far = action_->act(power(elements_[best], sign * k), base_);
        return tree().point_at(base_, far, s.abs());
    }

    std::optional<TreePoint> far_point(int direction, long scale) const override
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < shifts_.size(); ++i)
            if (shifts_[i].magnitude() > shifts_[best].magnitude()) best = i;
        const Word& e = elements_[best];
        long sign = direction * shifts_[best].sign();
        Word p = e.size() == 1 ? Word{{e[0].gen, e[0].exp * sign * scale}} : power(e, sign * scale);
        return action_->act(p, base_);
    }

    std::string describe() const override { return "axis(" + std::to_string(elements_.size()) + " elements)"; }

  private:
    ActionPtr action_;
    std::vector<Word> elements_;
    Word g0_, g0inv_;
    TreePoint base_;
    std::vector<LexValue> shifts_;
};

/// The image h.L of a linear subtree under a group element.
class TranslatedLine final : public LinearSubtree
{
  public:
    TranslatedLine(ActionPtr action, LinePtr line, Word h)
        : action_(std::move(action)), line_(std::move(line)), h_(action_->normalize(h)), hinv_(action_->normalize(inverse(h_)))
    {
    }

    const TreeSpace& tree() const override { return action_->tree(); }
    TreePoint project(const TreePoint& x) const override
    {
        return action_->act(h_, line_->project(action_->act(hinv_, x)));
    }
    LexValue coordinate(const TreePoint& p) const override { return line_->coordinate(action_->act(hinv_, p)); }
    TreePoint at(const LexValue& s) const override { return action_->act(h_, line_->at(s)); }
    std::optional<TreePoint> far_point(int direction, long scale) const override
    {
        auto f = line_->far_point(direction, scale);
        if (!f) return f;
        return action_->act(h_, *f);
    }
    std::string describe() const override { return "translate(" + line_->describe() + ")"; }

  private:
    ActionPtr action_;
    LinePtr line_;
    Word h_, hinv_;
};

}  // namespace lambdatree
