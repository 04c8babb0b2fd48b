#pragma once

#include "lambdatree/tree_space.hpp"

#include <optional>
#include <string>

namespace lambdatree {

/// An interval of Q^k embedded as the values of magnitude <= k in Q^n.
class LambdaLine final : public TreeSpace
{
  public:
    LambdaLine(std::size_t rank, std::size_t level, std::optional<LexValue> lo = {}, std::optional<LexValue> hi = {})
        : rank_(rank), level_(level), lo_(std::move(lo)), hi_(std::move(hi))
    {
        if (level_ < 1 || level_ > rank_) throw Error("line level out of range");
        for (const auto* b : {&lo_, &hi_})
            if (*b && ((*b)->rank() != rank_ || (*b)->magnitude() > level_))
                throw Error("line bound is not a value of the line");
        if (lo_ && hi_ && *hi_ < *lo_) throw Error("line bounds are reversed");
    }

    std::size_t rank() const override { return rank_; }
    std::size_t level() const { return level_; }
    const std::optional<LexValue>& lower() const { return lo_; }
    const std::optional<LexValue>& upper() const { return hi_; }

    void validate(const TreePoint& p) const override
    {
        auto l = std::get_if<LinePt>(&p);
        if (!l) throw Error("point is not a point of a line");
        if (l->x.rank() != rank_) throw Error("line point has the wrong rank");
        if (l->x.magnitude() > level_) throw Error("line point " + l->x.str() + " is above the line level");
        if ((lo_ && l->x < *lo_) || (hi_ && *hi_ < l->x)) throw Error("line point " + l->x.str() + " is out of bounds");
    }

    LexValue distance(const TreePoint& p, const TreePoint& q) const override
    {
        validate(p);
        validate(q);
        return (std::get<LinePt>(p).x - std::get<LinePt>(q).x).abs();
    }

    TreePoint point_at(const TreePoint& p, const TreePoint& q, const LexValue& t) const override
    {
        LexValue d = distance(p, q);
        check_interpolation(t, d);
        const auto& a = std::get<LinePt>(p).x;
        const auto& b = std::get<LinePt>(q).x;
        return LinePt{a < b ? a + t : a - t};
    }

    TreePoint median3(const TreePoint& p, const TreePoint& q, const TreePoint& r) const override
    {
        validate(p);
        validate(q);
        validate(r);
        const auto& a = std::get<LinePt>(p).x;
        const auto& b = std::get<LinePt>(q).x;
        const auto& c = std::get<LinePt>(r).x;
        if ((a <= b && b <= c) || (c <= b && b <= a)) return q;
        if ((b <= a && a <= c) || (c <= a && a <= b)) return p;
        return r;
    }

    bool contains(const LexValue& x) const
    {
        return x.rank() == rank_ && x.magnitude() <= level_ && !(lo_ && x < *lo_) && !(hi_ && *hi_ < x);
    }

    LexValue clamp(const LexValue& x) const
    {
        if (lo_ && x < *lo_) return *lo_;
        if (hi_ && *hi_ < x) return *hi_;
        return x;
    }

    std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const override
    {
        std::vector<TreePoint> out;
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<Rational> c(rank_);
            for (std::size_t j = rank_ - level_; j < rank_; ++j) c[j] = random_rational(rng);
            if (lo_ && hi_) {
                // Convex combination of the bounds keeps the sample inside.
                Rational f = random_fraction(rng);
                out.push_back(LinePt{*lo_ + (*hi_ - *lo_) * f});
                continue;
            }
            out.push_back(LinePt{clamp(LexValue(std::move(c)))});
        }
        return out;
    }

    std::string describe(const TreePoint& p) const override { return std::get<LinePt>(p).x.str(); }

  private:
    std::size_t rank_;
    std::size_t level_;
    std::optional<LexValue> lo_, hi_;
};

/// The identity chart of a Λ-line, as a linear subtree of itself.
class LineChart final : public LinearSubtree
{
  public:
    explicit LineChart(std::shared_ptr<const LambdaLine> line) : line_(std::move(line)) {}

    const TreeSpace& tree() const override { return *line_; }
    TreePoint project(const TreePoint& x) const override
    {
        line_->validate(x);
        return x;
    }
    LexValue coordinate(const TreePoint& p) const override
    {
        line_->validate(p);
        return std::get<LinePt>(p).x;
    }
    TreePoint at(const LexValue& s) const override
    {
        if (!line_->contains(s)) throw Error("coordinate " + s.str() + " is off the line");
        return LinePt{s};
    }
    std::optional<TreePoint> far_point(int direction, long scale) const override
    {
        const auto& bound = direction < 0 ? line_->lower() : line_->upper();
        if (bound) return LinePt{*bound};
        return LinePt{LexValue::unit(line_->rank(), line_->level()) * Rational(direction * scale)};
    }
    std::string describe() const override { return "line(level " + std::to_string(line_->level()) + ")"; }

  private:
    std::shared_ptr<const LambdaLine> line_;
};

}  // namespace lambdatree
