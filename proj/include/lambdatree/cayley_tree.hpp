#pragma once

#include "lambdatree/tree_space.hpp"

#include <cstdlib>
#include <string>
#include <vector>

namespace lambdatree {

/// Cayley graph of the free group of rank r, every edge of length one unit at a
/// declared magnitude level. Letters are +-(i+1) for the i-th free generator.
class CayleyTree final : public TreeSpace
{
  public:
    CayleyTree(std::size_t rank, std::size_t free_rank, std::size_t level)
        : rank_(rank), r_(free_rank), level_(level), unit_(LexValue::unit(rank, level))
    {
        if (free_rank == 0) throw Error("free rank must be positive");
    }

    std::size_t rank() const override { return rank_; }
    std::size_t free_rank() const { return r_; }
    std::size_t level() const { return level_; }
    const LexValue& unit() const { return unit_; }

    static std::vector<int> multiply(std::vector<int> w, const std::vector<int>& v)
    {
        for (int l : v) push(w, l);
        return w;
    }

    static void push(std::vector<int>& w, int l)
    {
        if (!w.empty() && w.back() == -l)
            w.pop_back();
        else
            w.push_back(l);
    }

    static std::vector<int> inverse_word(const std::vector<int>& w)
    {
        std::vector<int> out;
        for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
        return out;
    }

    void validate(const TreePoint& p) const override
    {
        auto c = std::get_if<CayleyPt>(&p);
        if (!c) throw Error("point is not a point of a Cayley tree");
        for (std::size_t i = 0; i < c->word.size(); ++i) {
            check_letter(c->word[i]);
            if (i && c->word[i] == -c->word[i - 1]) throw Error("Cayley point word is not freely reduced");
        }
        if (c->dir != 0) {
            check_letter(c->dir);
            if (c->offset.rank() != rank_ || c->offset.sign() < 0 || unit_ < c->offset)
                throw Error("Cayley edge offset outside [0, unit]");
        }
    }

    TreePoint canonical(const TreePoint& p) const override
    {
        validate(p);
        CayleyPt c = std::get<CayleyPt>(p);
        if (c.dir == 0) return CayleyPt{c.word, 0, {}};
        if (c.offset.is_zero()) return CayleyPt{c.word, 0, {}};
        std::vector<int> far = c.word;
        push(far, c.dir);
        if (c.offset == unit_) return CayleyPt{far, 0, {}};
        if (far.size() < c.word.size()) return CayleyPt{far, -c.dir, unit_ - c.offset};
        return c;
    }

    LexValue vertex_distance(const std::vector<int>& u, const std::vector<int>& v) const
    {
        std::size_t l = 0;
        while (l < u.size() && l < v.size() && u[l] == v[l]) ++l;
        return unit_ * Rational(static_cast<long>(u.size() + v.size() - 2 * l));
    }

    LexValue distance(const TreePoint& p0, const TreePoint& q0) const override
    {
        CayleyPt p = std::get<CayleyPt>(canonical(p0)), q = std::get<CayleyPt>(canonical(q0));
        if (p.dir != 0 && q.dir != 0 && p.word == q.word && p.dir == q.dir) return (p.offset - q.offset).abs();
        LexValue best;
        bool first = true;
        for (const auto& [a, da] : exits(p))
            for (const auto& [b, db] : exits(q)) {
                LexValue d = da + vertex_distance(a, b) + db;
                if (first || d < best) {
                    best = d;
                    first = false;
                }
            }
        return best;
    }

    TreePoint point_at(const TreePoint& p0, const TreePoint& q0, const LexValue& t) const override
    {
        CayleyPt p = std::get<CayleyPt>(canonical(p0)), q = std::get<CayleyPt>(canonical(q0));
        LexValue total = distance(p, q);
        check_interpolation(t, total);
        if (t.is_zero()) return p;
        if (t == total) return q;
        if (p.dir != 0 && q.dir != 0 && p.word == q.word && p.dir == q.dir)
            return canonical(CayleyPt{p.word, p.dir, p.offset < q.offset ? p.offset + t : p.offset - t});
        std::vector<int> a, b;
        LexValue da, db;
        bool found = false;
        for (const auto& [x, dx] : exits(p))
            for (const auto& [y, dy] : exits(q))
                if (!found && dx + vertex_distance(x, y) + dy == total) {
                    a = x;
                    b = y;
                    da = dx;
                    db = dy;
                    found = true;
                }
        if (t <= da) return along(a, p_other(p, a), da - t);
        LexValue rest = t - da;
        std::vector<std::vector<int>> path = vertex_path(a, b);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            if (rest <= unit_) return along(path[i], path[i + 1], rest);
            rest -= unit_;
        }
        // The remaining distance lies on q's edge, from b toward q.
        return along(b, q.dir == 0 ? b : p_other(q, b), rest);
    }

    std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const override
    {
        std::vector<TreePoint> out;
        std::uniform_int_distribution<int> len(0, 4);
        std::uniform_int_distribution<int> letter(1, static_cast<int>(r_));
        std::uniform_int_distribution<int> sgn(0, 1);
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<int> w;
            int n = len(rng);
            while (static_cast<int>(w.size()) < n) {
                int l = letter(rng) * (sgn(rng) ? 1 : -1);
                if (!w.empty() && w.back() == -l) continue;
                w.push_back(l);
            }
            if (i % 2 == 1) {
                int d;
                do d = letter(rng) * (sgn(rng) ? 1 : -1);
                while (!w.empty() && w.back() == -d);
                out.push_back(canonical(CayleyPt{w, d, unit_ * random_fraction(rng)}));
            } else {
                out.push_back(CayleyPt{w, 0, {}});
            }
        }
        return out;
    }

    static std::string letter_name(int l)
    {
        std::string s(1, static_cast<char>('a' + std::abs(l) - 1));
        return l < 0 ? s + "^-1" : s;
    }

    static std::string word_name(const std::vector<int>& w)
    {
        if (w.empty()) return "1";
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) out += (i ? "*" : "") + letter_name(w[i]);
        return out;
    }

    std::string describe(const TreePoint& p) const override
    {
        CayleyPt c = std::get<CayleyPt>(canonical(p));
        if (c.dir == 0) return word_name(c.word);
        return word_name(c.word) + "->" + letter_name(c.dir) + "@" + c.offset.str();
    }

    /// Vertices from u to v inclusive.
    static std::vector<std::vector<int>> vertex_path(const std::vector<int>& u, const std::vector<int>& v)
    {
        std::size_t l = 0;
        while (l < u.size() && l < v.size() && u[l] == v[l]) ++l;
        std::vector<std::vector<int>> out;
        for (std::size_t k = u.size(); k > l; --k) out.emplace_back(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k));
        for (std::size_t k = l; k <= v.size(); ++k) out.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
        return out;
    }

  private:
    void check_letter(int l) const
    {
        if (l == 0 || static_cast<std::size_t>(std::abs(l)) > r_) throw Error("Cayley letter out of range");
    }

    std::vector<std::pair<std::vector<int>, LexValue>> exits(const CayleyPt& p) const
    {
        if (p.dir == 0) return {{p.word, LexValue::zero(rank_)}};
        std::vector<int> far = p.word;
        push(far, p.dir);
        return {{p.word, p.offset}, {far, unit_ - p.offset}};
    }

    /// The endpoint of p's edge other than `a`.
    std::vector<int> p_other(const CayleyPt& p, const std::vector<int>& a) const
    {
        std::vector<int> far = p.word;
        push(far, p.dir);
        return a == p.word ? far : p.word;
    }

    /// The point at distance t from vertex x toward the adjacent vertex y.
    TreePoint along(const std::vector<int>& x, const std::vector<int>& y, const LexValue& t) const
    {
        if (x == y) return CayleyPt{x, 0, {}};
        if (y.size() > x.size()) return canonical(CayleyPt{x, y.back(), t});
        return canonical(CayleyPt{y, x.back(), unit_ - t});
    }

    std::size_t rank_;
    std::size_t r_;
    std::size_t level_;
    LexValue unit_;
};

}  // namespace lambdatree
