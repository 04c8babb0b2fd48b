#pragma once

#include "lambdatree/tree_space.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace lambdatree {

/// Finite combinatorial tree whose edges carry strictly positive Λ-lengths.
class FiniteEdgeTree final : public TreeSpace
{
  public:
    struct Edge
    {
        int u = 0;
        int v = 0;
        LexValue length;
    };

    FiniteEdgeTree(std::size_t rank, std::size_t vertex_count, std::vector<Edge> edges,
                   std::vector<std::string> names = {})
        : rank_(rank), n_(vertex_count), edges_(std::move(edges)), names_(std::move(names))
    {
        if (n_ == 0) throw Error("a finite tree needs at least one vertex");
        if (edges_.size() + 1 != n_) throw Error("edge count must be vertex count minus one");
        if (!names_.empty() && names_.size() != n_) throw Error("vertex name list has the wrong size");
        adj_.assign(n_, {});
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const auto& ed = edges_[e];
            if (ed.u < 0 || ed.v < 0 || static_cast<std::size_t>(ed.u) >= n_ || static_cast<std::size_t>(ed.v) >= n_)
                throw Error("edge endpoint out of range");
            if (ed.u == ed.v) throw Error("loop edge");
            if (ed.length.rank() != rank_) throw Error("edge length has the wrong rank");
            if (ed.length.sign() <= 0) throw Error("edge lengths must be strictly positive");
            adj_[static_cast<std::size_t>(ed.u)].push_back(static_cast<int>(e));
            adj_[static_cast<std::size_t>(ed.v)].push_back(static_cast<int>(e));
        }
        root();
    }

    std::size_t rank() const override { return rank_; }
    std::size_t vertex_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& incident(int v) const { return adj_.at(static_cast<std::size_t>(v)); }

    std::string vertex_name(int v) const
    {
        return names_.empty() ? std::to_string(v) : names_.at(static_cast<std::size_t>(v));
    }

    int vertex_id(const std::string& name) const
    {
        for (std::size_t i = 0; i < n_; ++i)
            if (vertex_name(static_cast<int>(i)) == name) return static_cast<int>(i);
        throw Error("unknown vertex '" + name + "'");
    }

    void validate(const TreePoint& p) const override
    {
        if (auto v = std::get_if<VertexPt>(&p)) {
            if (v->id < 0 || static_cast<std::size_t>(v->id) >= n_) throw Error("vertex id out of range");
            return;
        }
        if (auto e = std::get_if<EdgePt>(&p)) {
            if (e->edge < 0 || static_cast<std::size_t>(e->edge) >= edges_.size()) throw Error("edge id out of range");
            const auto& len = edges_[static_cast<std::size_t>(e->edge)].length;
            if (e->offset.rank() != rank_ || e->offset.sign() < 0 || len < e->offset)
                throw Error("edge offset outside [0, length]");
            return;
        }
        throw Error("point is not a point of a finite edge tree");
    }

    TreePoint canonical(const TreePoint& p) const override
    {
        validate(p);
        if (auto e = std::get_if<EdgePt>(&p)) {
            const auto& ed = edges_[static_cast<std::size_t>(e->edge)];
            if (e->offset.is_zero()) return VertexPt{ed.u};
            if (e->offset == ed.length) return VertexPt{ed.v};
        }
        return p;
    }

    LexValue vertex_distance(int a, int b) const
    {
        int l = lca(a, b);
        return depth_[static_cast<std::size_t>(a)] + depth_[static_cast<std::size_t>(b)] -
               2 * depth_[static_cast<std::size_t>(l)];
    }

    LexValue distance(const TreePoint& p0, const TreePoint& q0) const override
    {
        TreePoint p = canonical(p0), q = canonical(q0);
        auto pe = std::get_if<EdgePt>(&p), qe = std::get_if<EdgePt>(&q);
        if (pe && qe && pe->edge == qe->edge) return (pe->offset - qe->offset).abs();
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
        TreePoint p = canonical(p0), q = canonical(q0);
        LexValue total = distance(p, q);
        check_interpolation(t, total);
        if (t.is_zero()) return p;
        if (t == total) return q;
        auto pe = std::get_if<EdgePt>(&p), qe = std::get_if<EdgePt>(&q);
        if (pe && qe && pe->edge == qe->edge) {
            LexValue off = pe->offset < qe->offset ? pe->offset + t : pe->offset - t;
            return canonical(EdgePt{pe->edge, off});
        }
        // Exit vertex of p and entry vertex of q realizing the distance.
        int a = -1, b = -1;
        LexValue da, db;
        for (const auto& [x, dx] : exits(p))
            for (const auto& [y, dy] : exits(q))
                if (a < 0 && dx + vertex_distance(x, y) + dy == total) {
                    a = x;
                    b = y;
                    da = dx;
                    db = dy;
                }
        if (t <= da) return toward_vertex(p, a, t);
        LexValue rest = t - da;
        std::vector<int> path = vertex_path(a, b);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            int e = edge_between(path[i], path[i + 1]);
            const auto& ed = edges_[static_cast<std::size_t>(e)];
            if (rest <= ed.length) return canonical(EdgePt{e, ed.u == path[i] ? rest : ed.length - rest});
            rest -= ed.length;
        }
        // Remaining distance lies on q's edge, measured from b toward q.
        return toward_point_from_vertex(b, q, rest);
    }

    std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const override
    {
        std::vector<TreePoint> out;
        std::uniform_int_distribution<std::size_t> pick_v(0, n_ - 1);
        for (std::size_t i = 0; i < count; ++i) {
            if (edges_.empty() || i % 2 == 0) {
                out.push_back(VertexPt{static_cast<int>(pick_v(rng))});
            } else {
                std::uniform_int_distribution<std::size_t> pick_e(0, edges_.size() - 1);
                std::size_t e = pick_e(rng);
                out.push_back(canonical(EdgePt{static_cast<int>(e), edges_[e].length * random_fraction(rng)}));
            }
        }
        return out;
    }

    std::string describe(const TreePoint& p) const override
    {
        TreePoint c = canonical(p);
        if (auto v = std::get_if<VertexPt>(&c)) return vertex_name(v->id);
        const auto& e = std::get<EdgePt>(c);
        const auto& ed = edges_[static_cast<std::size_t>(e.edge)];
        return vertex_name(ed.u) + "-" + vertex_name(ed.v) + "@" + e.offset.str();
    }

    int edge_between(int a, int b) const
    {
        for (int e : adj_[static_cast<std::size_t>(a)]) {
            const auto& ed = edges_[static_cast<std::size_t>(e)];
            if ((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)) return e;
        }
        throw Error("vertices are not adjacent");
    }

    /// Vertices on the path from a to b, inclusive.
    std::vector<int> vertex_path(int a, int b) const
    {
        int l = lca(a, b);
        std::vector<int> up, down;
        for (int x = a; x != l; x = parent_[static_cast<std::size_t>(x)]) up.push_back(x);
        up.push_back(l);
        for (int x = b; x != l; x = parent_[static_cast<std::size_t>(x)]) down.push_back(x);
        up.insert(up.end(), down.rbegin(), down.rend());
        return up;
    }

  private:
    void root()
    {
        parent_.assign(n_, -1);
        level_.assign(n_, -1);
        depth_.assign(n_, LexValue::zero(rank_));
        std::vector<int> stack{0};
        level_[0] = 0;
        std::size_t seen = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int e : adj_[static_cast<std::size_t>(x)]) {
                const auto& ed = edges_[static_cast<std::size_t>(e)];
                int y = ed.u == x ? ed.v : ed.u;
                if (level_[static_cast<std::size_t>(y)] >= 0) continue;
                level_[static_cast<std::size_t>(y)] = level_[static_cast<std::size_t>(x)] + 1;
                parent_[static_cast<std::size_t>(y)] = x;
                depth_[static_cast<std::size_t>(y)] = depth_[static_cast<std::size_t>(x)] + ed.length;
                stack.push_back(y);
                ++seen;
            }
        }
        if (seen != n_) throw Error("finite tree is not connected");
    }

    int lca(int a, int b) const
    {
        while (level_[static_cast<std::size_t>(a)] > level_[static_cast<std::size_t>(b)]) a = parent_[static_cast<std::size_t>(a)];
        while (level_[static_cast<std::size_t>(b)] > level_[static_cast<std::size_t>(a)]) b = parent_[static_cast<std::size_t>(b)];
        while (a != b) {
            a = parent_[static_cast<std::size_t>(a)];
            b = parent_[static_cast<std::size_t>(b)];
        }
        return a;
    }

    /// Vertices through which a geodesic can leave p, with the distance to each.
    std::vector<std::pair<int, LexValue>> exits(const TreePoint& p) const
    {
        if (auto v = std::get_if<VertexPt>(&p)) return {{v->id, LexValue::zero(rank_)}};
        const auto& e = std::get<EdgePt>(p);
        const auto& ed = edges_[static_cast<std::size_t>(e.edge)];
        return {{ed.u, e.offset}, {ed.v, ed.length - e.offset}};
    }

    TreePoint toward_vertex(const TreePoint& p, int a, const LexValue& t) const
    {
        if (std::holds_alternative<VertexPt>(p)) return p;
        const auto& e = std::get<EdgePt>(p);
        const auto& ed = edges_[static_cast<std::size_t>(e.edge)];
        return canonical(EdgePt{e.edge, ed.u == a ? e.offset - t : e.offset + t});
    }

    TreePoint toward_point_from_vertex(int b, const TreePoint& q, const LexValue& t) const
    {
        if (std::holds_alternative<VertexPt>(q)) return q;
        const auto& e = std::get<EdgePt>(q);
        const auto& ed = edges_[static_cast<std::size_t>(e.edge)];
        return canonical(EdgePt{e.edge, ed.u == b ? t : ed.length - t});
    }

    std::size_t rank_;
    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<std::string> names_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> parent_;
    std::vector<int> level_;
    std::vector<LexValue> depth_;
};

/// Splits edge `e` at distance `at` from its first endpoint; the new vertex gets the last id.
inline FiniteEdgeTree subdivide(const FiniteEdgeTree& T, int e, const LexValue& at)
{
    auto edges = T.edges();
    auto old = edges.at(static_cast<std::size_t>(e));
    if (at.sign() <= 0 || !(at < old.length)) throw Error("subdivision point must be interior");
    int w = static_cast<int>(T.vertex_count());
    edges[static_cast<std::size_t>(e)] = {old.u, w, at};
    edges.push_back({w, old.v, old.length - at});
    return FiniteEdgeTree(T.rank(), T.vertex_count() + 1, std::move(edges));
}

}  // namespace lambdatree
