#pragma once

#include "lambdatree/finite_edge_tree.hpp"
#include "lambdatree/gluing.hpp"
#include "lambdatree/tree_space.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace lambdatree {

/// A finite skeleton tree with a vertex tree at each vertex and a gluing isometry
/// from a closed subtree of Y_u onto a closed subtree of Y_v for each edge u-v.
class GraphOfActions
{
  public:
    struct Edge
    {
        int u = 0;
        int v = 0;
        GluingMap map;
    };

    GraphOfActions(std::size_t rank, std::vector<TreePtr> trees, std::vector<Edge> edges,
                   std::vector<std::string> names = {})
        : rank_(rank), trees_(std::move(trees)), edges_(std::move(edges)), names_(std::move(names))
    {
        std::size_t n = trees_.size();
        if (n == 0) throw Error("a graph of actions needs at least one vertex");
        if (!names_.empty() && names_.size() != n) throw Error("vertex name list has the wrong size");
        for (const auto& t : trees_)
            if (t->rank() != rank_) throw Error("vertex tree has the wrong rank");
        if (edges_.size() + 1 != n) throw Error("skeleton edge count must be vertex count minus one");
        adj_.assign(n, {});
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const auto& ed = edges_[e];
            if (ed.u < 0 || ed.v < 0 || static_cast<std::size_t>(ed.u) >= n || static_cast<std::size_t>(ed.v) >= n ||
                ed.u == ed.v)
                throw Error("skeleton edge endpoint out of range");
            if (ed.map.source_tree_ptr() != trees_[static_cast<std::size_t>(ed.u)] ||
                ed.map.target_tree_ptr() != trees_[static_cast<std::size_t>(ed.v)])
                throw Error("gluing of edge " + std::to_string(e) + " does not join its endpoint trees");
            adj_[static_cast<std::size_t>(ed.u)].push_back(static_cast<int>(e));
            adj_[static_cast<std::size_t>(ed.v)].push_back(static_cast<int>(e));
            inverse_.push_back(ed.map.inverse());
        }
        parent_.assign(n, -1);
        parent_edge_.assign(n, -1);
        level_.assign(n, -1);
        std::deque<int> queue{0};
        level_[0] = 0;
        std::size_t seen = 1;
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (int e : adj_[static_cast<std::size_t>(x)]) {
                int y = other(e, x);
                if (level_[static_cast<std::size_t>(y)] >= 0) continue;
                level_[static_cast<std::size_t>(y)] = level_[static_cast<std::size_t>(x)] + 1;
                parent_[static_cast<std::size_t>(y)] = x;
                parent_edge_[static_cast<std::size_t>(y)] = e;
                queue.push_back(y);
                ++seen;
            }
        }
        if (seen != n) throw Error("skeleton is not connected");
    }

    std::size_t rank() const { return rank_; }
    std::size_t vertex_count() const { return trees_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const TreeSpace& tree(int v) const { return *trees_.at(static_cast<std::size_t>(v)); }
    TreePtr tree_ptr(int v) const { return trees_.at(static_cast<std::size_t>(v)); }
    const std::vector<int>& incident(int v) const { return adj_.at(static_cast<std::size_t>(v)); }

    std::string name(int v) const { return names_.empty() ? std::to_string(v) : names_[static_cast<std::size_t>(v)]; }

    int other(int e, int x) const
    {
        const auto& ed = edges_[static_cast<std::size_t>(e)];
        return ed.u == x ? ed.v : ed.u;
    }

    /// The gluing map of edge e read from vertex `from` toward the other endpoint.
    const GluingMap& map_from(int e, int from) const
    {
        const auto& ed = edges_[static_cast<std::size_t>(e)];
        return ed.u == from ? ed.map : inverse_[static_cast<std::size_t>(e)];
    }

    int skeleton_distance(int a, int b) const
    {
        return static_cast<int>(path(a, b).size());
    }

    /// Edges (with the vertex they are entered from) along the skeleton path a -> b.
    std::vector<std::pair<int, int>> path(int a, int b) const
    {
        std::vector<std::pair<int, int>> up, down;
        while (level_[static_cast<std::size_t>(a)] > level_[static_cast<std::size_t>(b)]) {
            up.push_back({parent_edge_[static_cast<std::size_t>(a)], a});
            a = parent_[static_cast<std::size_t>(a)];
        }
        while (level_[static_cast<std::size_t>(b)] > level_[static_cast<std::size_t>(a)]) {
            down.push_back({parent_edge_[static_cast<std::size_t>(b)], parent_[static_cast<std::size_t>(b)]});
            b = parent_[static_cast<std::size_t>(b)];
        }
        while (a != b) {
            up.push_back({parent_edge_[static_cast<std::size_t>(a)], a});
            a = parent_[static_cast<std::size_t>(a)];
            down.push_back({parent_edge_[static_cast<std::size_t>(b)], parent_[static_cast<std::size_t>(b)]});
            b = parent_[static_cast<std::size_t>(b)];
        }
        up.insert(up.end(), down.rbegin(), down.rend());
        return up;
    }

  private:
    std::size_t rank_;
    std::vector<TreePtr> trees_;
    std::vector<Edge> edges_;
    std::vector<std::string> names_;
    std::vector<GluingMap> inverse_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> parent_, parent_edge_, level_;
};

using GraphPtr = std::shared_ptr<const GraphOfActions>;

/// One geodesic piece [from, to] inside a single vertex tree.
struct Leg
{
    int vertex = 0;
    Word coset;
    TreePoint from;
    TreePoint to;
};

/// The tree dual to a finite graph of actions. Points are (vertex, local point).
class DualTree final : public TreeSpace
{
  public:
    explicit DualTree(GraphPtr g) : g_(std::move(g)) {}

    const GraphOfActions& graph() const { return *g_; }
    GraphPtr graph_ptr() const { return g_; }
    std::size_t rank() const override { return g_->rank(); }

    void validate(const TreePoint& p) const override
    {
        const DualPt& d = as_dual(p);
        if (d.vertex < 0 || static_cast<std::size_t>(d.vertex) >= g_->vertex_count())
            throw Error("dual point vertex out of range");
        if (!d.coset.empty()) throw Error("finite dual points carry no coset");
        g_->tree(d.vertex).validate(d.local);
    }

    /// Representative at the least vertex id of the equivalence class.
    TreePoint canonical(const TreePoint& p) const override
    {
        validate(p);
        auto cls = neighbors_closure(as_dual(p), -1);
        const DualPt* best = &cls.front();
        for (const auto& c : cls)
            if (c.vertex < best->vertex) best = &c;
        return make_dual(best->vertex, g_->tree(best->vertex).canonical(best->local));
    }

    std::vector<Leg> legs(const TreePoint& p, const TreePoint& q) const
    {
        validate(p);
        validate(q);
        const DualPt& a = as_dual(p);
        const DualPt& b = as_dual(q);
        std::vector<Leg> out;
        int v = a.vertex;
        TreePoint cur = a.local;
        for (const auto& [e, from] : g_->path(a.vertex, b.vertex)) {
            const GluingMap& m = g_->map_from(e, from);
            TreePoint pr = project_to_subtree(g_->tree(v), cur, m.source());
            out.push_back({v, {}, cur, pr});
            cur = m.apply(pr);
            v = g_->other(e, from);
        }
        out.push_back({v, {}, cur, b.local});
        return out;
    }

    LexValue distance(const TreePoint& p, const TreePoint& q) const override
    {
        LexValue d = LexValue::zero(rank());
        for (const auto& l : legs(p, q)) d += g_->tree(l.vertex).distance(l.from, l.to);
        return d;
    }

    TreePoint point_at(const TreePoint& p, const TreePoint& q, const LexValue& t) const override
    {
        auto ls = legs(p, q);
        LexValue rest = t;
        if (t.sign() < 0) throw Error("interpolation parameter outside the segment");
        for (const auto& l : ls) {
            const TreeSpace& Y = g_->tree(l.vertex);
            LexValue d = Y.distance(l.from, l.to);
            if (rest <= d) return make_dual(l.vertex, Y.point_at(l.from, l.to, rest));
            rest -= d;
        }
        throw Error("interpolation parameter outside the segment");
    }

    std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const override
    {
        std::vector<TreePoint> out;
        std::uniform_int_distribution<std::size_t> pick(0, g_->vertex_count() - 1);
        for (std::size_t i = 0; i < count; ++i) {
            int v = static_cast<int>(pick(rng));
            out.push_back(make_dual(v, g_->tree(v).sample_points(rng, 1).front()));
        }
        return out;
    }

    std::string describe(const TreePoint& p) const override
    {
        const DualPt& d = as_dual(p);
        return g_->name(d.vertex) + ":" + g_->tree(d.vertex).describe(d.local);
    }

    /// Points identified with p, layer by layer; `hop_bound` < 0 means unbounded.
    std::vector<DualPt> neighbors_closure(const DualPt& p, int hop_bound, bool* exhausted = nullptr,
                                          int* hops = nullptr) const
    {
        std::vector<DualPt> members{p};
        std::set<int> seen{p.vertex};
        std::vector<DualPt> layer{p};
        int h = 0;
        bool done = false;
        while (!layer.empty()) {
            std::vector<DualPt> next;
            for (const auto& x : layer)
                for (int e : g_->incident(x.vertex)) {
                    int w = g_->other(e, x.vertex);
                    if (seen.count(w)) continue;
                    const GluingMap& m = g_->map_from(e, x.vertex);
                    if (!subtree_contains(g_->tree(x.vertex), m.source(), x.local)) continue;
                    seen.insert(w);
                    next.push_back(DualPt{w, {}, m.apply(x.local)});
                }
            if (next.empty()) {
                done = true;
                break;
            }
            if (hop_bound >= 0 && h == hop_bound) break;
            ++h;
            members.insert(members.end(), next.begin(), next.end());
            layer = std::move(next);
        }
        if (exhausted) *exhausted = done;
        if (hops) *hops = h;
        return members;
    }

  private:
    GraphPtr g_;
};

/// Result of a bounded breadth-first closure of a dual point under the gluings.
struct ClassReport
{
    std::vector<DualPt> members;
    int diameter = 0;
    bool exhausted = false;
};

inline ClassReport equivalence_class(const DualTree& T, const TreePoint& p, int hop_bound)
{
    if (hop_bound < 0) throw Error("hop bound must be nonnegative");
    T.validate(p);
    ClassReport r;
    r.members = T.neighbors_closure(as_dual(p), hop_bound, &r.exhausted);
    for (const auto& a : r.members)
        for (const auto& b : r.members)
            r.diameter = std::max(r.diameter, T.graph().skeleton_distance(a.vertex, b.vertex));
    return r;
}

struct Attachment
{
    TreePtr tree;
    TreePoint at;    ///< point of the host tree
    TreePoint base;  ///< point of the attached tree
};

/// Gluing at points: a star skeleton with the host at vertex 0.
inline std::shared_ptr<const DualTree> glue_at_points(TreePtr host, const std::vector<Attachment>& parts)
{
    std::vector<TreePtr> trees{host};
    std::vector<GraphOfActions::Edge> edges;
    for (const auto& a : parts) {
        trees.push_back(a.tree);
        edges.push_back({0, static_cast<int>(trees.size() - 1), GluingMap::point(host, a.at, a.tree, a.base)});
    }
    return std::make_shared<DualTree>(std::make_shared<GraphOfActions>(host->rank(), trees, std::move(edges)));
}

/// Two trees glued along one isometry: a single-edge graph of actions.
inline std::shared_ptr<const DualTree> glue_pair(const GluingMap& phi)
{
    std::vector<GraphOfActions::Edge> edges{{0, 1, phi}};
    return std::make_shared<DualTree>(std::make_shared<GraphOfActions>(
        phi.source_tree().rank(), std::vector<TreePtr>{phi.source_tree_ptr(), phi.target_tree_ptr()}, std::move(edges)));
}

/// A closed subtree of T viewed as a tree in its own right.
class SubtreeView final : public TreeSpace
{
  public:
    SubtreeView(TreePtr tree, ClosedSubtree sub) : tree_(std::move(tree)), sub_(std::move(sub)) {}
    TreePtr tree_ptr() const { return tree_; }

    std::size_t rank() const override { return tree_->rank(); }
    const ClosedSubtree& subtree() const { return sub_; }
    const TreeSpace& ambient() const { return *tree_; }

    void validate(const TreePoint& p) const override
    {
        tree_->validate(p);
        if (!subtree_contains(*tree_, sub_, p)) throw Error("point " + tree_->describe(p) + " is outside the subtree");
    }
    TreePoint canonical(const TreePoint& p) const override
    {
        validate(p);
        return tree_->canonical(p);
    }
    LexValue distance(const TreePoint& p, const TreePoint& q) const override { return tree_->distance(p, q); }
    TreePoint point_at(const TreePoint& p, const TreePoint& q, const LexValue& t) const override
    {
        return tree_->point_at(p, q, t);
    }
    std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const override
    {
        auto pts = tree_->sample_points(rng, count);
        for (auto& p : pts) p = project_to_subtree(*tree_, p, sub_);
        return pts;
    }
    std::string describe(const TreePoint& p) const override { return tree_->describe(p); }

  private:
    TreePtr tree_;
    ClosedSubtree sub_;
};

/// A violated condition of a transverse covering.
struct CoveringReport
{
    bool ok = true;
    std::string violation;
    std::vector<TreePoint> witness;
};

/// Points of the arc [a, b] covered by the family, as a sorted union of distance intervals.
inline bool arc_covered(const TreeSpace& T, const std::vector<ClosedSubtree>& family, const TreePoint& a,
                        const TreePoint& b, TreePoint* gap = nullptr)
{
    LexValue len = T.distance(a, b);
    std::vector<std::pair<LexValue, LexValue>> iv;
    for (const auto& Y : family) {
        auto piece = segment_subtree_intersection(T, a, b, Y);
        if (!piece) continue;
        LexValue s = T.distance(a, piece->generators.front());
        LexValue e = T.distance(a, piece->generators.back());
        if (e < s) std::swap(s, e);
        iv.push_back({s, e});
    }
    std::sort(iv.begin(), iv.end());
    LexValue reach = LexValue::zero(T.rank());
    bool started = false;
    for (const auto& [s, e] : iv) {
        if ((started && reach < s) || (!started && s.sign() > 0)) {
            if (gap) *gap = T.point_at(a, b, started ? reach : LexValue::zero(T.rank()));
            return false;
        }
        started = true;
        reach = lex_max(reach, e);
    }
    if (!started || reach < len) {
        if (gap) *gap = T.point_at(a, b, started ? reach : LexValue::zero(T.rank()));
        return false;
    }
    return true;
}

/// Mutual containment of two closed subtrees, decided on hull generators.
inline bool same_subtree(const TreeSpace& T, const ClosedSubtree& A, const ClosedSubtree& B)
{
    auto inside = [&](const ClosedSubtree& X, const ClosedSubtree& Y) {
        if (std::holds_alternative<WholeTree>(Y)) return true;
        if (auto h = std::get_if<Hull>(&X)) {
            for (const auto& g : h->generators)
                if (!subtree_contains(T, Y, g)) return false;
            return true;
        }
        throw Error("containment of a non-hull subtree cannot be decided");
    };
    return inside(A, B) && inside(B, A);
}

inline bool degenerate_subtree(const TreeSpace& T, const ClosedSubtree& Y)
{
    auto h = std::get_if<Hull>(&Y);
    if (!h) return false;
    for (const auto& g : h->generators)
        if (!same_point(T, g, h->generators.front())) return false;
    return true;
}

/// Checks transverse intersection exactly and arc coverage on the given arcs.
inline CoveringReport check_transverse_covering(const TreeSpace& T, const std::vector<ClosedSubtree>& family,
                                                const std::vector<std::pair<TreePoint, TreePoint>>& arcs)
{
    CoveringReport r;
    if (family.empty()) throw Error("empty covering family");
    for (std::size_t i = 0; i < family.size(); ++i)
        if (degenerate_subtree(T, family[i])) throw Error("covering member " + std::to_string(i) + " is a point");
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            if (std::holds_alternative<WholeTree>(family[i]) || std::holds_alternative<WholeTree>(family[j])) {
                if (!same_subtree(T, family[i], family[j])) {
                    r.ok = false;
                    r.violation = "members " + std::to_string(i) + " and " + std::to_string(j) +
                                  " overlap (one is the whole tree)";
                    return r;
                }
                continue;
            }
            auto x = subtree_intersection(T, family[i], family[j]);
            if (!x || x->generators.size() < 2) continue;
            if (!same_subtree(T, family[i], family[j])) {
                r.ok = false;
                r.violation = "members " + std::to_string(i) + " and " + std::to_string(j) +
                              " share more than one point";
                r.witness = x->generators;
                return r;
            }
        }
    for (const auto& [a, b] : arcs) {
        TreePoint gap;
        if (!arc_covered(T, family, a, b, &gap)) {
            r.ok = false;
            r.violation = "arc is not covered near " + T.describe(gap);
            r.witness = {a, b, gap};
            return r;
        }
    }
    return r;
}

/// Arcs used to check coverage of a finite edge tree: every edge.
inline std::vector<std::pair<TreePoint, TreePoint>> edge_arcs(const FiniteEdgeTree& T)
{
    std::vector<std::pair<TreePoint, TreePoint>> out;
    for (const auto& e : T.edges()) out.push_back({VertexPt{e.u}, VertexPt{e.v}});
    if (out.empty()) out.push_back({VertexPt{0}, VertexPt{0}});
    return out;
}

/// The bipartite skeleton of a transverse covering, and the graph of actions it induces.
struct Skeleton
{
    std::shared_ptr<const FiniteEdgeTree> tree;
    std::vector<std::size_t> member_vertex;  ///< skeleton vertex of each distinct member
    std::vector<std::size_t> member_of;       ///< distinct member index for each family entry
    std::vector<TreePoint> junctions;         ///< the V0 points, at vertices after members
    GraphPtr graph;                           ///< vertex trees: members, then junction points
};

inline Skeleton transverse_skeleton(TreePtr Tp, const std::vector<ClosedSubtree>& family,
                                    const std::vector<std::pair<TreePoint, TreePoint>>& arcs)
{
    const TreeSpace& T = *Tp;
    auto rep = check_transverse_covering(T, family, arcs);
    if (!rep.ok) throw Error("not a transverse covering: " + rep.violation);
    Skeleton s;
    std::vector<ClosedSubtree> members;
    for (const auto& Y : family) {
        std::size_t k = 0;
        while (k < members.size() && !same_subtree(T, members[k], Y)) ++k;
        if (k == members.size()) members.push_back(Y);
        s.member_of.push_back(k);
    }
    std::size_t m = members.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            auto x = subtree_intersection(T, members[i], members[j]);
            if (!x) continue;
            const TreePoint& c = x->generators.front();
            bool dup = false;
            for (const auto& d : s.junctions)
                if (same_point(T, c, d)) dup = true;
            if (!dup) s.junctions.push_back(c);
        }
    std::vector<FiniteEdgeTree::Edge> edges;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < m; ++i) {
        s.member_vertex.push_back(i);
        names.push_back("Y" + std::to_string(i + 1));
    }
    LexValue one = LexValue::unit(T.rank(), T.rank());
    std::vector<TreePtr> trees;
    for (const auto& Y : members) trees.push_back(std::make_shared<SubtreeView>(Tp, Y));
    std::vector<GraphOfActions::Edge> gedges;
    for (std::size_t c = 0; c < s.junctions.size(); ++c) {
        int jv = static_cast<int>(m + c);
        names.push_back(s.junctions.size() == 1 ? "c" : "c" + std::to_string(c + 1));
        auto point = std::make_shared<FiniteEdgeTree>(T.rank(), 1, std::vector<FiniteEdgeTree::Edge>{});
        trees.push_back(point);
        for (std::size_t i = 0; i < m; ++i)
            if (subtree_contains(T, members[i], s.junctions[c])) {
                edges.push_back({jv, static_cast<int>(i), one});
                gedges.push_back({jv, static_cast<int>(i),
                                  GluingMap::point(point, VertexPt{0}, trees[i], s.junctions[c])});
            }
    }
    // The constructor rejects disconnected or cyclic skeletons.
    s.tree = std::make_shared<FiniteEdgeTree>(T.rank(), m + s.junctions.size(), std::move(edges), names);
    s.graph = std::make_shared<GraphOfActions>(T.rank(), std::move(trees), std::move(gedges), std::move(names));
    return s;
}

/// Graphviz rendering of a finite edge tree; lengths label the edges.
inline std::string to_dot(const FiniteEdgeTree& T, const std::string& name = "skeleton")
{
    std::string out = "graph " + name + " {\n";
    for (std::size_t v = 0; v < T.vertex_count(); ++v)
        out += "  \"" + T.vertex_name(static_cast<int>(v)) + "\";\n";
    for (const auto& e : T.edges())
        out += "  \"" + T.vertex_name(e.u) + "\" -- \"" + T.vertex_name(e.v) + "\" [label=\"" + e.length.str() + "\"];\n";
    return out + "}\n";
}

}  // namespace lambdatree
