#pragma once

// Independent oracles and generators shared by the unit tests and the acceptance run.
// Nothing here calls the library's distance, median or projection code.

#include "lambdatree/lambdatree.hpp"

#include <functional>
#include <random>

namespace oracle {

using namespace lambdatree;

inline LexValue random_length(std::mt19937_64& rng, std::size_t rank)
{
    std::uniform_int_distribution<int> coin(0, 2);
    std::vector<Rational> c(rank);
    for (;;) {
        for (std::size_t i = 0; i < rank; ++i) c[i] = coin(rng) == 0 ? Rational(0) : random_fraction(rng, 4) * 3;
        LexValue v(c);
        if (v.sign() > 0) return v;
    }
}

/// Random tree on n vertices, named v0..v{n-1}, each vertex hung off an earlier one.
inline std::shared_ptr<const FiniteEdgeTree> random_tree(std::mt19937_64& rng, std::size_t rank, std::size_t n,
                                                         const std::string& prefix = "v")
{
    std::vector<FiniteEdgeTree::Edge> edges;
    std::vector<std::string> names{prefix + "0"};
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> parent(0, v - 1);
        edges.push_back({static_cast<int>(parent(rng)), static_cast<int>(v), random_length(rng, rank)});
        names.push_back(prefix + std::to_string(v));
    }
    return std::make_shared<FiniteEdgeTree>(rank, n, std::move(edges), std::move(names));
}

/// Path sum between vertices by depth-first search over the edge list.
inline LexValue vertex_distance(const FiniteEdgeTree& T, int a, int b)
{
    std::function<bool(int, int, LexValue&)> dfs = [&](int x, int from, LexValue& acc) {
        if (x == b) return true;
        for (const auto& e : T.edges()) {
            int y = e.u == x ? e.v : (e.v == x ? e.u : -1);
            if (y < 0 || y == from) continue;
            acc += e.length;
            if (dfs(y, x, acc)) return true;
            acc -= e.length;
        }
        return false;
    };
    LexValue acc = LexValue::zero(T.rank());
    if (!dfs(a, -1, acc)) throw Error("oracle: vertices not connected");
    return acc;
}

/// Exits of a point: (vertex, distance to it).
inline std::vector<std::pair<int, LexValue>> exits(const FiniteEdgeTree& T, const TreePoint& p)
{
    if (auto v = std::get_if<VertexPt>(&p)) return {{v->id, LexValue::zero(T.rank())}};
    const auto& e = std::get<EdgePt>(p);
    const auto& ed = T.edges().at(static_cast<std::size_t>(e.edge));
    return {{ed.u, e.offset}, {ed.v, ed.length - e.offset}};
}

inline LexValue point_distance(const FiniteEdgeTree& T, const TreePoint& p, const TreePoint& q)
{
    auto ep = std::get_if<EdgePt>(&p), eq = std::get_if<EdgePt>(&q);
    if (ep && eq && ep->edge == eq->edge) return (ep->offset - eq->offset).abs();
    std::optional<LexValue> best;
    for (const auto& [a, da] : exits(T, p))
        for (const auto& [b, db] : exits(T, q)) {
            LexValue d = da + vertex_distance(T, a, b) + db;
            if (!best || d < *best) best = d;
        }
    return *best;
}

inline TreePoint random_point(std::mt19937_64& rng, const FiniteEdgeTree& T)
{
    std::uniform_int_distribution<int> coin(0, 2);
    if (T.edges().empty() || coin(rng) == 0) {
        std::uniform_int_distribution<int> v(0, static_cast<int>(T.vertex_count()) - 1);
        return VertexPt{v(rng)};
    }
    std::uniform_int_distribution<int> e(0, static_cast<int>(T.edges().size()) - 1);
    int k = e(rng);
    Rational f = random_fraction(rng, 6);
    if (f == 0 || f == 1) f = make_rational(1, 2);
    return EdgePt{k, T.edges()[static_cast<std::size_t>(k)].length * f};
}

inline const FiniteEdgeTree& finite(const TreeSpace& T)
{
    auto F = dynamic_cast<const FiniteEdgeTree*>(&T);
    if (!F) throw Error("oracle: expected a finite vertex tree");
    return *F;
}

inline bool in_hull(const FiniteEdgeTree& T, const std::vector<TreePoint>& gens, const TreePoint& x)
{
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j < gens.size(); ++j)
            if (point_distance(T, gens[i], x) + point_distance(T, x, gens[j]) == point_distance(T, gens[i], gens[j]))
                return true;
    return false;
}

/// Nested minimisation of d(x, x1) + d(phi1 x1, x2) + ... + d(phi_k x_k, y) over candidate
/// points: vertices, gluing generators, the two endpoints, and their images under the
/// gluings, propagated along the skeleton path. Vertex trees must be finite, gluings hulls.
inline LexValue eq_min(const GraphOfActions& G, const DualPt& x, const DualPt& y)
{
    auto path = G.path(x.vertex, y.vertex);
    std::vector<int> verts{x.vertex};
    std::vector<const GluingMap*> maps;
    std::vector<GluingMap> owned;
    owned.reserve(path.size());
    for (const auto& [e, from] : path) {
        const auto& ed = G.edges()[static_cast<std::size_t>(e)];
        owned.push_back(ed.u == from ? ed.map : ed.map.inverse());
        verts.push_back(ed.u == from ? ed.v : ed.u);
    }
    for (const auto& m : owned) maps.push_back(&m);
    std::size_t k = maps.size();
    auto tree = [&](std::size_t i) -> const FiniteEdgeTree& { return finite(G.tree(verts[i])); };
    if (k == 0) return point_distance(tree(0), x.local, y.local);

    std::vector<std::vector<TreePoint>> C(k + 1);
    auto add = [&](std::size_t i, const TreePoint& p) {
        for (const auto& q : C[i])
            if (point_distance(tree(i), p, q).is_zero()) return;
        C[i].push_back(p);
    };
    for (std::size_t i = 0; i <= k; ++i) {
        for (std::size_t v = 0; v < tree(i).vertex_count(); ++v) add(i, VertexPt{static_cast<int>(v)});
        if (i < k)
            for (const auto& g : maps[i]->source_generators()) add(i, g);
        if (i > 0)
            for (const auto& g : maps[i - 1]->target_generators()) add(i, g);
    }
    add(0, x.local);
    add(k, y.local);
    for (int round = 0; round < 2 * static_cast<int>(k) + 1; ++round)
        for (std::size_t i = 0; i < k; ++i) {
            auto fwd = C[i];
            for (const auto& c : fwd)
                if (in_hull(tree(i), maps[i]->source_generators(), c)) add(i + 1, maps[i]->apply(c));
            auto back = C[i + 1];
            GluingMap inv = maps[i]->inverse();
            for (const auto& c : back)
                if (in_hull(tree(i + 1), maps[i]->target_generators(), c)) add(i, inv.apply(c));
        }

    // best[c] over candidates of tree i lying in the source of gluing i.
    std::vector<std::pair<TreePoint, LexValue>> best;
    for (const auto& c : C[0])
        if (in_hull(tree(0), maps[0]->source_generators(), c)) best.push_back({c, point_distance(tree(0), x.local, c)});
    for (std::size_t i = 1; i < k; ++i) {
        std::vector<std::pair<TreePoint, LexValue>> next;
        for (const auto& c : C[i]) {
            if (!in_hull(tree(i), maps[i]->source_generators(), c)) continue;
            std::optional<LexValue> m;
            for (const auto& [p, v] : best) {
                LexValue d = v + point_distance(tree(i), maps[i - 1]->apply(p), c);
                if (!m || d < *m) m = d;
            }
            next.push_back({c, *m});
        }
        best = std::move(next);
    }
    std::optional<LexValue> m;
    for (const auto& [p, v] : best) {
        LexValue d = v + point_distance(tree(k), maps[k - 1]->apply(p), y.local);
        if (!m || d < *m) m = d;
    }
    return *m;
}

/// A random hull gluing from Y1 to Y2: a single point, or a segment of Y1 between two
/// vertices matched with a segment of the same length in Y2 when one exists.
inline GluingMap random_gluing(std::mt19937_64& rng, std::shared_ptr<const FiniteEdgeTree> Y1,
                               std::shared_ptr<const FiniteEdgeTree> Y2)
{
    std::uniform_int_distribution<int> v1(0, static_cast<int>(Y1->vertex_count()) - 1);
    std::uniform_int_distribution<int> v2(0, static_cast<int>(Y2->vertex_count()) - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    int a = v1(rng), c = v2(rng);
    if (coin(rng)) {
        int b = v1(rng);
        if (b != a) {
            LexValue L = vertex_distance(*Y1, a, b);
            std::vector<int> far;
            for (int d = 0; d < static_cast<int>(Y2->vertex_count()); ++d)
                if (!(vertex_distance(*Y2, c, d) < L)) far.push_back(d);
            if (!far.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, far.size() - 1);
                TreePoint end = Y2->point_at(VertexPt{c}, VertexPt{far[pick(rng)]}, L);
                return GluingMap::hulls(Y1, {VertexPt{a}, VertexPt{b}}, Y2, {VertexPt{c}, end});
            }
        }
    }
    return GluingMap::point(Y1, random_point(rng, *Y1), Y2, random_point(rng, *Y2));
}

/// Random graph of actions on a random skeleton with `n` finite vertex trees.
inline std::shared_ptr<const DualTree> random_graph(std::mt19937_64& rng, std::size_t rank, std::size_t n,
                                                    std::size_t tree_size = 5)
{
    std::vector<std::shared_ptr<const FiniteEdgeTree>> ts;
    std::vector<TreePtr> trees;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        ts.push_back(random_tree(rng, rank, tree_size, "t" + std::to_string(i) + "_"));
        trees.push_back(ts.back());
        names.push_back("Y" + std::to_string(i));
    }
    std::vector<GraphOfActions::Edge> edges;
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> parent(0, i - 1);
        std::size_t p = parent(rng);
        edges.push_back({static_cast<int>(p), static_cast<int>(i), random_gluing(rng, ts[p], ts[i])});
    }
    return std::make_shared<DualTree>(std::make_shared<GraphOfActions>(rank, trees, std::move(edges), names));
}

inline DualPt random_dual_point(std::mt19937_64& rng, const DualTree& D)
{
    std::uniform_int_distribution<int> v(0, static_cast<int>(D.graph().vertex_count()) - 1);
    int k = v(rng);
    return DualPt{k, {}, random_point(rng, finite(D.graph().tree(k)))};
}

/// Edge colouring of a random tree into connected classes: each edge continues the class
/// of the edge above it or starts a new one. Returns the vertex sets of the classes.
inline std::vector<std::vector<int>> random_covering_classes(std::mt19937_64& rng, const FiniteEdgeTree& T)
{
    std::vector<int> colour(T.edges().size(), -1);
    std::vector<int> up(T.vertex_count(), -1);  // colour of the edge from the parent
    std::uniform_int_distribution<int> coin(0, 2);
    int next = 0;
    // random_tree hangs vertex v off an earlier vertex by edge v-1.
    for (std::size_t e = 0; e < T.edges().size(); ++e) {
        const auto& ed = T.edges()[e];
        int parent = std::min(ed.u, ed.v), child = std::max(ed.u, ed.v);
        int c = up[static_cast<std::size_t>(parent)];
        if (c < 0 || coin(rng) == 0) c = next++;
        colour[e] = c;
        up[static_cast<std::size_t>(child)] = c;
    }
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(next));
    for (std::size_t e = 0; e < T.edges().size(); ++e) {
        auto& cl = classes[static_cast<std::size_t>(colour[e])];
        for (int v : {T.edges()[e].u, T.edges()[e].v})
            if (std::find(cl.begin(), cl.end(), v) == cl.end()) cl.push_back(v);
    }
    return classes;
}

}  // namespace oracle
