#pragma once

#include "lambdatree/finite_edge_tree.hpp"
#include "lambdatree/tree_space.hpp"

#include <functional>
#include <numeric>

namespace lambdatree {

/// Base change Λ -> Λ/Λ0 on an arbitrary tree: same points, distances projected.
/// Points at infinitesimal distance become equal.
class KilledTree final : public TreeSpace
{
  public:
    KilledTree(TreePtr base, std::size_t k) : base_(std::move(base)), k_(k)
    {
        if (k_ > base_->rank()) throw Error("kill level out of range");
    }

    std::size_t rank() const override { return k_; }
    const TreeSpace& base() const { return *base_; }

    void validate(const TreePoint& p) const override { base_->validate(p); }
    LexValue distance(const TreePoint& p, const TreePoint& q) const override
    {
        return base_->distance(p, q).project_kill(k_);
    }

    TreePoint point_at(const TreePoint& p, const TreePoint& q, const LexValue& t) const override
    {
        LexValue d = base_->distance(p, q);
        check_interpolation(t, d.project_kill(k_));
        LexValue s = t.lift(base_->rank());
        return base_->point_at(p, q, d < s ? d : s);
    }

    std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const override
    {
        return base_->sample_points(rng, count);
    }

    std::string describe(const TreePoint& p) const override { return base_->describe(p); }

    /// The quotient map is the identity on point representations.
    TreePoint project(const TreePoint& p) const { return base_->canonical(p); }

  private:
    TreePtr base_;
    std::size_t k_;
};

/// Quotient of a finite edge tree: edges of magnitude <= n-k are contracted and the
/// remaining lengths projected.
struct ContractedTree
{
    std::shared_ptr<const FiniteEdgeTree> tree;
    std::vector<int> vertex_map;  ///< old vertex -> new vertex
    std::vector<int> edge_map;    ///< old edge -> new edge, or -1 when contracted
    std::size_t k = 0;

    TreePoint map(const FiniteEdgeTree& old, const TreePoint& p) const
    {
        TreePoint c = old.canonical(p);
        if (auto v = std::get_if<VertexPt>(&c)) return VertexPt{vertex_map[static_cast<std::size_t>(v->id)]};
        const auto& e = std::get<EdgePt>(c);
        int ne = edge_map[static_cast<std::size_t>(e.edge)];
        const auto& oe = old.edges()[static_cast<std::size_t>(e.edge)];
        if (ne < 0) return VertexPt{vertex_map[static_cast<std::size_t>(oe.u)]};
        return tree->canonical(EdgePt{ne, e.offset.project_kill(k)});
    }
};

inline ContractedTree contract_edges(const FiniteEdgeTree& T, std::size_t k)
{
    std::size_t n = T.rank();
    if (k > n) throw Error("kill level out of range");
    std::vector<int> root(T.vertex_count());
    std::iota(root.begin(), root.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (root[static_cast<std::size_t>(x)] != x) x = root[static_cast<std::size_t>(x)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(x)])];
        return x;
    };
    for (const auto& e : T.edges())
        if (e.length.magnitude() + k <= n) root[static_cast<std::size_t>(find(e.u))] = find(e.v);
    ContractedTree out;
    out.k = k;
    std::vector<int> id(T.vertex_count(), -1);
    int next = 0;
    out.vertex_map.resize(T.vertex_count());
    for (std::size_t v = 0; v < T.vertex_count(); ++v) {
        int r = find(static_cast<int>(v));
        if (id[static_cast<std::size_t>(r)] < 0) id[static_cast<std::size_t>(r)] = next++;
        out.vertex_map[v] = id[static_cast<std::size_t>(r)];
    }
    std::vector<FiniteEdgeTree::Edge> edges;
    for (const auto& e : T.edges()) {
        if (e.length.magnitude() + k <= n) {
            out.edge_map.push_back(-1);
            continue;
        }
        out.edge_map.push_back(static_cast<int>(edges.size()));
        edges.push_back({out.vertex_map[static_cast<std::size_t>(e.u)], out.vertex_map[static_cast<std::size_t>(e.v)],
                         e.length.project_kill(k)});
    }
    out.tree = std::make_shared<FiniteEdgeTree>(k, static_cast<std::size_t>(next), std::move(edges));
    return out;
}

}  // namespace lambdatree
