#pragma once

#include "lambdatree/gluing.hpp"
#include "lambdatree/graph_of_actions.hpp"
#include "lambdatree/group_action.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace lambdatree {

/// Normal form in A *_C B: alternating syllables from transversals of C, then a C part.
struct AmalgamNormalForm
{
    struct Syllable
    {
        int side = 0;
        Word w;
    };
    std::vector<Syllable> syllables;
    Word c;
};

/// Group structure and Bass-Serre geometry shared by an amalgam's action and its tree.
///
/// The tree is the dual of the equivariant graph of actions over the Bass-Serre tree
/// of A *_C B with vertex trees Y_A, Y_B and edge subtrees given by the gluing phi.
/// Vertices are cosets gA, gB, identified by (side, canonical representative).
class AmalgamCore
{
  public:
    AmalgamCore(ActionPtr a, ActionPtr b, std::vector<int> edge_gens, GluingMap phi,
                std::shared_ptr<const Alphabet> names = {})
        : side_{std::move(a), std::move(b)}, cgens_(std::move(edge_gens)), phi_{phi, phi.inverse()},
          names_(std::move(names))
    {
        if (side_[0]->tree().rank() != side_[1]->tree().rank()) throw Error("vertex trees of different ranks");
        if (phi.source_tree_ptr() != side_[0]->tree_ptr() || phi.target_tree_ptr() != side_[1]->tree_ptr())
            throw Error("edge gluing must map the first vertex tree to the second");
        for (int c : cgens_)
            if (!side_[0]->owns(c) || !side_[1]->owns(c)) throw Error("edge group generator missing from a factor");
        std::set<int> all;
        for (int s = 0; s < 2; ++s)
            for (int g : side_[s]->generators()) all.insert(g);
        gens_.assign(all.begin(), all.end());
        for (int g : gens_) {
            bool in0 = side_[0]->owns(g), in1 = side_[1]->owns(g);
            bool isc = std::find(cgens_.begin(), cgens_.end(), g) != cgens_.end();
            if (in0 && in1 && !isc) throw Error("generator shared by both factors but not in the edge group");
            side_of_[g] = isc ? 2 : (in0 ? 0 : 1);
        }
        check_equivariance();
    }

    const GroupAction& side(int s) const { return *side_[s]; }
    ActionPtr side_ptr(int s) const { return side_[s]; }
    const std::vector<int>& generators() const { return gens_; }
    const std::vector<int>& edge_generators() const { return cgens_; }
    const GluingMap& gluing(int from) const { return phi_[from]; }
    std::size_t rank() const { return side_[0]->tree().rank(); }

    int side_of(int gen) const
    {
        auto it = side_of_.find(gen);
        if (it == side_of_.end()) throw Error("generator id " + std::to_string(gen) + " is not in the amalgam");
        return it->second;
    }

    AmalgamNormalForm normal_form(const Word& w) const
    {
        AmalgamNormalForm nf;
        for (const auto& l : w) push(nf, l);
        return nf;
    }

    static Word flatten(const AmalgamNormalForm& nf)
    {
        Word out;
        for (const auto& s : nf.syllables) out = concat(out, s.w);
        return concat(out, nf.c);
    }

    Word normalize(const Word& w) const { return flatten(normal_form(w)); }

    /// (canonical coset representative, element of the vertex group) with g = rep * a.
    std::pair<Word, Word> vertex_split(int s, const Word& g) const
    {
        AmalgamNormalForm nf = normal_form(g);
        Word a = nf.c;
        if (!nf.syllables.empty() && nf.syllables.back().side == s) {
            a = side_[s]->normalize(concat(nf.syllables.back().w, nf.c));
            nf.syllables.pop_back();
        }
        nf.c.clear();
        return {flatten(nf), a};
    }

    DualPt canonicalize(int s, const Word& g, const TreePoint& x) const
    {
        auto [rep, a] = vertex_split(s, g);
        return DualPt{s, rep, side_[s]->tree().canonical(side_[s]->act(a, x))};
    }

    /// Crossings of the skeleton path from vertex (u, 1) toward the vertex of (v, g).
    /// Each crossing is the element r of the current vertex group such that the path
    /// leaves through the edge r.C; `last` receives the vertex-group part used at v.
    std::vector<Word> crossings(int u, int v, const Word& g, Word* last) const
    {
        AmalgamNormalForm nf = normal_form(g);
        Word a = nf.c;
        if (!nf.syllables.empty() && nf.syllables.back().side == v) {
            a = side_[v]->normalize(concat(nf.syllables.back().w, nf.c));
            nf.syllables.pop_back();
        }
        if (last) *last = a;
        std::vector<Word> out;
        int cur = u;
        std::size_t idx = 0;
        while (true) {
            if (idx == nf.syllables.size()) {
                if (cur == v) break;
                out.push_back({});
                cur = 1 - cur;
                continue;
            }
            if (nf.syllables[idx].side == cur) {
                out.push_back(nf.syllables[idx].w);
                ++idx;
            } else {
                out.push_back({});
            }
            cur = 1 - cur;
        }
        return out;
    }

    int vertex_distance(int u, const Word& ku, int v, const Word& kv) const
    {
        return static_cast<int>(crossings(u, v, normalize(concat(inverse(ku), kv)), nullptr).size());
    }

    std::vector<Leg> legs(const DualPt& p, const DualPt& q) const
    {
        Word g = normalize(concat(inverse(p.coset), q.coset));
        Word last;
        auto cr = crossings(p.vertex, q.vertex, g, &last);
        std::vector<Leg> out;
        int s = p.vertex;
        Word rel;
        TreePoint cur = p.local;
        for (const auto& r : cr) {
            const GroupAction& G = *side_[s];
            TreePoint back = G.act(inverse(r), cur);
            TreePoint pr = project_to_subtree(G.tree(), back, phi_[s].source());
            out.push_back({s, rel, cur, G.act(r, pr)});
            cur = phi_[s].apply(pr);
            rel = concat(rel, r);
            s = 1 - s;
        }
        out.push_back({s, rel, cur, side_[s]->act(last, q.local)});
        return out;
    }

    /// Transversal representatives of C in the vertex group of side s, up to word length L.
    std::vector<Word> transversal(int s, long L) const
    {
        std::set<Word> seen;
        std::vector<Word> out;
        const GroupAction& G = *side_[s];
        for (const auto& w : word_ball(G.generators(), L)) {
            Word rep = G.split_right(w, cgens_).first;
            if (rep.empty() || seen.count(rep)) continue;
            seen.insert(rep);
            out.push_back(rep);
        }
        return out;
    }

    std::string word_name(const Word& w) const
    {
        if (names_) return names_->format(w);
        if (w.empty()) return "1";
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i)
            out += (i ? "*g" : "g") + std::to_string(w[i].gen) + (w[i].exp != 1 ? "^" + std::to_string(w[i].exp) : "");
        return out;
    }

    std::shared_ptr<const Alphabet> names() const { return names_; }

  private:
    void push(AmalgamNormalForm& nf, const Letter& l) const
    {
        int s = side_of(l.gen);
        if (s == 2) {
            nf.c = side_[0]->normalize(concat(nf.c, Word{l}));
            return;
        }
        Word m = concat(nf.c, Word{l});
        if (!nf.syllables.empty() && nf.syllables.back().side == s) {
            m = concat(nf.syllables.back().w, m);
            nf.syllables.pop_back();
        }
        auto [rep, h] = side_[s]->split_right(m, cgens_);
        if (!rep.empty()) nf.syllables.push_back({s, rep});
        nf.c = side_[0]->normalize(h);
    }

    void check_equivariance() const
    {
        if (!phi_[0].is_linear()) {
            if (!cgens_.empty()) {
                // Hull gluings are only equivariant for a trivial edge group here.
                throw Error("a nontrivial edge group needs a linear gluing");
            }
            return;
        }
        TreePoint p = phi_[0].source_line()->at(LexValue::zero(rank()));
        for (int c : cgens_) {
            Word w{{c, 1}};
            TreePoint lhs = phi_[0].apply(phi_[0].source_line()->project(side_[0]->act(w, p)));
            TreePoint rhs = side_[1]->act(w, phi_[0].apply(p));
            if (!same_point(side_[1]->tree(), lhs, rhs))
                throw Error("edge gluing does not commute with edge group generator " + std::to_string(c));
        }
    }

    ActionPtr side_[2];
    std::vector<int> cgens_;
    GluingMap phi_[2];
    std::shared_ptr<const Alphabet> names_;
    std::vector<int> gens_;
    std::map<int, int> side_of_;
};

using CorePtr = std::shared_ptr<const AmalgamCore>;

/// The dual tree of an amalgam's equivariant graph of actions, expanded lazily.
class AmalgamTree final : public TreeSpace
{
  public:
    explicit AmalgamTree(CorePtr core) : core_(std::move(core)) {}

    const AmalgamCore& core() const { return *core_; }
    std::size_t rank() const override { return core_->rank(); }

    void validate(const TreePoint& p) const override
    {
        const DualPt& d = as_dual(p);
        if (d.vertex != 0 && d.vertex != 1) throw Error("amalgam point side must be 0 or 1");
        core_->side(d.vertex).tree().validate(d.local);
    }

    TreePoint canonical(const TreePoint& p) const override
    {
        validate(p);
        const DualPt& d = as_dual(p);
        return Box<DualPt>(core_->canonicalize(d.vertex, d.coset, d.local));
    }

    LexValue distance(const TreePoint& p, const TreePoint& q) const override
    {
        validate(p);
        validate(q);
        LexValue d = LexValue::zero(rank());
        for (const auto& l : core_->legs(as_dual(p), as_dual(q))) d += core_->side(l.vertex).tree().distance(l.from, l.to);
        return d;
    }

    TreePoint point_at(const TreePoint& p, const TreePoint& q, const LexValue& t) const override
    {
        if (t.sign() < 0) throw Error("interpolation parameter outside the segment");
        const DualPt& a = as_dual(p);
        LexValue rest = t;
        for (const auto& l : core_->legs(a, as_dual(q))) {
            const TreeSpace& Y = core_->side(l.vertex).tree();
            LexValue d = Y.distance(l.from, l.to);
            if (rest <= d) return Box<DualPt>(core_->canonicalize(l.vertex, concat(a.coset, l.coset), Y.point_at(l.from, l.to, rest)));
            rest -= d;
        }
        throw Error("interpolation parameter outside the segment");
    }

    std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const override
    {
        std::vector<TreePoint> out;
        const auto& gens = core_->generators();
        std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
        std::uniform_int_distribution<int> len(0, 3), sgn(0, 1);
        for (std::size_t i = 0; i < count; ++i) {
            Word w;
            int n = len(rng);
            for (int j = 0; j < n; ++j) push_letter(w, {gens[pick(rng)], sgn(rng) ? 1 : -1});
            int s = static_cast<int>(i % 2);
            TreePoint x = core_->side(s).tree().sample_points(rng, 1).front();
            out.push_back(Box<DualPt>(core_->canonicalize(s, w, x)));
        }
        return out;
    }

    std::string describe(const TreePoint& p) const override
    {
        const DualPt& d = as_dual(p);
        return std::string(d.vertex == 0 ? "A" : "B") + "[" + core_->word_name(d.coset) + "]:" +
               core_->side(d.vertex).tree().describe(d.local);
    }

  private:
    CorePtr core_;
};

/// A linear vertex tree Y_s sitting at the base vertex of an amalgam tree. The gate of
/// a point is where its skeleton path enters the base vertex.
class VertexLine final : public LinearSubtree
{
  public:
    VertexLine(std::shared_ptr<const AmalgamTree> tree, int side, LinePtr chart)
        : tree_(std::move(tree)), side_(side), chart_(std::move(chart))
    {
        if (&chart_->tree() != &tree_->core().side(side_).tree()) throw Error("chart is not on the vertex tree");
    }

    const TreeSpace& tree() const override { return *tree_; }

    TreePoint project(const TreePoint& x) const override { return lift(down(x)); }

    LexValue coordinate(const TreePoint& p) const override { return chart_->coordinate(down(p)); }

    TreePoint at(const LexValue& s) const override { return lift(chart_->at(s)); }

    std::optional<TreePoint> far_point(int direction, long scale) const override
    {
        auto p = chart_->far_point(direction, scale);
        if (!p) return std::nullopt;
        return lift(*p);
    }

    std::string describe() const override { return "vertex " + std::to_string(side_) + " " + chart_->describe(); }

  private:
    TreePoint lift(const TreePoint& local) const { return Box<DualPt>(DualPt{side_, {}, local}); }

    TreePoint down(const TreePoint& x) const
    {
        tree_->validate(x);
        const DualPt& d = as_dual(x);
        if (d.vertex == side_ && d.coset.empty()) return chart_->project(d.local);
        DualPt q{side_, {}, chart_->at(LexValue::zero(tree_->rank()))};
        const AmalgamCore& K = tree_->core();
        Leg last = K.legs(d, q).back();
        // The last leg is written in the frame d.coset * last.coset of the base vertex.
        auto [rep, a] = K.vertex_split(side_, concat(d.coset, last.coset));
        if (!rep.empty()) throw Error("skeleton path does not end at the base vertex");
        return chart_->project(K.side(side_).act(a, last.from));
    }

    std::shared_ptr<const AmalgamTree> tree_;
    int side_;
    LinePtr chart_;
};

/// Bounded closure of a point's equivalence class in an amalgam tree.
struct AmalgamClass
{
    std::vector<DualPt> members;
    std::vector<int> parent;  ///< index of the member it was reached from, -1 for the root
    int diameter = 0;
    int hops = 0;
    bool exhausted = false;
};

/// Breadth-first closure through the edges a.C with a in the transversal ball. Stops
/// after hop_bound layers or member_cap members; `exhausted` only if a layer came up empty.
inline AmalgamClass amalgam_class(const AmalgamCore& K, const DualPt& p0, int hop_bound, long transversal_bound,
                                  std::size_t member_cap = 4000)
{
    AmalgamClass r;
    DualPt p = K.canonicalize(p0.vertex, p0.coset, p0.local);
    std::set<std::pair<int, Word>> seen{{p.vertex, p.coset}};
    r.members = {p};
    r.parent = {-1};
    std::vector<Word> trans[2] = {K.transversal(0, transversal_bound), K.transversal(1, transversal_bound)};
    for (auto& t : trans) t.insert(t.begin(), Word{});
    std::size_t begin = 0;
    while (true) {
        std::size_t end = r.members.size();
        bool grew = false;
        for (std::size_t i = begin; i < end && r.members.size() < member_cap; ++i) {
            DualPt x = r.members[i];
            const GroupAction& G = K.side(x.vertex);
            for (const auto& a : trans[x.vertex]) {
                TreePoint back = G.act(inverse(a), x.local);
                if (!subtree_contains(G.tree(), K.gluing(x.vertex).source(), back)) continue;
                DualPt y = K.canonicalize(1 - x.vertex, concat(x.coset, a), K.gluing(x.vertex).apply(back));
                if (!seen.insert({y.vertex, y.coset}).second) continue;
                grew = true;
                if (r.hops == hop_bound || r.members.size() >= member_cap) break;
                r.members.push_back(y);
                r.parent.push_back(static_cast<int>(i));
            }
        }
        if (!grew) {
            r.exhausted = true;
            break;
        }
        if (r.hops == hop_bound || r.members.size() >= member_cap) break;
        ++r.hops;
        begin = end;
    }
    // The class is a subtree of the skeleton, so its diameter is that of the BFS tree.
    std::vector<int> height(r.members.size(), 0);
    for (std::size_t i = r.members.size(); i-- > 1;) {
        auto u = static_cast<std::size_t>(r.parent[i]);
        int h = height[i] + 1;
        r.diameter = std::max(r.diameter, height[u] + h);
        height[u] = std::max(height[u], h);
    }
    return r;
}

/// A *_C B acting on its lazily expanded dual tree.
class AmalgamAction final : public GroupAction
{
  public:
    explicit AmalgamAction(CorePtr core) : core_(std::move(core)), tree_(std::make_shared<AmalgamTree>(core_)) {}

    const AmalgamCore& core() const { return *core_; }
    CorePtr core_ptr() const { return core_; }
    TreePtr tree_ptr() const override { return tree_; }
    std::shared_ptr<const AmalgamTree> amalgam_tree() const { return tree_; }
    const std::vector<int>& generators() const override { return core_->generators(); }
    std::string kind() const override { return "amalgam"; }

    TreePoint base_point() const override
    {
        return Box<DualPt>(core_->canonicalize(0, {}, core_->side(0).base_point()));
    }

    Word normalize(const Word& w) const override
    {
        check_word(w);
        return core_->normalize(w);
    }

    TreePoint act(const Word& g, const TreePoint& x) const override
    {
        tree_->validate(x);
        const DualPt& d = as_dual(x);
        return Box<DualPt>(core_->canonicalize(d.vertex, concat(g, d.coset), d.local));
    }

    /// Supported for free products (trivial edge group) and subgroups of one factor.
    std::pair<Word, Word> split_right(const Word& g, const std::vector<int>& subgroup) const override
    {
        if (!core_->edge_generators().empty())
            throw Error("coset splitting in an amalgam is only supported over a trivial edge group");
        if (subgroup.empty()) return {normalize(g), {}};
        int s = core_->side_of(subgroup.front());
        for (int h : subgroup)
            if (core_->side_of(h) != s) throw Error("subgroup must lie in one free factor");
        AmalgamNormalForm nf = core_->normal_form(g);
        Word tail;
        if (!nf.syllables.empty() && nf.syllables.back().side == s) {
            auto [rep, h] = core_->side(s).split_right(nf.syllables.back().w, subgroup);
            tail = h;
            if (rep.empty())
                nf.syllables.pop_back();
            else
                nf.syllables.back().w = rep;
        }
        return {AmalgamCore::flatten(nf), tail};
    }

  private:
    CorePtr core_;
    std::shared_ptr<const AmalgamTree> tree_;
};

inline std::shared_ptr<const AmalgamAction> make_amalgam(ActionPtr a, ActionPtr b, std::vector<int> edge_gens,
                                                          GluingMap phi, std::shared_ptr<const Alphabet> names = {})
{
    return std::make_shared<AmalgamAction>(
        std::make_shared<AmalgamCore>(std::move(a), std::move(b), std::move(edge_gens), std::move(phi), std::move(names)));
}

}  // namespace lambdatree
