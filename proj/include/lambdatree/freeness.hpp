#pragma once

#include "lambdatree/amalgam.hpp"
#include "lambdatree/finite_edge_tree.hpp"
#include "lambdatree/isometry.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lambdatree {

struct ClassSample
{
    std::string point;
    std::size_t members = 0;
    int diameter = 0;
    int hops = 0;
    bool exhausted = false;
};

/// A group acting on the dual tree of an equivariant graph of actions, with access to
/// the vertex stabilizers and to the equivalence classes of the gluing relation.
class GluedActionView
{
  public:
    virtual ~GluedActionView() = default;
    virtual const GroupAction& action() const = 0;
    virtual std::vector<std::pair<std::string, ActionPtr>> vertex_actions() const = 0;
    /// Points worth sampling beyond random ones, e.g. branching points.
    virtual std::vector<TreePoint> probe_points() const { return {}; }
    virtual ClassSample point_class(const TreePoint& p, int hop_bound) const = 0;
};

class AmalgamView final : public GluedActionView
{
  public:
    AmalgamView(std::shared_ptr<const AmalgamAction> G, std::vector<TreePoint> probes = {}, long transversal_bound = 3,
                std::size_t member_cap = 500)
        : G_(std::move(G)), probes_(std::move(probes)), transversal_bound_(transversal_bound), member_cap_(member_cap)
    {
    }

    const GroupAction& action() const override { return *G_; }
    std::vector<std::pair<std::string, ActionPtr>> vertex_actions() const override
    {
        return {{"A", G_->core().side_ptr(0)}, {"B", G_->core().side_ptr(1)}};
    }
    std::vector<TreePoint> probe_points() const override { return probes_; }
    ClassSample point_class(const TreePoint& p, int hop_bound) const override
    {
        auto c = amalgam_class(G_->core(), as_dual(p), hop_bound, transversal_bound_, member_cap_);
        return {G_->tree().describe(p), c.members.size(), c.diameter, c.hops, c.exhausted};
    }

  private:
    std::shared_ptr<const AmalgamAction> G_;
    std::vector<TreePoint> probes_;
    long transversal_bound_;
    std::size_t member_cap_;
};

/// One free action and no gluing: every class is a single point.
class SingleVertexView final : public GluedActionView
{
  public:
    explicit SingleVertexView(ActionPtr G) : G_(std::move(G)) {}
    const GroupAction& action() const override { return *G_; }
    std::vector<std::pair<std::string, ActionPtr>> vertex_actions() const override { return {{"Y", G_}}; }
    ClassSample point_class(const TreePoint& p, int) const override { return {G_->tree().describe(p), 1, 0, 0, true}; }

  private:
    ActionPtr G_;
};

/// Skeleton a line with vertices indexed by Z, every vertex tree a point and every
/// gluing the only map; the dual tree is a single point. Points are DualPt{k, {}, vertex 0}.
class PointChainTree final : public TreeSpace
{
  public:
    explicit PointChainTree(std::size_t rank) : rank_(rank), point_(std::make_shared<FiniteEdgeTree>(rank, 1, std::vector<FiniteEdgeTree::Edge>{})) {}

    std::size_t rank() const override { return rank_; }
    std::shared_ptr<const FiniteEdgeTree> vertex_tree() const { return point_; }
    void validate(const TreePoint& p) const override
    {
        const DualPt& d = as_dual(p);
        if (!d.coset.empty()) throw Error("point chain points carry no coset");
        point_->validate(d.local);
    }
    LexValue distance(const TreePoint& p, const TreePoint& q) const override
    {
        validate(p);
        validate(q);
        return LexValue::zero(rank_);
    }
    TreePoint point_at(const TreePoint& p, const TreePoint& q, const LexValue& t) const override
    {
        check_interpolation(t, distance(p, q));
        return p;
    }
    std::vector<TreePoint> sample_points(std::mt19937_64& rng, std::size_t count) const override
    {
        std::uniform_int_distribution<int> v(-5, 5);
        std::vector<TreePoint> out;
        for (std::size_t i = 0; i < count; ++i) out.push_back(make_dual(v(rng), VertexPt{0}));
        return out;
    }
    std::string describe(const TreePoint& p) const override { return "v" + std::to_string(as_dual(p).vertex); }

  private:
    std::size_t rank_;
    std::shared_ptr<const FiniteEdgeTree> point_;
};

/// Z = <t> shifting the point chain.
class PointChainAction final : public GroupAction
{
  public:
    PointChainAction(std::shared_ptr<const PointChainTree> tree, int gen) : tree_(std::move(tree)), gens_{gen} {}
    TreePtr tree_ptr() const override { return tree_; }
    const std::vector<int>& generators() const override { return gens_; }
    TreePoint base_point() const override { return make_dual(0, VertexPt{0}); }
    std::string kind() const override { return "point-chain"; }
    Word normalize(const Word& w) const override
    {
        check_word(w);
        return reduce(w);
    }
    TreePoint act(const Word& g, const TreePoint& x) const override
    {
        tree_->validate(x);
        long k = 0;
        for (const auto& l : normalize(g)) k += l.exp;
        return make_dual(as_dual(x).vertex + static_cast<int>(k), VertexPt{0});
    }
    std::pair<Word, Word> split_right(const Word& g, const std::vector<int>& subgroup) const override
    {
        if (subgroup.empty()) return {normalize(g), {}};
        return {{}, normalize(g)};
    }

  private:
    std::shared_ptr<const PointChainTree> tree_;
    std::vector<int> gens_;
};

class PointChainView final : public GluedActionView
{
  public:
    PointChainView(std::size_t rank, int gen)
        : tree_(std::make_shared<PointChainTree>(rank)), G_(std::make_shared<PointChainAction>(tree_, gen)),
          vertex_(std::make_shared<TrivialAction>(tree_->vertex_tree(), std::vector<int>{}, VertexPt{0}))
    {
    }
    const GroupAction& action() const override { return *G_; }
    std::shared_ptr<const PointChainAction> action_ptr() const { return G_; }
    std::vector<std::pair<std::string, ActionPtr>> vertex_actions() const override { return {{"point", vertex_}}; }
    /// Each vertex is glued to both neighbours, so the class grows by two per hop forever.
    ClassSample point_class(const TreePoint& p, int hop_bound) const override
    {
        return {tree_->describe(p), static_cast<std::size_t>(2 * std::max(hop_bound, 0) + 1), 2 * std::max(hop_bound, 0),
                std::max(hop_bound, 0), false};
    }

  private:
    std::shared_ptr<const PointChainTree> tree_;
    std::shared_ptr<const PointChainAction> G_;
    ActionPtr vertex_;
};

enum class FreenessStatus { pass, fail, inconclusive };

inline const char* status_name(FreenessStatus s)
{
    return s == FreenessStatus::pass ? "pass" : (s == FreenessStatus::fail ? "fail" : "inconclusive");
}

struct FreenessOptions
{
    std::optional<int> max_class_diameter;
    std::size_t random_samples = 8;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct FreenessReport
{
    FreenessStatus status = FreenessStatus::pass;
    std::vector<std::string> witnesses;
    std::vector<std::pair<std::string, FreeBallReport>> vertex_checks;
    std::vector<ClassSample> classes;
    FreeBallReport ball;
    int max_diameter = 0;
    bool all_exhausted = true;
};

/// Sampled check of the criterion: free vertex actions and bounded classes imply a free
/// action. A word fixing every sampled point or a non-free vertex action fails; a class
/// not exhausted within hop_bound, or wider than the target diameter, is inconclusive.
inline FreenessReport freeness_criterion_check(const GluedActionView& V, long radius, int hop_bound,
                                               const FreenessOptions& opt = {})
{
    if (hop_bound < 0 || radius < 0) throw Error("bounds must be non-negative");
    FreenessReport r;
    const GroupAction& G = V.action();
    bool fail = false, inconclusive = false;
    for (const auto& [name, A] : V.vertex_actions()) {
        auto rep = A->generators().empty() ? FreeBallReport{} : verify_free_ball(*A, A->generators(), radius, opt.jobs);
        if (!rep.pass) {
            fail = true;
            r.witnesses.push_back("vertex group " + name + " is not free: a nontrivial word has a fixed point");
        }
        r.vertex_checks.push_back({name, rep});
    }

    std::vector<TreePoint> samples{G.base_point()};
    for (const auto& p : V.probe_points()) samples.push_back(p);
    std::mt19937_64 rng(opt.seed);
    for (const auto& p : G.tree().sample_points(rng, opt.random_samples)) samples.push_back(p);

    const TreeSpace& T = G.tree();
    r.ball = scan_ball(G, word_ball(G.generators(), radius), opt.jobs, [&](const Word& w) {
        for (const auto& p : samples)
            if (!T.distance(p, G.act(w, p)).is_zero()) return true;
        return false;
    });
    if (!r.ball.pass) {
        fail = true;
        r.witnesses.push_back("fixed point: every sampled point, e.g. " + T.describe(samples.front()) +
                              ", is fixed by a nontrivial word of the ball");
    }

    for (const auto& p : samples) {
        ClassSample c = V.point_class(p, hop_bound);
        r.max_diameter = std::max(r.max_diameter, c.diameter);
        if (!c.exhausted) {
            r.all_exhausted = false;
            inconclusive = true;
            r.witnesses.push_back("class of " + c.point + " not exhausted after " + std::to_string(c.hops) + " hops (" +
                                  std::to_string(c.members) + " members)");
        }
        if (opt.max_class_diameter && c.diameter > *opt.max_class_diameter) {
            inconclusive = true;
            r.witnesses.push_back("diameter violation: class of " + c.point + " has diameter " +
                                  std::to_string(c.diameter) + " > " + std::to_string(*opt.max_class_diameter));
        }
        r.classes.push_back(std::move(c));
    }
    r.status = fail ? FreenessStatus::fail : (inconclusive ? FreenessStatus::inconclusive : FreenessStatus::pass);
    return r;
}

}  // namespace lambdatree
