#pragma once

#include "lambdatree/constructions.hpp"
#include "lambdatree/freeness.hpp"
#include "lambdatree/graph_of_actions.hpp"
#include "lambdatree/kill.hpp"
#include "lambdatree/valuation.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lambdatree {

using json = nlohmann::json;

inline constexpr int scene_schema = 1;

/// A finite table of distances, used only for axiom checks of metrics that need not be trees.
struct MetricTable
{
    std::vector<std::string> points;
    std::vector<std::vector<LexValue>> d;
};

struct Covering
{
    std::string tree;
    std::vector<ClosedSubtree> members;
};

/// Valued field and generator matrices, kept generic over the two field kinds.
struct FieldBlock
{
    std::string context;
    std::vector<std::array<std::string, 4>> matrices;
};

struct Scene
{
    json doc;
    std::size_t rank = 0;
    std::map<std::string, TreePtr> trees;
    std::map<std::string, MetricTable> metrics;
    std::shared_ptr<const DualTree> dual;
    std::optional<Covering> covering;
    std::shared_ptr<Alphabet> names = std::make_shared<Alphabet>();
    ActionPtr action;
    std::shared_ptr<const GluedActionView> view;
    std::optional<int> target_diameter;
    std::optional<FieldBlock> field;
};

namespace scene_detail {

inline const json& require(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) throw Error(where + ": missing field '" + key + "'");
    return j.at(key);
}

inline std::string str_field(const json& j, const char* key, const std::string& where)
{
    const json& v = require(j, key, where);
    if (!v.is_string()) throw Error(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline long int_field(const json& j, const char* key, const std::string& where)
{
    const json& v = require(j, key, where);
    if (!v.is_number_integer()) throw Error(where + ": field '" + key + "' must be an integer");
    return v.get<long>();
}

inline LexValue lex_field(const json& v, std::size_t rank, const std::string& where)
{
    if (!v.is_string()) throw Error(where + ": expected a value string like \"(1,0)\"");
    LexValue x = LexValue::parse(v.get<std::string>());
    if (x.rank() != rank) throw Error(where + ": value " + x.str() + " does not have rank " + std::to_string(rank));
    return x;
}

inline std::vector<std::string> string_list(const json& v, const std::string& where)
{
    if (!v.is_array()) throw Error(where + ": expected a list of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string()) throw Error(where + ": expected a list of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

}  // namespace scene_detail

/// Point syntax: finite trees take a vertex name or `u-v@(offset from u)`, lines a value
/// `(a,b)`, dual trees `Vertex:local`, and group trees `w:word` for word . base point.
inline TreePoint parse_point(const TreeSpace& T, const std::string& text, const Scene* scene = nullptr)
{
    if (scene && scene->action && &T == &scene->action->tree() && text.rfind("w:", 0) == 0) {
        Word w = scene->names->parse(text.substr(2));
        return scene->action->act(w, scene->action->base_point());
    }
    if (auto F = dynamic_cast<const FiniteEdgeTree*>(&T)) {
        auto at = text.find('@');
        if (at == std::string::npos) return VertexPt{F->vertex_id(text)};
        auto dash = text.find('-');
        if (dash == std::string::npos || dash > at) throw Error("edge point '" + text + "' must read u-v@(offset)");
        int u = F->vertex_id(text.substr(0, dash)), v = F->vertex_id(text.substr(dash + 1, at - dash - 1));
        int e = F->edge_between(u, v);
        const auto& ed = F->edges()[static_cast<std::size_t>(e)];
        LexValue x = LexValue::parse(text.substr(at + 1));
        if (x.rank() != F->rank()) throw Error("offset in '" + text + "' has the wrong rank");
        if (x.sign() < 0 || ed.length < x) throw Error("offset in '" + text + "' is outside the edge");
        TreePoint p = EdgePt{e, ed.u == u ? x : ed.length - x};
        return F->canonical(p);
    }
    if (dynamic_cast<const LambdaLine*>(&T)) {
        TreePoint p = LinePt{LexValue::parse(text)};
        T.validate(p);
        return p;
    }
    if (auto D = dynamic_cast<const DualTree*>(&T)) {
        auto colon = text.find(':');
        if (colon == std::string::npos) throw Error("dual point '" + text + "' must read Vertex:local");
        std::string name = text.substr(0, colon);
        const GraphOfActions& G = D->graph();
        for (std::size_t v = 0; v < G.vertex_count(); ++v)
            if (G.name(static_cast<int>(v)) == name)
                return make_dual(static_cast<int>(v), parse_point(G.tree(static_cast<int>(v)), text.substr(colon + 1)));
        throw Error("unknown graph vertex '" + name + "'");
    }
    if (auto S = dynamic_cast<const SubtreeView*>(&T)) return parse_point(*S->tree_ptr(), text);
    throw Error("points of this tree are given as w:word");
}

/// Rewrites every `(a,b,...)` string into lowest terms, recursively; other values are kept.
inline json canonical_json(const json& j)
{
    if (j.is_object()) {
        json out = json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = canonical_json(it.value());
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (const auto& x : j) out.push_back(canonical_json(x));
        return out;
    }
    if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        if (s.size() >= 2 && s.front() == '(' && s.back() == ')' && s.find(")/(") == std::string::npos) {
            try {
                return LexValue::parse(s).str();
            } catch (const Error&) {
            }
        }
    }
    return j;
}

inline std::string dump_canonical(const json& j) { return canonical_json(j).dump(2) + "\n"; }

inline VertexActionData vertex_from_recipe(const json& r, std::shared_ptr<Alphabet> names, std::size_t rank,
                                           const std::string& where)
{
    using namespace scene_detail;
    std::string kind = r.value("kind", std::string("abelian_free_product"));
    if (kind != "abelian_free_product") throw Error(where + ": unknown vertex kind '" + kind + "'");
    auto lengths = [&](const char* key) {
        std::vector<LexValue> out;
        const json& v = require(r, key, where);
        if (!v.is_array()) throw Error(where + ": '" + key + "' must be a list");
        for (const auto& x : v) out.push_back(lex_field(x, rank, where));
        return out;
    };
    return abelian_free_product(std::move(names), string_list(require(r, "c", where), where), lengths("c_lengths"),
                                string_list(require(r, "x", where), where), lengths("x_lengths"),
                                lex_field(require(r, "overlap", where), rank, where));
}

struct BuiltConstruction
{
    std::shared_ptr<const AmalgamAction> action;
    std::shared_ptr<const GluedActionView> view;
    int target_diameter = 0;
    json summary;
};

inline json difference_json(const DifferenceInterval& d) { return json::array({d.lo.str(), d.hi.str()}); }

/// Builds an amalgam or HNN-type construction from its recipe; `ball` bounds the conjugates
/// used for the branching loci.
inline BuiltConstruction build_construction(const std::string& kind, const json& recipe, long ball,
                                            std::shared_ptr<Alphabet> names)
{
    using namespace scene_detail;
    std::size_t rank = static_cast<std::size_t>(int_field(recipe, "rank", "recipe"));
    long N = recipe.contains("N") ? int_field(recipe, "N", "recipe") : 6;
    if (ball < 0) throw Error("ball must be non-negative");
    BuiltConstruction b;
    json& s = b.summary;
    if (kind == "amalgam") {
        auto A = vertex_from_recipe(require(recipe, "A", "recipe"), names, rank, "recipe.A");
        auto B = vertex_from_recipe(require(recipe, "B", "recipe"), names, rank, "recipe.B");
        std::optional<LexValue> offset;
        if (recipe.contains("offset") && recipe.at("offset") != "auto")
            offset = lex_field(recipe.at("offset"), rank, "recipe.offset");
        auto c = acylindrical_amalgam(A, B, offset, ball, N, names);
        b.action = c.action;
        b.view = std::make_shared<AmalgamView>(c.action, c.probes);
        b.target_diameter = 2;
        s["offset"] = c.offset.str();
        s["offset_auto"] = c.offset_auto;
        s["offset_prohibited"] = c.offset_prohibited;
        s["orientation"] = c.orientation;
        s["locus_pieces"] = {c.locus_a.pieces.size(), c.locus_b.pieces.size()};
        s["prohibited_intervals"] = c.prohibited.size();
        s["magnitude_bound_holds"] = c.locus_a.bound_holds && c.locus_b.bound_holds;
    } else if (kind == "hnn") {
        auto A = vertex_from_recipe(require(recipe, "A", "recipe"), names, rank, "recipe.A");
        int k = static_cast<int>(recipe.contains("k") ? int_field(recipe, "k", "recipe") : 1);
        std::optional<std::vector<LexValue>> lengths;
        if (recipe.contains("lengths") && recipe.at("lengths") != "auto") {
            lengths.emplace();
            const json& v = recipe.at("lengths");
            if (!v.is_array()) throw Error("recipe: 'lengths' must be \"auto\" or a list");
            for (const auto& x : v) lengths->push_back(lex_field(x, rank, "recipe.lengths"));
        }
        auto c = hnn_abelianized(names, A, k, lengths, ball, N);
        b.action = c.action;
        b.view = std::make_shared<AmalgamView>(c.action, c.probes);
        b.target_diameter = 4;
        json ls = json::array();
        for (const auto& l : c.lengths) ls.push_back(l.str());
        s["lengths"] = ls;
        s["lengths_auto"] = c.lengths_auto;
        s["locus_pieces"] = c.locus.pieces.size();
        s["difference_intervals"] = c.locus.D.size();
        s["magnitude_bound_holds"] = c.locus.bound_holds;
        json col = json::array();
        for (const auto& x : c.collisions)
            col.push_back({{"element", names->format(x.element)}, {"length", x.length.str()}, {"x", x.x.str()},
                           {"x2", x.x2.str()}});
        s["collisions"] = col;
    } else {
        throw Error("unknown construction '" + kind + "': expected amalgam or hnn");
    }
    s["target_diameter"] = b.target_diameter;
    return b;
}

inline void load_trees(Scene& S, const json& trees)
{
    using namespace scene_detail;
    if (!trees.is_array()) throw Error("'trees' must be a list");
    for (std::size_t i = 0; i < trees.size(); ++i) {
        const json& t = trees[i];
        std::string where = "trees[" + std::to_string(i) + "]";
        std::string name = str_field(t, "name", where);
        if (S.trees.count(name) || S.metrics.count(name)) throw Error(where + ": duplicate tree name '" + name + "'");
        std::string kind = str_field(t, "kind", where);
        if (kind == "finite") {
            auto vs = string_list(require(t, "vertices", where), where + ".vertices");
            std::map<std::string, int> id;
            for (std::size_t v = 0; v < vs.size(); ++v)
                if (!id.emplace(vs[v], static_cast<int>(v)).second)
                    throw Error(where + ": duplicate vertex '" + vs[v] + "'");
            std::vector<FiniteEdgeTree::Edge> edges;
            const json& es = require(t, "edges", where);
            if (!es.is_array()) throw Error(where + ": 'edges' must be a list");
            for (const auto& e : es) {
                if (!e.is_array() || e.size() != 3) throw Error(where + ": an edge is [u, v, length]");
                auto look = [&](const json& x) {
                    if (!x.is_string() || !id.count(x.get<std::string>()))
                        throw Error(where + ": edge endpoint " + x.dump() + " is not a vertex");
                    return id.at(x.get<std::string>());
                };
                edges.push_back({look(e[0]), look(e[1]), lex_field(e[2], S.rank, where)});
            }
            S.trees[name] = std::make_shared<FiniteEdgeTree>(S.rank, vs.size(), std::move(edges), vs);
        } else if (kind == "line") {
            std::size_t level = t.contains("level") ? static_cast<std::size_t>(int_field(t, "level", where)) : S.rank;
            std::optional<LexValue> lo, hi;
            if (t.contains("lower")) lo = lex_field(t.at("lower"), S.rank, where);
            if (t.contains("upper")) hi = lex_field(t.at("upper"), S.rank, where);
            S.trees[name] = std::make_shared<LambdaLine>(S.rank, level, lo, hi);
        } else if (kind == "metric") {
            MetricTable m;
            m.points = string_list(require(t, "points", where), where + ".points");
            const json& d = require(t, "distances", where);
            if (!d.is_array() || d.size() != m.points.size()) throw Error(where + ": distance table has the wrong size");
            for (const auto& row : d) {
                if (!row.is_array() || row.size() != m.points.size())
                    throw Error(where + ": distance table has the wrong size");
                std::vector<LexValue> r;
                for (const auto& x : row) r.push_back(lex_field(x, S.rank, where));
                m.d.push_back(std::move(r));
            }
            for (std::size_t a = 0; a < m.d.size(); ++a)
                for (std::size_t b = 0; b < m.d.size(); ++b)
                    if (m.d[a][b] != m.d[b][a] || (a == b && !m.d[a][b].is_zero()) || m.d[a][b].sign() < 0)
                        throw Error(where + ": distance table is not a symmetric nonnegative table with zero diagonal");
            S.metrics[name] = std::move(m);
        } else {
            throw Error(where + ": unknown tree kind '" + kind + "'");
        }
    }
}

inline TreePtr scene_tree(const Scene& S, const std::string& name)
{
    auto it = S.trees.find(name);
    if (it == S.trees.end()) throw Error("unknown tree '" + name + "'");
    return it->second;
}

inline void load_graph(Scene& S, const json& g)
{
    using namespace scene_detail;
    const json& vs = require(g, "vertices", "graph");
    if (!vs.is_array()) throw Error("graph: 'vertices' must be a list");
    std::vector<TreePtr> trees;
    std::vector<std::string> names;
    for (const auto& v : vs) {
        names.push_back(str_field(v, "name", "graph.vertices"));
        trees.push_back(scene_tree(S, str_field(v, "tree", "graph.vertices")));
    }
    auto vid = [&](const std::string& n) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return static_cast<int>(i);
        throw Error("graph: unknown vertex '" + n + "'");
    };
    std::vector<GraphOfActions::Edge> edges;
    const json& es = require(g, "edges", "graph");
    if (!es.is_array()) throw Error("graph: 'edges' must be a list");
    for (std::size_t i = 0; i < es.size(); ++i) {
        std::string where = "graph.edges[" + std::to_string(i) + "]";
        const json& e = es[i];
        int u = vid(str_field(e, "u", where)), v = vid(str_field(e, "v", where));
        const json& gl = require(e, "gluing", where);
        std::string kind = str_field(gl, "kind", where + ".gluing");
        TreePtr tu = trees[static_cast<std::size_t>(u)], tv = trees[static_cast<std::size_t>(v)];
        if (kind == "hull") {
            std::vector<TreePoint> a, b;
            for (const auto& p : string_list(require(gl, "source", where), where)) a.push_back(parse_point(*tu, p));
            for (const auto& p : string_list(require(gl, "target", where), where)) b.push_back(parse_point(*tv, p));
            edges.push_back({u, v, GluingMap::hulls(tu, a, tv, b)});
        } else if (kind == "line") {
            auto lu = std::dynamic_pointer_cast<const LambdaLine>(tu), lv = std::dynamic_pointer_cast<const LambdaLine>(tv);
            if (!lu || !lv) throw Error(where + ": line gluings join two line trees");
            int o = static_cast<int>(gl.contains("orientation") ? int_field(gl, "orientation", where) : 1);
            edges.push_back({u, v,
                             GluingMap::lines_by_coordinate(tu, std::make_shared<LineChart>(lu), tv,
                                                            std::make_shared<LineChart>(lv),
                                                            lex_field(require(gl, "source_anchor", where), S.rank, where),
                                                            lex_field(require(gl, "target_anchor", where), S.rank, where), o)});
        } else {
            throw Error(where + ": unknown gluing kind '" + kind + "'");
        }
    }
    S.dual = std::make_shared<DualTree>(std::make_shared<GraphOfActions>(S.rank, trees, std::move(edges), names));
}

inline void load_action(Scene& S, const json& a)
{
    using namespace scene_detail;
    std::string kind = str_field(a, "kind", "action");
    if (kind == "cayley") {
        auto A = free_cayley(*S.names, S.rank, static_cast<std::size_t>(int_field(a, "free_rank", "action")),
                             static_cast<std::size_t>(int_field(a, "level", "action")));
        S.action = A;
        S.view = std::make_shared<SingleVertexView>(A);
    } else if (kind == "line") {
        const json& gs = require(a, "generators", "action");
        if (!gs.is_array()) throw Error("action: 'generators' must be a list of [name, length]");
        std::vector<std::string> names;
        std::vector<LexValue> lengths;
        for (const auto& g : gs) {
            if (!g.is_array() || g.size() != 2 || !g[0].is_string())
                throw Error("action: 'generators' must be a list of [name, length]");
            names.push_back(g[0].get<std::string>());
            lengths.push_back(lex_field(g[1], S.rank, "action.generators"));
        }
        auto A = lex_line_abelian(*S.names, names, lengths);
        S.action = A;
        S.view = std::make_shared<SingleVertexView>(A);
    } else if (kind == "point-chain") {
        int t = S.names->add(a.value("generator", std::string("t")));
        auto V = std::make_shared<PointChainView>(S.rank, t);
        S.action = V->action_ptr();
        S.view = V;
    } else {
        throw Error("action: unknown kind '" + kind + "'");
    }
}

inline Scene load_scene(const json& doc)
{
    using namespace scene_detail;
    Scene S;
    if (!doc.is_object()) throw Error("scene must be a JSON object");
    if (!doc.contains("schema") || doc.at("schema") != scene_schema)
        throw Error("scene must declare \"schema\": " + std::to_string(scene_schema));
    static const std::set<std::string> known{"schema", "rank", "trees", "graph", "covering", "action", "field",
                                             "construction", "description"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!known.count(it.key())) throw Error("unknown scene field '" + it.key() + "'");
    long rank = int_field(doc, "rank", "scene");
    if (rank < 1) throw Error("scene rank must be positive");
    S.rank = static_cast<std::size_t>(rank);
    S.doc = doc;
    if (doc.contains("trees")) load_trees(S, doc.at("trees"));
    if (doc.contains("graph")) load_graph(S, doc.at("graph"));
    if (doc.contains("covering")) {
        const json& c = doc.at("covering");
        Covering cov;
        cov.tree = str_field(c, "tree", "covering");
        TreePtr T = scene_tree(S, cov.tree);
        const json& ms = require(c, "members", "covering");
        if (!ms.is_array()) throw Error("covering: 'members' must be a list of point lists");
        for (const auto& m : ms) {
            std::vector<TreePoint> pts;
            for (const auto& p : string_list(m, "covering.members")) pts.push_back(parse_point(*T, p));
            if (pts.empty()) throw Error("covering: empty member");
            cov.members.push_back(hull_of(pts));
        }
        S.covering = std::move(cov);
    }
    if (doc.contains("action") && doc.contains("construction"))
        throw Error("a scene has either an action block or a construction block");
    if (doc.contains("action")) load_action(S, doc.at("action"));
    if (doc.contains("construction")) {
        const json& c = doc.at("construction");
        auto built = build_construction(str_field(c, "kind", "construction"), require(c, "recipe", "construction"),
                                        int_field(c, "ball", "construction"), S.names);
        if (static_cast<long>(built.action->tree().rank()) != rank) throw Error("construction rank differs from scene rank");
        S.action = built.action;
        S.view = built.view;
        S.target_diameter = built.target_diameter;
    }
    if (doc.contains("field")) {
        const json& f = doc.at("field");
        FieldBlock fb;
        fb.context = str_field(f, "context", "field");
        const json& ms = require(f, "matrices", "field");
        if (!ms.is_array()) throw Error("field: 'matrices' must be a list");
        for (const auto& m : ms) {
            if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 ||
                m[1].size() != 2)
                throw Error("field: a matrix is [[a, b], [c, d]]");
            std::array<std::string, 4> e;
            for (std::size_t k = 0; k < 4; ++k) {
                const json& x = m[k / 2][k % 2];
                if (x.is_number_integer())
                    e[k] = std::to_string(x.get<long>());
                else if (x.is_string())
                    e[k] = x.get<std::string>();
                else
                    throw Error("field: matrix entries are integers or strings");
            }
            fb.matrices.push_back(e);
        }
        S.field = std::move(fb);
    }
    return S;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline Scene load_scene_file(const std::string& path) { return load_scene(read_json_file(path)); }

/// DOT for every finite tree and the skeleton of the graph block, in name order.
inline std::string scene_to_dot(const Scene& S)
{
    std::string out;
    for (const auto& [name, T] : S.trees)
        if (auto F = std::dynamic_pointer_cast<const FiniteEdgeTree>(T)) out += to_dot(*F, name);
    if (S.dual) {
        const GraphOfActions& G = S.dual->graph();
        out += "graph graph_of_actions {\n";
        for (std::size_t v = 0; v < G.vertex_count(); ++v) out += "  \"" + G.name(static_cast<int>(v)) + "\";\n";
        for (const auto& e : G.edges()) out += "  \"" + G.name(e.u) + "\" -- \"" + G.name(e.v) + "\";\n";
        out += "}\n";
    }
    return out;
}

}  // namespace lambdatree
