// lambdatree: command-line front end for scenes, certificates and exports.

#include "lambdatree/lambdatree.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace lambdatree;

namespace {

enum Exit { exit_pass = 0, exit_fail = 1, exit_inconclusive = 2, exit_usage = 3 };

struct Outcome
{
    json report;
    int code = exit_pass;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag)
{
    if (flag) return *flag;
    if (const char* env = std::getenv("LAMBDATREE_SEED")) {
        try {
            std::size_t used = 0;
            auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw Error("LAMBDATREE_SEED must be a non-negative integer");
    }
    return 0;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

/// The tree a point query refers to: a named tree, "dual", "action", or the scene default.
std::pair<std::string, const TreeSpace*> pick_tree(const Scene& S, const std::string& name)
{
    if (name.empty()) {
        if (S.dual) return {"dual", S.dual.get()};
        if (S.action) return {"action", &S.action->tree()};
        if (S.trees.size() == 1) return {S.trees.begin()->first, S.trees.begin()->second.get()};
        throw Error("scene has several trees; choose one with --tree");
    }
    if (name == "dual") {
        if (!S.dual) throw Error("scene has no graph block");
        return {name, S.dual.get()};
    }
    if (name == "action") {
        if (!S.action) throw Error("scene has no action");
        return {name, &S.action->tree()};
    }
    return {name, scene_tree(S, name).get()};
}

const GroupAction& need_action(const Scene& S)
{
    if (!S.action) throw Error("scene has no action or construction block");
    return *S.action;
}

Outcome cmd_dist(const std::string& scene, const std::string& tree, const std::string& a, const std::string& b)
{
    Scene S = load_scene_file(scene);
    auto [name, T] = pick_tree(S, tree);
    TreePoint p = parse_point(*T, a, &S), q = parse_point(*T, b, &S);
    return {{{"command", "dist"}, {"tree", name}, {"a", T->describe(p)}, {"b", T->describe(q)},
             {"distance", T->distance(p, q).str()}, {"status", "ok"}}};
}

TreePoint at_point(const Scene& S, const std::string& at)
{
    const GroupAction& G = need_action(S);
    return at.empty() ? G.base_point() : parse_point(G.tree(), at, &S);
}

Outcome cmd_translen(const std::string& scene, const std::string& word, const std::string& at)
{
    Scene S = load_scene_file(scene);
    const GroupAction& G = need_action(S);
    Word w = G.normalize(S.names->parse(word));
    TreePoint x = at_point(S, at);
    return {{{"command", "translen"}, {"word", S.names->format(w)}, {"at", G.tree().describe(x)},
             {"length", translation_length(G, w, x).str()}, {"status", "ok"}}};
}

Outcome cmd_classify(const std::string& scene, const std::string& word, const std::string& at)
{
    Scene S = load_scene_file(scene);
    const GroupAction& G = need_action(S);
    Word w = G.normalize(S.names->parse(word));
    TreePoint x = at_point(S, at);
    auto r = classify(G, w, x);
    return {{{"command", "classify"}, {"word", S.names->format(w)}, {"at", G.tree().describe(x)},
             {"type", type_name(r.type)}, {"length", r.length.str()},
             {"axis_sample", G.tree().describe(r.axis_sample)}, {"midpoint", G.tree().describe(r.midpoint)},
             {"status", "ok"}}};
}

Outcome cmd_certify_free(const std::string& scene, long radius, int hops, std::optional<int> max_diameter,
                         std::size_t samples, std::uint64_t seed, unsigned jobs)
{
    Scene S = load_scene_file(scene);
    if (!S.view) throw Error("certify-free needs an action or construction block");
    FreenessOptions opt;
    opt.max_class_diameter = max_diameter ? max_diameter : S.target_diameter;
    opt.random_samples = samples;
    opt.seed = seed;
    opt.jobs = jobs;
    auto r = freeness_criterion_check(*S.view, radius, hops, opt);
    json vc = json::array();
    for (const auto& [name, v] : r.vertex_checks)
        vc.push_back({{"vertex", name}, {"pass", v.pass}, {"words_checked", v.words_checked},
                      {"failure", v.failure ? json(S.names->format(*v.failure)) : json(nullptr)}});
    json classes = json::array();
    for (const auto& c : r.classes)
        classes.push_back({{"point", c.point}, {"members", c.members}, {"diameter", c.diameter}, {"hops", c.hops},
                           {"exhausted", c.exhausted}});
    json out{{"command", "certify-free"},
             {"radius", radius},
             {"hop_bound", hops},
             {"seed", seed},
             {"samples", samples},
             {"max_class_diameter", opt.max_class_diameter ? json(*opt.max_class_diameter) : json(nullptr)},
             {"status", status_name(r.status)},
             {"witnesses", r.witnesses},
             {"vertex_checks", vc},
             {"ball", {{"pass", r.ball.pass},
                       {"words_checked", r.ball.words_checked},
                       {"trivial_words", r.ball.trivial_words},
                       {"failure", r.ball.failure ? json(S.names->format(*r.ball.failure)) : json(nullptr)}}},
             {"classes", classes},
             {"max_diameter", r.max_diameter},
             {"all_exhausted", r.all_exhausted}};
    int code = r.status == FreenessStatus::pass ? exit_pass
                                                : (r.status == FreenessStatus::fail ? exit_fail : exit_inconclusive);
    return {out, code};
}

std::string letters_name(const Word& w, const std::vector<std::string>& names)
{
    Alphabet A;
    for (const auto& n : names) A.add(n);
    return A.format(w);
}

template <class F>
Outcome run_certificate(const F& K, const FieldBlock& fb, const std::vector<std::string>& names, long R,
                        unsigned jobs)
{
    std::vector<Mat2<F>> gens;
    for (const auto& m : fb.matrices) gens.push_back({K.parse(m[0]), K.parse(m[1]), K.parse(m[2]), K.parse(m[3])});
    auto r = freeness_certificate(K, gens, R, jobs);
    json out{{"command", "certify-bt"}, {"field", K.describe()},   {"radius", R},
             {"generators", names},     {"words_checked", r.words_checked}, {"status", r.pass ? "pass" : "fail"}};
    if (r.failure) {
        out["failure"] = letters_name(*r.failure, names);
        out["failure_trace_valuation"] = r.failure_valuation ? json(r.failure_valuation->str()) : json("infinity");
        out["zero_trace"] = !r.failure_valuation.has_value();
    }
    return {out, r.pass ? exit_pass : exit_fail};
}

Outcome cmd_certify_bt(const std::string& field, const std::string& gens_file, const std::string& scene, long R,
                       unsigned jobs)
{
    FieldBlock fb;
    std::vector<std::string> names;
    json src;
    if (!scene.empty()) {
        Scene S = load_scene_file(scene);
        if (!S.field) throw Error("scene has no field block");
        fb = *S.field;
        src = S.doc.at("field");
    } else {
        if (gens_file.empty()) throw Error("certify-bt needs --gens or --scene");
        src = read_json_file(gens_file);
        json wrapped{{"schema", scene_schema}, {"rank", 1}, {"field", src}};
        if (!src.contains("context")) wrapped["field"]["context"] = field;
        fb = *load_scene(wrapped).field;
    }
    if (!field.empty()) fb.context = field;
    if (src.contains("names")) {
        names = scene_detail::string_list(src.at("names"), "names");
        if (names.size() != fb.matrices.size()) throw Error("one name per matrix is required");
    } else {
        for (std::size_t i = 0; i < fb.matrices.size(); ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    }
    if (fb.context.rfind("p:", 0) == 0) {
        long p = 0;
        try {
            p = std::stol(fb.context.substr(2));
        } catch (const std::exception&) {
            throw Error("malformed field '" + fb.context + "'");
        }
        return run_certificate(PadicField(p), fb, names, R, jobs);
    }
    if (fb.context.rfind("laurent:", 0) == 0) {
        std::vector<std::string> vars;
        std::stringstream ss(fb.context.substr(8));
        std::string v;
        while (std::getline(ss, v, ',')) vars.push_back(v);
        return run_certificate(composite_context(vars), fb, names, R, jobs);
    }
    throw Error("field must be p:<prime> or laurent:<vars>");
}

Outcome cmd_build(const std::string& kind, const std::string& spec, long ball, const std::string& out)
{
    json recipe = read_json_file(spec);
    auto names = std::make_shared<Alphabet>();
    auto b = build_construction(kind, recipe, ball, names);
    json scene{{"schema", scene_schema},
               {"rank", b.action->tree().rank()},
               {"construction", {{"kind", kind}, {"recipe", recipe}, {"ball", ball}, {"summary", b.summary}}}};
    if (!out.empty()) write_file(out, dump_canonical(scene));
    json r{{"command", "build"}, {"kind", kind}, {"ball", ball}, {"summary", b.summary}, {"status", "ok"}};
    if (!out.empty()) r["out"] = out;
    return {r};
}

Outcome cmd_skeleton(const std::string& scene, const std::string& out)
{
    Scene S = load_scene_file(scene);
    if (!S.covering) throw Error("scene has no covering block");
    TreePtr T = scene_tree(S, S.covering->tree);
    auto F = std::dynamic_pointer_cast<const FiniteEdgeTree>(T);
    if (!F) throw Error("coverings are supported on finite trees");
    auto sk = transverse_skeleton(T, S.covering->members, edge_arcs(*F));
    std::string dot = to_dot(*sk.tree);
    json r{{"command", "skeleton"}, {"vertices", sk.tree->vertex_count()}, {"edges", sk.tree->edges().size()},
           {"status", "ok"}};
    if (out.empty()) {
        std::cout << dot;
        return {json(nullptr)};
    }
    write_file(out, dot);
    r["out"] = out;
    return {r};
}

Outcome cmd_kill(const std::string& scene, const std::string& tree, long level, const std::string& out)
{
    Scene S = load_scene_file(scene);
    auto F = std::dynamic_pointer_cast<const FiniteEdgeTree>(scene_tree(S, tree));
    if (!F) throw Error("kill works on finite trees");
    if (level < 1) throw Error("kill level must be positive");
    auto c = contract_edges(*F, static_cast<std::size_t>(level));
    std::vector<std::vector<std::string>> groups(c.tree->vertex_count());
    for (std::size_t v = 0; v < F->vertex_count(); ++v)
        groups[static_cast<std::size_t>(c.vertex_map[v])].push_back(F->vertex_name(static_cast<int>(v)));
    json vertices = json::array(), edges = json::array();
    std::vector<std::string> names;
    for (const auto& g : groups) {
        std::string n;
        for (const auto& x : g) n += (n.empty() ? "" : "+") + x;
        names.push_back(n);
        vertices.push_back(n);
    }
    for (const auto& e : c.tree->edges())
        edges.push_back({names[static_cast<std::size_t>(e.u)], names[static_cast<std::size_t>(e.v)], e.length.str()});
    json killed{{"schema", scene_schema},
                {"rank", level},
                {"trees", json::array({{{"name", tree}, {"kind", "finite"}, {"vertices", vertices}, {"edges", edges}}})}};
    if (!out.empty()) write_file(out, dump_canonical(killed));
    json r{{"command", "kill"}, {"tree", tree}, {"level", level}, {"vertices", vertices}, {"edges", edges},
           {"status", "ok"}};
    if (!out.empty()) r["out"] = out;
    return {r};
}

Outcome cmd_check_axioms(const std::string& scene, std::size_t samples, std::uint64_t seed)
{
    Scene S = load_scene_file(scene);
    std::mt19937_64 rng(seed);
    json results = json::array();
    bool pass = true;
    auto check_tree = [&](const std::string& name, const TreeSpace& T) {
        std::size_t checked = 0;
        json violation = nullptr;
        for (std::size_t i = 0; i < samples; ++i) {
            auto pts = T.sample_points(rng, 4);
            ++checked;
            if (!four_point_check(distance_matrix(T, {pts[0], pts[1], pts[2], pts[3]}))) {
                violation = json::array();
                for (const auto& p : pts) violation.push_back(T.describe(p));
                break;
            }
        }
        pass = pass && violation.is_null();
        results.push_back({{"tree", name}, {"quadruples", checked}, {"pass", violation.is_null()}, {"violation", violation}});
    };
    for (const auto& [name, T] : S.trees) check_tree(name, *T);
    if (S.dual) check_tree("dual", *S.dual);
    if (S.action) check_tree("action", S.action->tree());
    for (const auto& [name, m] : S.metrics) {
        std::size_t n = m.points.size(), checked = 0;
        json violation = nullptr;
        for (std::size_t a = 0; a < n && violation.is_null(); ++a)
            for (std::size_t b = a; b < n && violation.is_null(); ++b)
                for (std::size_t c = b; c < n && violation.is_null(); ++c)
                    for (std::size_t d = c; d < n && violation.is_null(); ++d) {
                        std::array<std::size_t, 4> ix{a, b, c, d};
                        DistanceMatrix dm;
                        for (std::size_t i = 0; i < 4; ++i)
                            for (std::size_t j = 0; j < 4; ++j) dm[i][j] = m.d[ix[i]][ix[j]];
                        ++checked;
                        if (!four_point_check(dm))
                            violation = {m.points[a], m.points[b], m.points[c], m.points[d]};
                    }
        pass = pass && violation.is_null();
        results.push_back({{"tree", name}, {"quadruples", checked}, {"pass", violation.is_null()}, {"violation", violation}});
    }
    return {{{"command", "check-axioms"}, {"seed", seed}, {"samples", samples}, {"trees", results},
             {"status", pass ? "pass" : "fail"}},
            pass ? exit_pass : exit_fail};
}

Outcome cmd_export(const std::string& scene, const std::string& format, const std::string& out)
{
    if (format != "dot" && format != "json") throw Error("unknown export format '" + format + "'");
    Scene S = load_scene_file(scene);
    std::string text = format == "json" ? dump_canonical(S.doc) : scene_to_dot(S);
    if (out.empty()) {
        std::cout << text;
        return {json(nullptr)};
    }
    write_file(out, text);
    return {{{"command", "export"}, {"format", format}, {"out", out}, {"status", "ok"}}};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact computations with Lambda-trees over Q^n"};
    app.require_subcommand(1);
    bool timing = false;
    app.add_flag("--timing", timing, "Add elapsed time to the report");

    std::string scene, tree, a, b, word, at, out, field, gens, format = "json", spec, kind;
    long radius = 4, ball = 4, level = 1;
    int hops = 6;
    std::optional<int> max_diameter;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 8;
    unsigned jobs = 1;

    auto scene_opt = [&](CLI::App* c) { c->add_option("--scene", scene, "Scene file")->required()->check(CLI::ExistingFile); };

    auto* dist = app.add_subcommand("dist", "Distance between two points");
    scene_opt(dist);
    dist->add_option("--tree", tree, "Tree name, dual, or action");
    dist->add_option("--a", a)->required();
    dist->add_option("--b", b)->required();

    auto* translen = app.add_subcommand("translen", "Translation length of a group element");
    scene_opt(translen);
    translen->add_option("--word", word)->required();
    translen->add_option("--at", at, "Reference point (default: base point)");

    auto* cls = app.add_subcommand("classify", "Elliptic or hyperbolic, with an axis point");
    scene_opt(cls);
    cls->add_option("--word", word)->required();
    cls->add_option("--at", at);

    auto* cfree = app.add_subcommand("certify-free", "Sampled freeness criterion on a word ball");
    scene_opt(cfree);
    cfree->add_option("--radius", radius)->check(CLI::NonNegativeNumber);
    cfree->add_option("--hop-bound", hops)->check(CLI::NonNegativeNumber);
    cfree->add_option("--max-diameter", max_diameter);
    cfree->add_option("--samples", samples, "Random sample points");
    cfree->add_option("--seed", seed);
    cfree->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

    auto* cbt = app.add_subcommand("certify-bt", "Trace-valuation certificate for matrix generators");
    cbt->add_option("--field", field, "p:<prime> or laurent:<vars>");
    cbt->add_option("--gens", gens, "Generator file")->check(CLI::ExistingFile);
    cbt->add_option("--scene", scene, "Scene with a field block")->check(CLI::ExistingFile);
    cbt->add_option("--radius", radius)->required()->check(CLI::PositiveNumber);
    cbt->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

    auto* build = app.add_subcommand("build", "Build an amalgam or hnn construction scene");
    build->add_option("kind", kind, "amalgam or hnn")->required()->check(CLI::IsMember({"amalgam", "hnn"}));
    build->add_option("--spec", spec, "Recipe file")->required()->check(CLI::ExistingFile);
    build->add_option("--ball", ball, "Conjugate ball for the branching loci")->check(CLI::NonNegativeNumber);
    build->add_option("--out", out);

    auto* skel = app.add_subcommand("skeleton", "Skeleton of the scene's transverse covering, as DOT");
    scene_opt(skel);
    skel->add_option("--out", out);

    auto* kill = app.add_subcommand("kill", "Kill infinitesimals of a finite tree");
    scene_opt(kill);
    kill->add_option("--tree", tree)->required();
    kill->add_option("--level", level, "Rank of the quotient value group")->required();
    kill->add_option("--out", out);

    auto* axioms = app.add_subcommand("check-axioms", "Four-point condition on sampled quadruples");
    scene_opt(axioms);
    axioms->add_option("--samples", samples);
    axioms->add_option("--seed", seed);

    auto* exp = app.add_subcommand("export", "Canonical JSON or DOT export");
    scene_opt(exp);
    exp->add_option("--format", format);
    exp->add_option("--out", out);

    axioms->callback([&] { samples = axioms->count("--samples") ? samples : 1000; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        if (*dist)
            o = cmd_dist(scene, tree, a, b);
        else if (*translen)
            o = cmd_translen(scene, word, at);
        else if (*cls)
            o = cmd_classify(scene, word, at);
        else if (*cfree)
            o = cmd_certify_free(scene, radius, hops, max_diameter, samples, resolve_seed(seed), jobs);
        else if (*cbt)
            o = cmd_certify_bt(field, gens, scene, radius, jobs);
        else if (*build)
            o = cmd_build(kind, spec, ball, out);
        else if (*skel)
            o = cmd_skeleton(scene, out);
        else if (*kill)
            o = cmd_kill(scene, tree, level, out);
        else if (*axioms)
            o = cmd_check_axioms(scene, samples, resolve_seed(seed));
        else if (*exp)
            o = cmd_export(scene, format, out);
    } catch (const std::exception& e) {
        json err{{"status", "error"}, {"error", e.what()}};
        std::cout << err.dump(2) << "\n";
        return exit_usage;
    }
    if (!o.report.is_null()) {
        if (timing)
            o.report["elapsed_ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        std::cout << o.report.dump(2) << "\n";
    }
    return o.code;
}
