#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace lambdatree;

namespace {

struct Run
{
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    std::string cmd = std::string(LAMBDATREE_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string sample(const char* name) { return std::string(LAMBDATREE_SAMPLES) + "/" + name; }

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string temp_path(const char* name)
{
    return (std::filesystem::temp_directory_path() / (std::string("lambdatree_test_") + name)).string();
}

}  // namespace

TEST(Cli, DistSamePointIsZero)
{
    auto r = run("dist --scene " + sample("two_gluing.json") + " --tree dual --a Y2:v --b Y3:x");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(json::parse(r.out)["distance"], "(0,0)");
}

TEST(Cli, DistMatchesCommittedOracleValue)
{
    json fx = json::parse(slurp(std::string(LAMBDATREE_FIXTURES) + "/two_gluing_dist.json"));
    std::string a = fx["a"], b = fx["b"];
    auto r = run("dist --scene " + sample(fx["scene"].get<std::string>().c_str()) + " --tree dual --a " + a + " --b " +
                 b);
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(json::parse(r.out)["distance"], fx["distance"]);

    // The committed value is the nested minimum over gluing candidates.
    Scene S = load_scene_file(sample("two_gluing.json"));
    ASSERT_TRUE(S.dual);
    TreePoint px = parse_point(*S.dual, a, &S), py = parse_point(*S.dual, b, &S);
    const DualPt& x = as_dual(px);
    const DualPt& y = as_dual(py);
    EXPECT_EQ(oracle::eq_min(S.dual->graph(), x, y).str(), fx["distance"]);
}

TEST(Cli, MalformedPointIsAnError)
{
    auto r = run("dist --scene " + sample("two_gluing.json") + " --tree dual --a Y9:q --b Y1:p");
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(json::parse(r.out)["status"], "error");
    auto s = run("dist --scene " + sample("two_gluing.json") + " --tree T1 --a 'p-q@(5,0)' --b p");
    EXPECT_EQ(s.code, 3);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run("").code, 3);
    EXPECT_EQ(run("frobnicate").code, 3);
    EXPECT_EQ(run("dist --scene /nonexistent.json --tree T --a x --b y").code, 3);
}

TEST(Cli, CheckAxioms)
{
    auto ok = run("check-axioms --scene " + sample("two_gluing.json") + " --samples 200");
    EXPECT_EQ(ok.code, 0) << ok.out;
    auto fake = run("check-axioms --scene " + sample("fake_metric.json"));
    EXPECT_EQ(fake.code, 1) << fake.out;
    auto j = json::parse(fake.out);
    EXPECT_EQ(j["status"], "fail");
    bool witness = false;
    for (const auto& t : j["trees"])
        if (!t["violation"].is_null()) witness = t["violation"].size() == 4;
    EXPECT_TRUE(witness);
    auto empty = run("check-axioms --scene " + sample("empty.json"));
    EXPECT_EQ(empty.code, 0) << empty.out;
}

TEST(Cli, CertifyBt)
{
    auto s = run("certify-bt --scene " + sample("schottky.json") + " --radius 4");
    ASSERT_EQ(s.code, 0) << s.out;
    EXPECT_EQ(json::parse(s.out)["words_checked"], 160);
    auto u = run("certify-bt --field p:3 --gens " + sample("unipotent_gens.json") + " --radius 1");
    ASSERT_EQ(u.code, 1) << u.out;
    auto j = json::parse(u.out);
    EXPECT_EQ(j["failure"], "a");
    EXPECT_EQ(j["failure_trace_valuation"], "(0)");
}

TEST(Cli, CertifyFreeRejectsPointChain)
{
    auto r = run("certify-free --scene " + sample("point_chain.json") + " --radius 2 --hop-bound 4");
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_EQ(json::parse(r.out)["status"], "fail");
}

TEST(Cli, TranslenAndClassify)
{
    auto t = run("translen --scene " + sample("cayley.json") + " --word a");
    ASSERT_EQ(t.code, 0) << t.out;
    EXPECT_EQ(json::parse(t.out)["length"], "(0,1)");
    auto c = run("classify --scene " + sample("line_z2.json") + " --word 'c1*c2^-1'");
    ASSERT_EQ(c.code, 0) << c.out;
    auto j = json::parse(c.out);
    EXPECT_EQ(j["type"], "hyperbolic");
    EXPECT_EQ(j["length"], "(1,-1)");
}

TEST(Cli, SkeletonMatchesGoldenDot)
{
    auto r = run("skeleton --scene " + sample("tripod.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(std::string(LAMBDATREE_FIXTURES) + "/tripod_skeleton.dot"));
}

TEST(Cli, KillContractsInfinitesimalEdges)
{
    auto r = run("kill --scene " + sample("two_gluing.json") + " --tree T1 --level 1");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["vertices"], json::array({"p", "q+r"}));
    EXPECT_EQ(j["edges"], json::parse(R"js([["p", "q+r", "(1)"]])js"));
}

TEST(Cli, ExportJsonRoundTripIsIdentity)
{
    std::string a = temp_path("a.json"), b = temp_path("b.json");
    ASSERT_EQ(run("export --scene " + sample("two_gluing.json") + " --format json --out " + a).code, 0);
    ASSERT_EQ(run("export --scene " + a + " --format json --out " + b).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(json::parse(slurp(a)), canonical_json(read_json_file(sample("two_gluing.json"))));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Cli, ExportUnknownFormatIsAnError)
{
    auto r = run("export --scene " + sample("tripod.json") + " --format svg");
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(json::parse(r.out)["status"], "error");
}

TEST(Cli, BuildWritesALoadableScene)
{
    std::string out = temp_path("amalgam_scene.json");
    auto r = run("build amalgam --spec " + sample("amalgam.json") + " --ball 2 --out " + out);
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["summary"]["offset"], "(1/7,0)");
    Scene S = load_scene_file(out);
    ASSERT_TRUE(S.action);
    EXPECT_EQ(S.target_diameter, 2);
    std::filesystem::remove(out);
}

TEST(Cli, RepeatedRunsAreByteIdentical)
{
    for (const std::string& args :
         {"check-axioms --scene " + sample("two_gluing.json") + " --samples 300 --seed 7",
          "certify-free --scene " + sample("cayley.json") + " --radius 3 --samples 5 --seed 3",
          "export --scene " + sample("two_gluing.json") + " --format dot"}) {
        auto a = run(args), b = run(args);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << args;
    }
}

TEST(Cli, SeedPrecedence)
{
    std::string base = "check-axioms --scene " + sample("two_gluing.json") + " --samples 10";
    EXPECT_EQ(json::parse(run(base).out)["seed"], 0);
    std::string env = "LAMBDATREE_SEED=9 ";
    auto with_env = [&](const std::string& args) {
        std::string cmd = env + LAMBDATREE_CLI + " " + args;
        std::string out;
        FILE* p = popen(cmd.c_str(), "r");
        if (!p) return out;
        char buf[4096];
        std::size_t n;
        while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
        pclose(p);
        return out;
    };
    EXPECT_EQ(json::parse(with_env(base))["seed"], 9);
    EXPECT_EQ(json::parse(with_env(base + " --seed 4"))["seed"], 4);
}
