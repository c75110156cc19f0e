#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

#include "cli.hpp"
#include "fixtures.hpp"
#include "misalign/scenario_io.hpp"

using namespace misalign;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    static const auto root = [] {
        std::random_device rd;
        auto dir = fs::temp_directory_path() / ("misalign-cli-" + std::to_string(rd()));
        fs::create_directories(dir);
        return dir;
    }();
    return root / name;
}

std::string slurp(const fs::path& path) { return read_text_file(path.string()); }

void write(const fs::path& path, const std::string& text)
{
    std::ofstream(path, std::ios::binary) << text;
}

const std::string shopping = fixtures::scenario_dir + "/shopping.json";

}  // namespace

TEST_CASE("eval prints a json report")
{
    const auto r = run({"eval", "--scenario", shopping});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"overall\": 0.25688931797422987") != std::string::npos);
    CHECK(r.out.find("\"weighted\": true") != std::string::npos);
}

TEST_CASE("eval csv and unweighted")
{
    const auto csv = run({"eval", "--scenario", shopping, "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("area,score\nfood,", 0) == 0);

    const auto plain = run({"eval", "--scenario", shopping, "--unweighted", "--format", "csv"});
    CHECK(plain.out.find("food,0.1\n") != std::string::npos);
    CHECK(plain.out.find("\"weighted\"") == std::string::npos);
}

TEST_CASE("eval materializes generator scenarios")
{
    const auto r = run({"eval", "--scenario", fixtures::scenario_dir + "/random_population.json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"n_agents\": 50") != std::string::npos);
    CHECK(r.out == run({"eval", "--scenario", fixtures::scenario_dir + "/random_population.json"}).out);
}

TEST_CASE("bound")
{
    const auto r = run({"bound", "--agents", "1000", "--goals", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "max_uniform_misalignment 0.5005005005005005\nasymptotic_bound 0.5\n");
    CHECK(run({"bound", "--agents", "12", "--goals", "3"}).out.rfind("max_uniform_misalignment 0.7272727272727273", 0) == 0);

    const auto bad = run({"bound", "--agents", "1000", "--goals", "3"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("k | n") != std::string::npos);
}

TEST_CASE("validate")
{
    CHECK(run({"validate", "--scenario", shopping}).out == "ok\n");

    std::string text = slurp(shopping);
    text.replace(text.find("\"goal\": 2"), 9, "\"goal\": 7");
    const auto path = scratch("bad_goal.json");
    write(path, text);
    const auto r = run({"validate", "--scenario", path.string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("error: agents[1].stances[0].goal: goal out of range") == 0);

    const auto e = run({"eval", "--scenario", path.string()});
    CHECK(e.code == 1);
    CHECK(e.err.find("agents[1].stances[0].goal") != std::string::npos);
}

TEST_CASE("validate reports warnings without failing")
{
    World w = fixtures::mutex_world(3, {1});
    const auto path = scratch("lonely.json");
    write(path, serialize_scenario(ScenarioDocument{1, w}));
    const auto r = run({"validate", "--scenario", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("warning: ") == 0);
    CHECK(run({"eval", "--scenario", path.string()}).code == 2);
}

TEST_CASE("usage errors")
{
    CHECK(run({"eval", "--scenario", "/nonexistent/file.json"}).code == 2);
    CHECK(run({"eval", "--scenario", shopping, "--colour"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"experiment", "nonsense", "--out", scratch("x").string()}).code == 2);
    const auto r = run({"experiment", "carla", "--goals", "3", "--out", scratch("x").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("--goals does not apply to experiment carla") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("syntax errors in scenario files")
{
    const auto path = scratch("broken.json");
    write(path, "{\n  \"format_version\": 1,\n  oops\n}\n");
    const auto r = run({"eval", "--scenario", path.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("experiment writes csv and metadata")
{
    const auto dir = scratch("dist");
    const auto r = run({"experiment", "goal-distribution", "--goals", "2,3", "--proportions", "0,0.5,1", "--out",
                        dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("experiment=goal-distribution seed=0 runs=1") != std::string::npos);
    const std::string csv = slurp(dir / "goal-distribution.csv");
    CHECK(csv.rfind("experiment,series,x,mean,std,runs\n", 0) == 0);
    CHECK(csv.find("goal-distribution,agents=1000;goals=2,0.5,0.5005005005,0,1\n") != std::string::npos);
    const std::string meta = slurp(dir / "goal-distribution.meta.json");
    CHECK(meta.find("\"seed\": 0") != std::string::npos);
    CHECK(meta.find("threads") == std::string::npos);

    const auto again = scratch("dist2");
    run({"experiment", "goal-distribution", "--goals", "2,3", "--proportions", "0,0.5,1", "--out", again.string()});
    CHECK(slurp(again / "goal-distribution.csv") == csv);
}

TEST_CASE("experiment output does not depend on threads")
{
    const std::vector<std::string> common{"experiment", "conflict-levels", "--seed", "9", "--runs", "12",
                                          "--goals", "2,3", "--configs", "0.2,0.8;1"};
    auto with = [&](const std::string& threads, const std::string& dir) {
        auto args = common;
        args.insert(args.end(), {"--threads", threads, "--out", scratch(dir).string()});
        REQUIRE(run(args).code == 0);
        return slurp(scratch(dir) / "conflict-levels.csv");
    };
    const auto one = with("1", "t1");
    CHECK(one == with("3", "t3"));
    CHECK(one.find("conflicts=0.2|0.8") != std::string::npos);
}

TEST_CASE("thread count falls back to the environment")
{
    ::setenv("MISALIGN_THREADS", "2", 1);
    const auto ok = run({"experiment", "goals", "--agents", "6", "--goals", "2", "--runs", "3", "--out",
                         scratch("env").string()});
    CHECK(ok.code == 0);
    ::setenv("MISALIGN_THREADS", "many", 1);
    const auto bad = run({"experiment", "goals", "--agents", "6", "--goals", "2", "--runs", "3", "--out",
                          scratch("env").string()});
    CHECK(bad.code == 2);
    ::unsetenv("MISALIGN_THREADS");
}

TEST_CASE("generate materializes a spec")
{
    const auto out = scratch("generated.json");
    const auto r = run({"generate", "--spec", fixtures::scenario_dir + "/random_population.json", "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto doc = parse_scenario(slurp(out));
    REQUIRE(doc.is_world());
    CHECK(std::get<World>(doc.content).agent_count() == 50);

    CHECK(run({"generate", "--spec", shopping, "--out", out.string()}).code == 2);
}
