#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hetsynth/render.hpp"
#include "hetsynth/scenario.hpp"
#include "hetsynth/trace_io.hpp"

using namespace hetsynth;

namespace {

const std::string scenario_dir = HETSYNTH_SCENARIO_DIR;
const std::string golden_dir = HETSYNTH_GOLDEN_DIR;

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string constraint_of(const std::string& text)
{
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.constraint();
    }
    return "accepted";
}

const std::string base = "scenario v1\nname t\ngrid 7 13\nactions push sense lift\nobstacle-column 8 except 47\n"
                         "agent quad mobility=aerial caps=sense start=20 patrol=20,24\n"
                         "agent Digit mobility=ground caps=push start=28 heading=E patrol=28,54\n";

}  // namespace

TEST_CASE("shipped door scenario loads")
{
    const Scenario sc = load_scenario(scenario_dir + "/case1.scn");
    CHECK(sc.name == "case1");
    CHECK(sc.world.grid == Grid{7, 13});
    REQUIRE(sc.world.agents.size() == 2);
    CHECK(sc.world.agents[0].id == "quad");
    CHECK(sc.world.agents[1].id == "Digit");
    REQUIRE(sc.world.resolvables.size() == 1);
    CHECK(sc.world.resolvables[0].kind == ObstacleKind::Door);
    CHECK(sc.world.resolvables[0].location == 47);
    CHECK(sc.world.static_obstacles.size() == 6);
    CHECK(sc.cycles == 2);
    CHECK(sc.digest == fnv1a64(slurp(scenario_dir + "/case1.scn")));
}

TEST_CASE("fnv1a64 reference values")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("every shipped scenario validates")
{
    for (const char* name : {"case1", "case2", "case3", "stuck"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_scenario(scenario_dir + "/" + name + ".scn"));
    }
}

TEST_CASE("scenario validation names the violated constraint")
{
    CHECK(constraint_of(base) == "accepted");
    CHECK(constraint_of(base + "resolvable door kind=door at=47 action=push blocks=aerial\n") == "accepted");
    CHECK(constraint_of(base + "resolvable u kind=uncertainty at=47 action=sense states=34,46 blocks=ground\n") ==
          "resolution-states-disjoint-from-obstacles");
    CHECK(constraint_of(base + "resolvable h kind=door at=47 action=lift blocks=ground\n") == "capability-coverage");
    CHECK(constraint_of(base + "resolvable h kind=door at=47 action=lift blocks=ground expect-unresolvable\n") ==
          "accepted");
    CHECK(constraint_of(base + "resolvable d kind=door at=47 action=push states=46 blocks=aerial\n") ==
          "door-resolution-state");
    CHECK(constraint_of(base + "resolvable u kind=uncertainty at=47 action=sense states=20 blocks=ground\n") ==
          "uncertainty-neighborhood");
    CHECK(constraint_of(base + "resolvable d kind=door at=8 action=push blocks=aerial\n") == "resolvable-location-free");
    CHECK(constraint_of(base + "resolvable d kind=door at=47 action=push blocks=aerial traversable=false\n") ==
          "traversable-uncertainty-only");
    CHECK(constraint_of(base + "resolvable u kind=uncertainty at=47 action=sense blocks=ground target=20\n") ==
          "target-in-resolution-states");
    CHECK(constraint_of(base + "agent x mobility=aerial caps=sense start=99 patrol=1,2\n") == "grid-bounds");
    CHECK(constraint_of(base + "agent x mobility=aerial caps=sense start=8 patrol=1,2\n") == "start-outside-obstacles");
    CHECK(constraint_of(base + "agent x mobility=aerial caps=sense start=1 patrol=1,21\n") == "patrol-outside-obstacles");
    CHECK(constraint_of(base + "agent x mobility=aerial caps=sense start=1 heading=N patrol=1,2\n") == "heading-mobility");
    CHECK(constraint_of(base + "agent x mobility=ground caps=sense start=1 patrol=1,2\n") == "heading-mobility");
    CHECK(constraint_of(base + "agent x mobility=aerial caps=fly start=1 patrol=1,2\n") == "capability-vocabulary");
    CHECK(constraint_of(base + "agent quad mobility=aerial caps=sense start=1 patrol=1,2\n") == "unique-ids");
    CHECK(constraint_of("scenario v1\nname t\ngrid 7 13\nactions push\n") == "nonempty-roster");
    CHECK(constraint_of(base + "bogus line\n") == "syntax");
    CHECK(constraint_of("scenario v2\n") == "syntax");
}

TEST_CASE("scenario errors carry line numbers")
{
    try {
        parse_scenario(base + "agent x mobility=hover caps=sense start=1 patrol=1,2\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 8);
    }
    try {
        load_scenario("/nonexistent/nowhere.scn");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.constraint() == "io");
    }
}

TEST_CASE("uncertainty defaults to its free neighbors")
{
    const Scenario sc = parse_scenario(base + "resolvable u kind=uncertainty at=47 action=sense target=west\n");
    const auto& u = sc.world.obstacle("u");
    CHECK(u.resolution_states == std::vector<RegionId>{46, 48});
    CHECK(u.target_override == 46);
    CHECK(u.blocks == std::set<Mobility>{Mobility::Ground});
    CHECK(u.required_action == "sense");
}

TEST_CASE("ascii rendering")
{
    SUBCASE("empty grid")
    {
        AgentSpec a;
        a.id = "zed";
        a.mobility = Mobility::Aerial;
        a.start = Pose{3, std::nullopt};
        a.objective = {3, 3};
        WorldModel w = make_world(Grid{2, 2}, {}, {}, {}, {a});
        w.agents.clear();
        w.poses.clear();
        CHECK(render_ascii(w) == "..\n..\n");
        const WorldModel with_agent = make_world(Grid{2, 2}, {}, {}, {}, {a});
        CHECK(render_ascii(with_agent) == "..\n.Z\n");
    }
    SUBCASE("door scenario frames")
    {
        Scenario sc = load_scenario(scenario_dir + "/case1.scn");
        const std::string frame = render_ascii(sc.world);
        std::vector<std::string> rows;
        std::istringstream in(frame);
        for (std::string line; std::getline(in, line);) rows.push_back(line);
        REQUIRE(rows.size() == 7);
        for (const auto& r : rows) CHECK(r.size() == 13);
        CHECK(rows[3][8] == 'd');
        CHECK(rows[0][8] == '#');
        CHECK(rows[1][7] == 'Q');
        CHECK(rows[2][2] == 'D');
        sc.world.obstacle("door").status = ObstacleStatus::Resolved;
        CHECK(render_ascii(sc.world).substr(3 * 14 + 8, 1) == "o");
        sc.world.poses["quad"] = sc.world.poses["Digit"];
        CHECK(render_ascii(sc.world)[2 * 14 + 2] == '+');
    }
}

TEST_CASE("trace text round trip")
{
    const Scenario sc = load_scenario(scenario_dir + "/case1.scn");
    const MissionResult r = run_scenario(sc);
    const TraceFile file{sc.name, sc.digest, r.trace};
    const std::string text = trace_to_string(file);
    std::istringstream in(text);
    const TraceFile back = read_trace(in);
    CHECK(back == file);
    CHECK(trace_to_string(back) == text);
    CHECK(text.rfind("hetsynth-trace 1 scenario=case1 digest=", 0) == 0);

    const TraceEvent e = parse_event("12 resolve agent=Digit obstacle=door at=47 from=47 traversable=true");
    CHECK(e.step == 12);
    CHECK(e.kind == EventKind::Resolve);
    CHECK(e.get_int("at") == 47);
    CHECK(format_event(e) == "12 resolve agent=Digit obstacle=door at=47 from=47 traversable=true");
    CHECK_THROWS_AS(parse_event("x move"), TraceFormatError);
    CHECK_THROWS_AS(parse_event("3 teleport a=1"), TraceFormatError);
    CHECK_THROWS_AS(parse_event("3 move novalue"), TraceFormatError);
    std::istringstream bad("hetsynth-trace 9 scenario=x digest=0000000000000000\n");
    CHECK_THROWS_AS(read_trace(bad), TraceFormatError);
}

TEST_CASE("missions are deterministic and match the golden traces")
{
    for (const char* name : {"case1", "case2", "case3"}) {
        CAPTURE(name);
        const Scenario sc = load_scenario(scenario_dir + "/" + name + ".scn");
        const std::string a = trace_to_string({sc.name, sc.digest, run_scenario(sc).trace});
        const std::string b = trace_to_string({sc.name, sc.digest, run_scenario(sc).trace});
        CHECK(a == b);
        CHECK(a == slurp(golden_dir + "/" + name + ".trc"));
    }
}
