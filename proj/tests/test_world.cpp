#include <doctest.h>

#include <algorithm>

#include "hetsynth/synthesis.hpp"
#include "hetsynth/world.hpp"

using namespace hetsynth;

namespace {

const Grid grid{};

ResolvableObstacle door_at(RegionId r)
{
    ResolvableObstacle d;
    d.id = "door";
    d.kind = ObstacleKind::Door;
    d.location = r;
    d.resolution_states = {r};
    d.required_action = "push";
    d.blocks = {Mobility::Aerial};
    return d;
}

AgentSpec quad(RegionId start, PatrolParams p)
{
    AgentSpec a;
    a.id = "quad";
    a.capabilities = {"sense"};
    a.mobility = Mobility::Aerial;
    a.start = Pose{start, std::nullopt};
    a.objective = p;
    return a;
}

AgentSpec digit(RegionId start, Heading h, PatrolParams p)
{
    AgentSpec a;
    a.id = "Digit";
    a.capabilities = {"push"};
    a.mobility = Mobility::Ground;
    a.start = Pose{start, h};
    a.objective = p;
    return a;
}

std::set<RegionId> column_wall(int col, std::set<RegionId> openings)
{
    std::set<RegionId> out;
    for (int r = 0; r < grid.rows; ++r) {
        const RegionId id = region_index(r, col, grid);
        if (!openings.count(id)) out.insert(id);
    }
    return out;
}

// Case-1 style layout: wall on column 8 with a door at 47 as the only opening.
WorldModel door_world()
{
    return make_world(grid, {"push", "sense"}, column_wall(8, {47}), {door_at(47)},
                      {quad(20, {20, 24}), digit(28, Heading::E, {28, 54})});
}

std::vector<std::string> actions_of(const std::vector<Successor>& s)
{
    std::vector<std::string> out;
    for (const auto& x : s) out.push_back(x.action);
    return out;
}

bool has_region(const std::vector<Successor>& s, RegionId r)
{
    return std::any_of(s.begin(), s.end(), [&](const Successor& x) { return x.pose.region == r; });
}

}  // namespace

TEST_CASE("region indexing")
{
    CHECK(region_index(0, 0, grid) == 0);
    CHECK(region_index(6, 12, grid) == 90);
    CHECK(region_index(3, 8, grid) == 3 * 13 + 8);
    CHECK(region_index(3, 7, grid) == 3 * 13 + 7);
    CHECK_THROWS_AS(region_index(7, 0, grid), WorldError);
    CHECK_THROWS_AS(region_index(0, -1, grid), WorldError);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) CHECK(region_coords(region_index(r, c, grid), grid) == std::pair{r, c});
    }
    CHECK(manhattan(33, 47, grid) == 2);
    CHECK(manhattan(0, 90, grid) == 6 + 12);
}

TEST_CASE("heading algebra")
{
    CHECK(turn_left(Heading::N) == Heading::W);
    CHECK(turn_right(Heading::W) == Heading::N);
    for (Heading h : {Heading::N, Heading::E, Heading::S, Heading::W}) {
        CHECK(turn_left(turn_right(h)) == h);
        CHECK(parse_heading(std::string(1, heading_letter(h))) == h);
    }
    CHECK(neighbor(0, Heading::N, grid) == std::nullopt);
    CHECK(neighbor(0, Heading::E, grid) == 1);
    CHECK(neighbor(12, Heading::E, grid) == std::nullopt);
    CHECK(neighbor(46, Heading::S, grid) == 59);
}

TEST_CASE("successors")
{
    const WorldModel empty = make_world(grid, {"push"}, {}, {}, {quad(0, {0, 0})});
    SUBCASE("aerial at the corner")
    {
        const auto s = successors(Pose{0, std::nullopt}, Mobility::Aerial, empty, View::Actual);
        REQUIRE(s.size() == 3);
        CHECK(s[0] == Successor{"hover", Pose{0, std::nullopt}});
        CHECK(has_region(s, 1));
        CHECK(has_region(s, 13));
    }
    SUBCASE("ground turns stay in place")
    {
        const auto s = successors(Pose{40, Heading::N}, Mobility::Ground, empty, View::Actual);
        CHECK(actions_of(s) == std::vector<std::string>{"stay", "turn-left", "turn-right", "forward"});
        CHECK(s[1].pose == Pose{40, Heading::W});
        CHECK(s[2].pose == Pose{40, Heading::E});
        CHECK(s[3].pose == Pose{27, Heading::N});
    }
    SUBCASE("no backward move or half turn")
    {
        const auto s = successors(Pose{40, Heading::N}, Mobility::Ground, empty, View::Actual);
        CHECK_FALSE(has_region(s, 53));
        for (const auto& x : s) CHECK(x.pose.heading != Heading::S);
    }
    SUBCASE("latent door is visible only in the actual view")
    {
        WorldModel w = door_world();
        w.obstacle("door").blocks = {Mobility::Ground, Mobility::Aerial};
        const Pose p{46, Heading::E};
        CHECK(has_region(successors(p, Mobility::Ground, w, View::Synthesis), 47));
        CHECK_FALSE(has_region(successors(p, Mobility::Ground, w, View::Actual), 47));
    }
    SUBCASE("mobility classes the obstacle does not block pass")
    {
        const WorldModel w = door_world();
        CHECK(has_region(successors(Pose{46, Heading::E}, Mobility::Ground, w, View::Actual), 47));
        CHECK_FALSE(has_region(successors(Pose{46, std::nullopt}, Mobility::Aerial, w, View::Actual), 47));
        CHECK_FALSE(has_region(successors(Pose{7, std::nullopt}, Mobility::Aerial, w, View::Actual), 8));
    }
}

TEST_CASE("move names")
{
    CHECK(move_name(Pose{0, std::nullopt}, Pose{1, std::nullopt}, Mobility::Aerial, grid) == "E");
    CHECK(move_name(Pose{14, std::nullopt}, Pose{1, std::nullopt}, Mobility::Aerial, grid) == "N");
    CHECK(move_name(Pose{40, Heading::N}, Pose{27, Heading::N}, Mobility::Ground, grid) == "forward");
    CHECK(move_name(Pose{40, Heading::N}, Pose{53, Heading::N}, Mobility::Ground, grid).empty());
}

TEST_CASE("world construction checks")
{
    CHECK_THROWS_AS(make_world(grid, {}, {20}, {}, {quad(20, {20, 24})}), WorldError);
    CHECK_THROWS_AS(make_world(grid, {}, {}, {}, {quad(20, {20, 24}), quad(21, {21, 21})}), WorldError);
    AgentSpec d = digit(28, Heading::E, {28, 54});
    d.start.heading.reset();
    CHECK_THROWS_AS(make_world(grid, {}, {}, {}, {d}), WorldError);
}

TEST_CASE("per-agent specifications")
{
    const WorldModel w = door_world();
    SUBCASE("ground agent in its own room is realizable")
    {
        const Gr1Spec s = spec_for_agent(w, "Digit", View::Synthesis, w.agent("Digit").objective);
        REQUIRE(s.variables.size() == 3);
        CHECK(s.variables[0].name == position_var("Digit"));
        CHECK(s.variables[0].max_value == 90);
        CHECK(s.variables[1].name == heading_var("Digit"));
        CHECK(s.variables[1].max_value == 3);
        CHECK(s.variables[2].name == scout_var("Digit"));
        CHECK(build_game(s).state_count() == 91u * 4u * 2u);
        CHECK(is_realizable(synthesize(s)));
    }
    SUBCASE("aerial agent sees the door only in the actual view")
    {
        const PatrolParams obj = w.agent("quad").objective;
        CHECK(is_realizable(synthesize(spec_for_agent(w, "quad", View::Synthesis, obj))));
        const auto actual = synthesize(spec_for_agent(w, "quad", View::Actual, obj));
        REQUIRE_FALSE(is_realizable(actual));
        CHECK(std::get<Unrealizable>(actual).witness == "{}");
    }
    SUBCASE("degenerate patrol has a single goal")
    {
        const WorldModel open = make_world(grid, {}, {}, {}, {quad(46, {46, 46})});
        const Gr1Spec s = spec_for_agent(open, "quad", View::Actual, PatrolParams{46, 46});
        REQUIRE(s.sys_liveness.size() == 1);
        CHECK(s.sys_liveness[0] == var_equals(position_var("quad"), 46));
        CHECK(is_realizable(synthesize(s)));
    }
    SUBCASE("every obstacle is excluded from the next position")
    {
        const Gr1Spec s = spec_for_agent(w, "quad", View::Actual, w.agent("quad").objective);
        for (RegionId o : w.static_obstacles) {
            CHECK(std::count(s.sys_trans.begin(), s.sys_trans.end(), !var_equals(position_var("quad"), o, true)) == 1);
        }
        CHECK(std::count(s.sys_trans.begin(), s.sys_trans.end(), !var_equals(position_var("quad"), 47, true)) == 1);
    }
}

TEST_CASE("resolution")
{
    SUBCASE("door opened by a capable agent on its region")
    {
        WorldModel w = door_world();
        w.obstacle("door").status = ObstacleStatus::Detected;
        CHECK_THROWS_AS(apply_resolution(w, "door", "quad", Pose{47, std::nullopt}), IncapableAgent);
        CHECK_THROWS_AS(apply_resolution(w, "door", "Digit", Pose{46, Heading::E}), WrongLocation);
        const auto out = apply_resolution(w, "door", "Digit", Pose{47, Heading::E});
        CHECK(out.changed);
        CHECK(out.traversable);
        CHECK(w.obstacle("door").status == ObstacleStatus::Resolved);
        CHECK_FALSE(is_blocked(w, 47, Mobility::Aerial, View::Actual));
        CHECK_FALSE(w.static_obstacles.count(47));

        const WorldModel before = w;
        const auto again = apply_resolution(w, "door", "Digit", Pose{47, Heading::E});
        CHECK_FALSE(again.changed);
        CHECK(w == before);
    }
    SUBCASE("sensing an untraversable uncertainty adds it to the obstacles")
    {
        ResolvableObstacle u;
        u.id = "unc";
        u.kind = ObstacleKind::Uncertainty;
        u.location = 34;
        u.resolution_states = {21, 33, 47};
        u.required_action = "sense";
        u.blocks = {Mobility::Ground};
        u.hidden_traversable = false;
        WorldModel w = make_world(grid, {"push", "sense"}, column_wall(8, {34}), {u},
                                  {quad(28, {28, 54}), digit(20, Heading::S, {20, 37})});
        w.obstacle("unc").status = ObstacleStatus::Detected;
        const auto out = apply_resolution(w, "unc", "quad", Pose{33, std::nullopt});
        CHECK(out.changed);
        CHECK_FALSE(out.traversable);
        CHECK(w.static_obstacles.count(34));
        CHECK(is_blocked(w, 34, Mobility::Aerial, View::Synthesis));
    }
}

TEST_CASE("views agree once every obstacle is resolved")
{
    WorldModel w = door_world();
    ResolvableObstacle u;
    u.id = "unc";
    u.kind = ObstacleKind::Uncertainty;
    u.location = 60;
    u.resolution_states = {59};
    u.required_action = "sense";
    u.blocks = {Mobility::Ground};
    w.resolvables.push_back(u);

    auto blocked = [&](View v) {
        std::set<std::pair<RegionId, int>> out;
        for (RegionId r = 0; r < grid.size(); ++r) {
            for (Mobility m : {Mobility::Ground, Mobility::Aerial}) {
                if (is_blocked(w, r, m, v)) out.insert({r, static_cast<int>(m)});
            }
        }
        return out;
    };
    auto subset = [](const auto& a, const auto& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); };

    CHECK(subset(blocked(View::Synthesis), blocked(View::Actual)));
    CHECK(blocked(View::Synthesis) != blocked(View::Actual));
    w.obstacle("door").status = ObstacleStatus::Detected;
    CHECK(subset(blocked(View::Synthesis), blocked(View::Actual)));
    apply_resolution(w, "door", "Digit", Pose{47, Heading::E});
    w.obstacle("unc").status = ObstacleStatus::Detected;
    apply_resolution(w, "unc", "quad", Pose{59, std::nullopt});
    CHECK(blocked(View::Synthesis) == blocked(View::Actual));
}
