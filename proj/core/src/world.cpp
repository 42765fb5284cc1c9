#include "hetsynth/world.hpp"

#include <algorithm>
#include <cstdlib>

namespace hetsynth {

RegionId region_index(int row, int col, const Grid& grid)
{
    if (row < 0 || row >= grid.rows || col < 0 || col >= grid.cols) {
        throw WorldError("cell (" + std::to_string(row) + ", " + std::to_string(col) + ") is outside the " +
                         std::to_string(grid.rows) + "x" + std::to_string(grid.cols) + " grid");
    }
    return row * grid.cols + col;
}

std::pair<int, int> region_coords(RegionId region, const Grid& grid)
{
    if (!grid.contains(region)) throw WorldError("region " + std::to_string(region) + " is outside the grid");
    return {region / grid.cols, region % grid.cols};
}

int manhattan(RegionId a, RegionId b, const Grid& grid)
{
    const auto [ra, ca] = region_coords(a, grid);
    const auto [rb, cb] = region_coords(b, grid);
    return std::abs(ra - rb) + std::abs(ca - cb);
}

char heading_letter(Heading h)
{
    static constexpr char letters[] = {'N', 'E', 'S', 'W'};
    return letters[static_cast<int>(h)];
}

std::optional<Heading> parse_heading(std::string_view s)
{
    if (s == "N") return Heading::N;
    if (s == "E") return Heading::E;
    if (s == "S") return Heading::S;
    if (s == "W") return Heading::W;
    return std::nullopt;
}

std::optional<RegionId> neighbor(RegionId r, Heading h, const Grid& grid)
{
    auto [row, col] = region_coords(r, grid);
    switch (h) {
    case Heading::N: --row; break;
    case Heading::E: ++col; break;
    case Heading::S: ++row; break;
    case Heading::W: --col; break;
    }
    if (row < 0 || row >= grid.rows || col < 0 || col >= grid.cols) return std::nullopt;
    return row * grid.cols + col;
}

std::string_view to_string(Mobility m) { return m == Mobility::Ground ? "ground" : "aerial"; }

std::optional<Mobility> parse_mobility(std::string_view s)
{
    if (s == "ground") return Mobility::Ground;
    if (s == "aerial") return Mobility::Aerial;
    return std::nullopt;
}

std::string_view to_string(ObstacleKind k) { return k == ObstacleKind::Door ? "door" : "uncertainty"; }

std::string_view to_string(ObstacleStatus s)
{
    switch (s) {
    case ObstacleStatus::Latent: return "latent";
    case ObstacleStatus::Detected: return "detected";
    case ObstacleStatus::Resolved: return "resolved";
    }
    return "?";
}

const AgentSpec& WorldModel::agent(std::string_view id) const
{
    for (const auto& a : agents) {
        if (a.id == id) return a;
    }
    throw WorldError("unknown agent '" + std::string(id) + "'");
}

const Pose& WorldModel::pose(std::string_view id) const
{
    auto it = poses.find(std::string(id));
    if (it == poses.end()) throw WorldError("unknown agent '" + std::string(id) + "'");
    return it->second;
}

const ResolvableObstacle& WorldModel::obstacle(std::string_view id) const
{
    for (const auto& r : resolvables) {
        if (r.id == id) return r;
    }
    throw WorldError("unknown obstacle '" + std::string(id) + "'");
}

ResolvableObstacle& WorldModel::obstacle(std::string_view id)
{
    return const_cast<ResolvableObstacle&>(std::as_const(*this).obstacle(id));
}

WorldModel make_world(Grid grid, std::vector<std::string> actions, std::set<RegionId> static_obstacles,
                      std::vector<ResolvableObstacle> resolvables, std::vector<AgentSpec> agents)
{
    WorldModel w{grid, std::move(actions), std::move(static_obstacles), std::move(resolvables), std::move(agents), {}};
    for (const auto& a : w.agents) {
        if (!grid.contains(a.start.region)) throw WorldError("agent '" + a.id + "' starts outside the grid");
        if (w.static_obstacles.count(a.start.region)) throw WorldError("agent '" + a.id + "' starts inside an obstacle");
        if ((a.mobility == Mobility::Ground) != a.start.heading.has_value()) {
            throw WorldError("agent '" + a.id + "' has a heading inconsistent with its mobility");
        }
        if (!w.poses.emplace(a.id, a.start).second) throw WorldError("duplicate agent '" + a.id + "'");
    }
    return w;
}

const ResolvableObstacle* blocking_obstacle(const WorldModel& world, RegionId region, Mobility mobility, View view)
{
    for (const auto& r : world.resolvables) {
        if (r.location != region || r.status == ObstacleStatus::Resolved) continue;
        if (view == View::Synthesis && r.status == ObstacleStatus::Latent) continue;
        if (r.blocks.count(mobility)) return &r;
    }
    return nullptr;
}

bool is_blocked(const WorldModel& world, RegionId region, Mobility mobility, View view)
{
    return world.static_obstacles.count(region) != 0 || blocking_obstacle(world, region, mobility, view) != nullptr;
}

std::vector<Successor> successors(const Pose& pose, Mobility mobility, const WorldModel& world, View view)
{
    std::vector<Successor> out;
    auto free = [&](std::optional<RegionId> r) { return r && !is_blocked(world, *r, mobility, view); };
    if (mobility == Mobility::Aerial) {
        out.push_back({"hover", Pose{pose.region, std::nullopt}});
        for (Heading h : {Heading::N, Heading::E, Heading::S, Heading::W}) {
            const auto n = neighbor(pose.region, h, world.grid);
            if (free(n)) out.push_back({std::string(1, heading_letter(h)), Pose{*n, std::nullopt}});
        }
        return out;
    }
    const Heading h = pose.heading.value_or(Heading::N);
    out.push_back({"stay", pose});
    out.push_back({"turn-left", Pose{pose.region, turn_left(h)}});
    out.push_back({"turn-right", Pose{pose.region, turn_right(h)}});
    const auto n = neighbor(pose.region, h, world.grid);
    if (free(n)) out.push_back({"forward", Pose{*n, h}});
    return out;
}

std::string move_name(const Pose& from, const Pose& to, Mobility mobility, const Grid& grid)
{
    if (mobility == Mobility::Aerial) {
        if (from.region == to.region) return "hover";
        for (Heading h : {Heading::N, Heading::E, Heading::S, Heading::W}) {
            if (neighbor(from.region, h, grid) == to.region) return std::string(1, heading_letter(h));
        }
        return {};
    }
    const Heading h = from.heading.value_or(Heading::N);
    const Heading g = to.heading.value_or(h);
    if (from.region == to.region) {
        if (g == h) return "stay";
        if (g == turn_left(h)) return "turn-left";
        if (g == turn_right(h)) return "turn-right";
        return {};
    }
    if (g == h && neighbor(from.region, h, grid) == to.region) return "forward";
    return {};
}

namespace {

Formula disjunction(const std::vector<Formula>& fs)
{
    if (fs.empty()) return Formula::constant(false);
    Formula out = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) out = out | fs[i];
    return out;
}

}  // namespace

Gr1Spec spec_for_agent(const WorldModel& world, std::string_view agent_id, View view, const PatrolParams& objective)
{
    const AgentSpec& agent = world.agent(agent_id);
    const Pose& cur = world.pose(agent_id);
    const Grid& grid = world.grid;
    if (!grid.contains(objective.a) || !grid.contains(objective.b)) {
        throw WorldError("objective for '" + agent.id + "' references a region outside the grid");
    }
    const bool ground = agent.mobility == Mobility::Ground;
    const std::string pos = position_var(agent.id);
    const std::string heading = heading_var(agent.id);

    Gr1Spec spec;
    spec.variables.push_back(VarDecl::integer(pos, grid.size() - 1, VarOwner::Output));
    if (ground) spec.variables.push_back(VarDecl::integer(heading, 3, VarOwner::Output));
    spec.variables.push_back(VarDecl::boolean(scout_var(agent.id), VarOwner::Output));

    const ObjectiveFragment frag = patrol(agent.id, objective.a, objective.b);

    spec.sys_init.push_back(var_equals(pos, cur.region));
    if (ground) spec.sys_init.push_back(var_equals(heading, static_cast<int>(cur.heading.value_or(Heading::N))));
    spec.sys_init.insert(spec.sys_init.end(), frag.init.begin(), frag.init.end());

    auto pose_next = [&](const Pose& p) {
        Formula f = var_equals(pos, p.region, true);
        if (ground) f = f & var_equals(heading, static_cast<int>(*p.heading), true);
        return f;
    };

    for (RegionId s = 0; s < grid.size(); ++s) {
        if (is_blocked(world, s, agent.mobility, view)) continue;
        if (ground) {
            for (Heading h : {Heading::N, Heading::E, Heading::S, Heading::W}) {
                std::vector<Formula> options;
                for (const auto& m : successors(Pose{s, h}, agent.mobility, world, view)) options.push_back(pose_next(m.pose));
                spec.sys_trans.push_back(Formula::implies(
                    var_equals(pos, s) & var_equals(heading, static_cast<int>(h)), disjunction(options)));
            }
        } else {
            std::vector<Formula> options;
            for (const auto& m : successors(Pose{s, std::nullopt}, agent.mobility, world, view)) {
                options.push_back(pose_next(m.pose));
            }
            spec.sys_trans.push_back(Formula::implies(var_equals(pos, s), disjunction(options)));
        }
    }
    for (RegionId s = 0; s < grid.size(); ++s) {
        if (is_blocked(world, s, agent.mobility, view)) spec.sys_trans.push_back(!var_equals(pos, s, true));
    }
    spec.sys_trans.insert(spec.sys_trans.end(), frag.safety.begin(), frag.safety.end());
    spec.sys_liveness = frag.liveness;
    spec.env_liveness.push_back(Formula::constant(true));
    return spec;
}

ResolutionOutcome apply_resolution(WorldModel& world, std::string_view obstacle_id, std::string_view agent_id,
                                   const Pose& pose)
{
    ResolvableObstacle& r = world.obstacle(obstacle_id);
    const bool traversable = r.kind == ObstacleKind::Door || r.hidden_traversable;
    if (r.status == ObstacleStatus::Resolved) return ResolutionOutcome{false, traversable};

    const AgentSpec& agent = world.agent(agent_id);
    if (!agent.can(r.required_action)) {
        throw IncapableAgent("agent '" + agent.id + "' cannot " + r.required_action + " obstacle '" + r.id + "'");
    }
    if (std::find(r.resolution_states.begin(), r.resolution_states.end(), pose.region) == r.resolution_states.end()) {
        throw WrongLocation("region " + std::to_string(pose.region) + " is not a resolution state of '" + r.id + "'");
    }
    r.status = ObstacleStatus::Resolved;
    if (!traversable) world.static_obstacles.insert(r.location);
    return ResolutionOutcome{true, traversable};
}

}  // namespace hetsynth
