#include "hetsynth/coordination.hpp"

#include <algorithm>
#include <stdexcept>

namespace hetsynth {

std::optional<ViolationReport> characterize(WorldModel& world, std::string_view agent_id, const Pose& commanded)
{
    const AgentSpec& agent = world.agent(agent_id);
    const Pose& cur = world.pose(agent_id);
    if (commanded.region == cur.region) return std::nullopt;
    if (world.static_obstacles.count(commanded.region)) {
        throw std::logic_error("controller of '" + agent.id + "' commanded entry into static obstacle " +
                               std::to_string(commanded.region));
    }
    const ResolvableObstacle* seen = blocking_obstacle(world, commanded.region, agent.mobility, View::Actual);
    if (!seen) return std::nullopt;

    ResolvableObstacle& r = world.obstacle(seen->id);
    ViolationReport report{agent.id, r.id, r.required_action, r.resolution_states, cur, commanded.region,
                           r.status == ObstacleStatus::Latent};
    r.status = ObstacleStatus::Detected;
    return report;
}

ObjectiveMap ObjectiveStack::pop()
{
    if (frames_.empty()) throw std::logic_error("pop on empty objective stack");
    ObjectiveMap m = std::move(frames_.back());
    frames_.pop_back();
    return m;
}

const ObjectiveMap& ObjectiveStack::top() const
{
    if (frames_.empty()) throw std::logic_error("top of empty objective stack");
    return frames_.back();
}

std::optional<Assignment> assign_resolver(const WorldModel& world, const ViolationReport& report)
{
    const ResolvableObstacle& r = world.obstacle(report.obstacle);
    for (const auto& agent : world.agents) {
        if (!agent.can(report.action)) continue;
        const RegionId here = world.pose(agent.id).region;
        RegionId target = 0;
        if (r.target_override) {
            target = *r.target_override;
        } else {
            if (report.resolution_states.empty()) return std::nullopt;
            target = *std::min_element(report.resolution_states.begin(), report.resolution_states.end(),
                                       [&](RegionId a, RegionId b) {
                                           const int da = manhattan(here, a, world.grid);
                                           const int db = manhattan(here, b, world.grid);
                                           return da != db ? da < db : a < b;
                                       });
        }
        return Assignment{report.agent, agent.id, r.id, target, agent.anchor.value_or(here)};
    }
    return std::nullopt;
}

std::string_view to_string(EventKind k)
{
    switch (k) {
    case EventKind::Move: return "move";
    case EventKind::Detect: return "detect";
    case EventKind::PushStack: return "push-stack";
    case EventKind::Assign: return "assign";
    case EventKind::Resynthesize: return "resynthesize";
    case EventKind::Resolve: return "resolve";
    case EventKind::PopStack: return "pop-stack";
    case EventKind::GoalVisit: return "goal-visit";
    case EventKind::Stuck: return "stuck";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s)
{
    for (EventKind k : {EventKind::Move, EventKind::Detect, EventKind::PushStack, EventKind::Assign,
                        EventKind::Resynthesize, EventKind::Resolve, EventKind::PopStack, EventKind::GoalVisit,
                        EventKind::Stuck}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

std::string TraceEvent::get(std::string_view key) const
{
    for (const auto& [k, v] : fields) {
        if (k == key) return v;
    }
    return {};
}

int TraceEvent::get_int(std::string_view key) const
{
    for (const auto& [k, v] : fields) {
        if (k == key) return std::stoi(v);
    }
    throw std::invalid_argument("event has no field '" + std::string(key) + "'");
}

AgentRuntime& MissionState::runtime(std::string_view id)
{
    return const_cast<AgentRuntime&>(std::as_const(*this).runtime(id));
}

const AgentRuntime& MissionState::runtime(std::string_view id) const
{
    for (const auto& a : agents) {
        if (a.id == id) return a;
    }
    throw WorldError("unknown agent '" + std::string(id) + "'");
}

ObjectiveMap MissionState::objectives() const
{
    ObjectiveMap out;
    for (const auto& a : agents) out.emplace(a.id, a.objective);
    return out;
}

void MissionState::emit(EventKind kind, std::vector<std::pair<std::string, std::string>> fields)
{
    trace.push_back(TraceEvent{step, kind, std::move(fields)});
}

namespace {

std::string str(int v) { return std::to_string(v); }

void install_controller(MissionState& m, AgentRuntime& rt)
{
    const Gr1Spec spec = spec_for_agent(m.world, rt.id, View::Synthesis, rt.objective);
    SynthesisResult result = synthesize(spec, m.synthesis);
    if (auto* u = std::get_if<Unrealizable>(&result)) {
        throw MissionStuck("unrealizable", rt.id,
                           "objective of '" + rt.id + "' is unrealizable (witness " + u->witness + ")");
    }
    rt.fsm = std::move(std::get<Realizable>(result).fsm);
    const auto init = rt.fsm->initial_node({});
    if (!init) throw MissionStuck("unrealizable", rt.id, "no initial controller node for '" + rt.id + "'");
    rt.node = *init;
    rt.next_goal = 0;
    rt.cycles = 0;
    rt.last_visit.reset();
}

std::string join(const std::vector<std::string>& ids)
{
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ',';
        out += id;
    }
    return out;
}

Pose pose_from_output(const std::vector<int>& output, Mobility mobility)
{
    Pose p{output.at(0), std::nullopt};
    if (mobility == Mobility::Ground) p.heading = static_cast<Heading>(output.at(1));
    return p;
}

std::vector<std::pair<std::string, std::string>> move_fields(const std::string& id, const std::string& action,
                                                             const Pose& from, const Pose& to)
{
    std::vector<std::pair<std::string, std::string>> f{
        {"agent", id}, {"action", action}, {"from", str(from.region)}, {"to", str(to.region)}};
    if (to.heading) f.emplace_back("heading", std::string(1, heading_letter(*to.heading)));
    return f;
}

void record_goal(MissionState& m, AgentRuntime& rt)
{
    const FsmNode& node = rt.fsm->node(rt.node);
    const RegionId here = m.world.pose(rt.id).region;
    if (!node.goal_reached) {
        rt.last_visit.reset();
        return;
    }
    const std::size_t goals = rt.fsm->goal_count();
    if (goals == 1) {
        // A single goal held in place counts every round but is reported once per arrival.
        ++rt.cycles;
        if (rt.last_visit != here) {
            m.emit(EventKind::GoalVisit, {{"agent", rt.id}, {"goal", "0"}, {"region", str(here)}});
        }
        rt.last_visit = here;
        return;
    }
    m.emit(EventKind::GoalVisit, {{"agent", rt.id}, {"goal", std::to_string(node.memory)}, {"region", str(here)}});
    if (node.memory == rt.next_goal) {
        if (++rt.next_goal == goals) {
            rt.next_goal = 0;
            ++rt.cycles;
        }
    } else {
        rt.next_goal = node.memory == 0 ? 1 : 0;
    }
}

// Resolves the top assignment while its helper stands on the target region.
void try_resolve(MissionState& m)
{
    while (!m.assignments.empty()) {
        const Assignment a = m.assignments.back();
        const Pose& p = m.world.pose(a.helper);
        if (p.region != a.target) return;
        const ResolutionOutcome out = apply_resolution(m.world, a.obstacle, a.helper, p);
        const ResolvableObstacle& r = m.world.obstacle(a.obstacle);
        m.emit(EventKind::Resolve, {{"agent", a.helper},
                                    {"obstacle", a.obstacle},
                                    {"at", str(r.location)},
                                    {"from", str(p.region)},
                                    {"traversable", out.traversable ? "true" : "false"}});
        on_resolved(m, a.obstacle);
    }
}

void agent_turn(MissionState& m, AgentRuntime& rt)
{
    const AgentSpec& spec = m.world.agent(rt.id);
    const Pose cur = m.world.pose(rt.id);
    const FsmStep st = rt.fsm->step(rt.node, {});
    const Pose cmd = pose_from_output(st.output, spec.mobility);

    std::optional<ViolationReport> report = characterize(m.world, rt.id, cmd);
    if (!report) {
        m.world.poses[rt.id] = cmd;
        rt.node = st.node;
        m.emit(EventKind::Move, move_fields(rt.id, move_name(cur, cmd, spec.mobility, m.world.grid), cur, cmd));
        record_goal(m, rt);
        try_resolve(m);
        return;
    }

    m.emit(EventKind::Detect, {{"agent", rt.id},
                               {"obstacle", report->obstacle},
                               {"at", str(report->commanded)},
                               {"from", str(cur.region)},
                               {"action", report->action}});
    replan_safe(m, &*report);
    if (!report->first_detection) {
        // Already reported by someone else: hold here with a controller that knows about it.
        resynthesize(m, {rt.id});
        return;
    }
    const std::optional<Assignment> assignment = assign_resolver(m.world, *report);
    if (!assignment) {
        throw MissionStuck("no-capable-agent", report->obstacle,
                           "no agent can " + report->action + " obstacle '" + report->obstacle + "'");
    }
    task_replan(m, *report, *assignment);
    try_resolve(m);
}

bool mission_complete(const MissionState& m, std::size_t cycles)
{
    if (!m.stack.empty()) return false;
    for (const auto& r : m.world.resolvables) {
        if (r.status == ObstacleStatus::Detected) return false;
    }
    return std::all_of(m.agents.begin(), m.agents.end(), [&](const AgentRuntime& a) { return a.cycles >= cycles; });
}

}  // namespace

MissionState start_mission(WorldModel world, SynthesisOptions options)
{
    MissionState m;
    m.world = std::move(world);
    m.synthesis = options;
    for (const auto& a : m.world.agents) {
        AgentRuntime rt;
        rt.id = a.id;
        rt.objective = a.objective;
        m.agents.push_back(std::move(rt));
    }
    for (auto& rt : m.agents) install_controller(m, rt);
    return m;
}

void resynthesize(MissionState& m, const std::vector<std::string>& ids)
{
    for (const auto& id : ids) install_controller(m, m.runtime(id));
    ++m.resyntheses;
    m.emit(EventKind::Resynthesize, {{"agents", join(ids)}, {"count", std::to_string(m.resyntheses)}});
}

std::optional<Pose> replan_safe(MissionState& m, const ViolationReport* report)
{
    if (!report) return std::nullopt;
    const AgentSpec& spec = m.world.agent(report->agent);
    const Pose cur = m.world.pose(report->agent);
    m.emit(EventKind::Move, move_fields(spec.id, spec.mobility == Mobility::Aerial ? "hover" : "stay", cur, cur));
    return cur;
}

void task_replan(MissionState& m, const ViolationReport& report, const Assignment& a)
{
    m.stack.push(m.objectives());
    m.assignments.push_back(a);
    m.emit(EventKind::PushStack, {{"obstacle", a.obstacle}, {"depth", std::to_string(m.stack.depth())}});
    m.emit(EventKind::Assign, {{"obstacle", a.obstacle},
                               {"action", report.action},
                               {"helper", a.helper},
                               {"requester", a.requester},
                               {"target", str(a.target)},
                               {"anchor", str(a.anchor)}});

    const RegionId here = m.world.pose(a.requester).region;
    m.runtime(a.requester).objective = PatrolParams{here, here};
    m.runtime(a.helper).objective = PatrolParams{a.anchor, a.target};
    std::vector<std::string> ids{a.requester};
    if (a.helper != a.requester) ids.push_back(a.helper);
    resynthesize(m, ids);
}

void on_resolved(MissionState& m, std::string_view obstacle)
{
    const ObjectiveMap restored = m.stack.pop();
    if (!m.assignments.empty()) m.assignments.pop_back();
    m.emit(EventKind::PopStack, {{"obstacle", std::string(obstacle)}, {"depth", std::to_string(m.stack.depth())}});
    std::vector<std::string> ids;
    for (auto& rt : m.agents) {
        if (auto it = restored.find(rt.id); it != restored.end()) rt.objective = it->second;
        ids.push_back(rt.id);
    }
    resynthesize(m, ids);
}

std::string_view to_string(MissionStatus s)
{
    switch (s) {
    case MissionStatus::Success: return "success";
    case MissionStatus::StepLimit: return "step-limit";
    case MissionStatus::Stuck: return "stuck";
    }
    return "?";
}

MissionResult run_mission(const WorldModel& world, const MissionOptions& options)
{
    MissionResult res;
    MissionState m;
    auto stuck = [&](const MissionStuck& e) {
        m.emit(EventKind::Stuck, {{"cause", e.cause()}, {"subject", e.subject()}});
        res.status = MissionStatus::Stuck;
        res.reason = e.what();
    };

    try {
        m = start_mission(world, options.synthesis);
    } catch (const MissionStuck& e) {
        m.world = world;
        stuck(e);
    }
    if (res.status != MissionStatus::Stuck) {
        if (options.on_round) options.on_round(m);
        for (std::size_t round = 1; round <= options.max_steps; ++round) {
            m.step = round;
            try {
                for (auto& rt : m.agents) {
                    agent_turn(m, rt);
                    res.max_stack_depth = std::max(res.max_stack_depth, m.stack.depth());
                }
            } catch (const MissionStuck& e) {
                stuck(e);
            }
            res.rounds = round;
            if (options.on_round) options.on_round(m);
            if (res.status == MissionStatus::Stuck) break;
            if (mission_complete(m, options.success_cycles)) {
                res.status = MissionStatus::Success;
                break;
            }
        }
    }
    res.trace = std::move(m.trace);
    res.resyntheses = m.resyntheses;
    res.final_world = std::move(m.world);
    return res;
}

}  // namespace hetsynth
