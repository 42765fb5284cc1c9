#pragma once

// Runtime coordination: environment characterization, safe replanning,
// resolver assignment, and stack-based task replanning around per-agent
// synthesized controllers.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetsynth/synthesis.hpp"
#include "hetsynth/world.hpp"

namespace hetsynth {

/// No resolution chain can proceed. `cause` is a short token such as
/// `no-capable-agent` or `unrealizable`; `subject` names the obstacle or agent.
class MissionStuck : public std::runtime_error {
public:
    MissionStuck(std::string cause, std::string subject, const std::string& message)
        : std::runtime_error(message), cause_(std::move(cause)), subject_(std::move(subject))
    {
    }
    const std::string& cause() const { return cause_; }
    const std::string& subject() const { return subject_; }

private:
    std::string cause_;
    std::string subject_;
};

struct ViolationReport {
    std::string agent;
    std::string obstacle;
    std::string action;                       // c_r
    std::vector<RegionId> resolution_states;  // S_r
    Pose pose;                                // where the agent was when it observed the obstacle
    RegionId commanded = 0;                   // region the controller tried to enter
    bool first_detection = true;              // false when the obstacle was already known
};

/// Checks a commanded pose against the actual world. On a violation the
/// obstacle is marked detected and a report is returned.
std::optional<ViolationReport> characterize(WorldModel& world, std::string_view agent, const Pose& commanded);

/// Team objective map: agent id -> patrol parameters.
using ObjectiveMap = std::map<std::string, PatrolParams, std::less<>>;

class ObjectiveStack {
public:
    void push(ObjectiveMap m) { frames_.push_back(std::move(m)); }
    ObjectiveMap pop();  // throws std::logic_error when empty
    const ObjectiveMap& top() const;
    std::size_t depth() const { return frames_.size(); }
    bool empty() const { return frames_.empty(); }

private:
    std::vector<ObjectiveMap> frames_;
};

struct Assignment {
    std::string requester;
    std::string helper;
    std::string obstacle;
    RegionId target = 0;  // element of S_r the helper must reach
    RegionId anchor = 0;  // retained patrol point of the helper
};

/// First roster agent holding c_r. Target is the obstacle's override if set,
/// else the element of S_r nearest the helper (Manhattan, lowest id on ties).
/// Empty when no agent is capable.
std::optional<Assignment> assign_resolver(const WorldModel& world, const ViolationReport& report);

enum class EventKind { Move, Detect, PushStack, Assign, Resynthesize, Resolve, PopStack, GoalVisit, Stuck };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

struct TraceEvent {
    std::size_t step = 0;
    EventKind kind = EventKind::Move;
    std::vector<std::pair<std::string, std::string>> fields;  // emission order

    /// Value of `key`, or empty when absent.
    std::string get(std::string_view key) const;
    int get_int(std::string_view key) const;  // throws std::invalid_argument when absent
    bool operator==(const TraceEvent&) const = default;
};

struct AgentRuntime {
    std::string id;
    PatrolParams objective;
    std::optional<ControllerFsm> fsm;
    std::size_t node = 0;
    std::size_t next_goal = 0;  // goal index expected next in the current cycle
    std::size_t cycles = 0;     // full patrol cycles since the last resynthesis
    std::optional<RegionId> last_visit;
};

struct MissionState {
    WorldModel world;
    std::vector<AgentRuntime> agents;  // roster order
    ObjectiveStack stack;
    std::vector<Assignment> assignments;  // parallel to the stack frames
    std::vector<TraceEvent> trace;
    std::size_t resyntheses = 0;  // synthesis rounds after the initial one
    std::size_t step = 0;
    SynthesisOptions synthesis;

    AgentRuntime& runtime(std::string_view id);
    const AgentRuntime& runtime(std::string_view id) const;
    ObjectiveMap objectives() const;
    void emit(EventKind kind, std::vector<std::pair<std::string, std::string>> fields);
};

/// Initial synthesis for every agent against the synthesis view.
/// Throws MissionStuck when some agent's objective is unrealizable.
MissionState start_mission(WorldModel world, SynthesisOptions options = {});

/// Synthesizes controllers for `ids` with their current objectives. Emits a
/// single resynthesize event and bumps the counter. Throws MissionStuck.
void resynthesize(MissionState& m, const std::vector<std::string>& ids);

/// Keeps the reporting agent in place. The controller node is left at its
/// pre-command value. Returns the interim pose, or nothing without a report.
std::optional<Pose> replan_safe(MissionState& m, const ViolationReport* report);

/// Pushes the team objectives, parks the requester, sends the helper to the
/// resolution state, and resynthesizes both. Throws MissionStuck.
void task_replan(MissionState& m, const ViolationReport& report, const Assignment& assignment);

/// Pops the objective stack, restores every agent's objective from it, and
/// resynthesizes all agents. Throws MissionStuck.
void on_resolved(MissionState& m, std::string_view obstacle);

enum class MissionStatus { Success, StepLimit, Stuck };

std::string_view to_string(MissionStatus s);

struct MissionOptions {
    std::size_t max_steps = 2000;
    std::size_t success_cycles = 2;
    SynthesisOptions synthesis;
    std::function<void(const MissionState&)> on_round;  // called after the initial state and each round
};

struct MissionResult {
    MissionStatus status = MissionStatus::StepLimit;
    std::string reason;  // populated when stuck
    std::vector<TraceEvent> trace;
    std::size_t rounds = 0;
    std::size_t resyntheses = 0;
    std::size_t max_stack_depth = 0;
    WorldModel final_world;
};

/// Lockstep rounds in roster order until success, the step limit, or a
/// point where no resolution chain can proceed.
MissionResult run_mission(const WorldModel& world, const MissionOptions& options = {});

}  // namespace hetsynth
