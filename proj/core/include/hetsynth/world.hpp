#pragma once

// Discrete grid world: regions, static and resolvable obstacles,
// heterogeneous agents, and the per-agent GR(1) specification built from it.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetsynth/speclang.hpp"

namespace hetsynth {

using RegionId = int;

class WorldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IncapableAgent : public WorldError {
public:
    using WorldError::WorldError;
};

class WrongLocation : public WorldError {
public:
    using WorldError::WorldError;
};

struct Grid {
    int rows = 7;
    int cols = 13;

    int size() const { return rows * cols; }
    bool contains(RegionId r) const { return r >= 0 && r < size(); }
    bool operator==(const Grid&) const = default;
};

/// Reading-order index: row * cols + col. Throws WorldError when out of bounds.
RegionId region_index(int row, int col, const Grid& grid);
std::pair<int, int> region_coords(RegionId region, const Grid& grid);
int manhattan(RegionId a, RegionId b, const Grid& grid);

enum class Heading { N = 0, E = 1, S = 2, W = 3 };

inline Heading turn_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
inline Heading turn_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }
char heading_letter(Heading h);
std::optional<Heading> parse_heading(std::string_view s);

/// Neighbor one step along `h`, if inside the grid.
std::optional<RegionId> neighbor(RegionId r, Heading h, const Grid& grid);

enum class Mobility { Ground, Aerial };

std::string_view to_string(Mobility m);
std::optional<Mobility> parse_mobility(std::string_view s);

struct Pose {
    RegionId region = 0;
    std::optional<Heading> heading;  // ground agents only

    bool operator==(const Pose&) const = default;
};

struct PatrolParams {
    RegionId a = 0;
    RegionId b = 0;

    bool operator==(const PatrolParams&) const = default;
};

struct AgentSpec {
    std::string id;
    std::set<std::string> capabilities;
    Mobility mobility = Mobility::Ground;
    Pose start;
    PatrolParams objective;
    std::optional<RegionId> anchor;  // retained patrol point when helping; defaults to current region

    bool can(std::string_view action) const { return capabilities.count(std::string(action)) != 0; }
    bool operator==(const AgentSpec&) const = default;
};

enum class ObstacleKind { Door, Uncertainty };
enum class ObstacleStatus { Latent, Detected, Resolved };

std::string_view to_string(ObstacleKind k);
std::string_view to_string(ObstacleStatus s);

struct ResolvableObstacle {
    std::string id;
    ObstacleKind kind = ObstacleKind::Door;
    RegionId location = 0;
    std::vector<RegionId> resolution_states;  // S_r, ascending
    std::string required_action;              // c_r
    std::set<Mobility> blocks;                // mobility classes that cannot enter while unresolved
    bool hidden_traversable = true;           // uncertainty only; revealed by resolution
    std::optional<RegionId> target_override;  // preferred element of S_r for the helper
    bool expect_unresolvable = false;
    ObstacleStatus status = ObstacleStatus::Latent;

    bool operator==(const ResolvableObstacle&) const = default;
};

/// Which knowledge an operation consults. The synthesis view ignores latent
/// resolvables; the actual view sees every unresolved one.
enum class View { Synthesis, Actual };

struct WorldModel {
    Grid grid;
    std::vector<std::string> actions;  // declared capability vocabulary
    std::set<RegionId> static_obstacles;
    std::vector<ResolvableObstacle> resolvables;
    std::vector<AgentSpec> agents;       // roster order
    std::map<std::string, Pose> poses;   // current pose per agent

    const AgentSpec& agent(std::string_view id) const;
    const Pose& pose(std::string_view id) const;
    const ResolvableObstacle& obstacle(std::string_view id) const;
    ResolvableObstacle& obstacle(std::string_view id);

    bool operator==(const WorldModel&) const = default;
};

/// Builds a world with every agent at its start pose.
WorldModel make_world(Grid grid, std::vector<std::string> actions, std::set<RegionId> static_obstacles,
                      std::vector<ResolvableObstacle> resolvables, std::vector<AgentSpec> agents);

/// The unresolved obstacle at `region` that blocks `mobility` in `view`, if any.
const ResolvableObstacle* blocking_obstacle(const WorldModel& world, RegionId region, Mobility mobility, View view);

bool is_blocked(const WorldModel& world, RegionId region, Mobility mobility, View view);

struct Successor {
    std::string action;
    Pose pose;

    bool operator==(const Successor&) const = default;
};

/// One-step moves. Aerial: hover, N, E, S, W. Ground: stay, turn-left,
/// turn-right, forward. Moves into blocked or out-of-grid regions are omitted.
std::vector<Successor> successors(const Pose& pose, Mobility mobility, const WorldModel& world, View view);

/// Name of the move taking `from` to `to`, or empty when no single move does.
std::string move_name(const Pose& from, const Pose& to, Mobility mobility, const Grid& grid);

/// Single-agent specification: mobility over the view, exclusion of every
/// blocked region, the agent's current pose as initial condition, and the
/// patrol objective. No environment inputs.
Gr1Spec spec_for_agent(const WorldModel& world, std::string_view agent, View view, const PatrolParams& objective);

struct ResolutionOutcome {
    bool changed = false;      // false when the obstacle was already resolved
    bool traversable = true;   // door: always; uncertainty: the hidden bit
};

/// Resolves `obstacle` by `agent` standing at `pose`. Throws IncapableAgent
/// when the agent lacks c_r and WrongLocation when pose is outside S_r.
ResolutionOutcome apply_resolution(WorldModel& world, std::string_view obstacle, std::string_view agent,
                                   const Pose& pose);

}  // namespace hetsynth
