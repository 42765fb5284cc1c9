#pragma once

// Scenario files: a line-oriented description of grid, obstacles, agents and
// resolvable obstacles, validated at load time.
//
//   scenario v1
//   name case1
//   grid 7 13
//   actions push sense
//   obstacles 5 6                       # explicit static obstacle regions
//   obstacle-column 8 except 47         # whole column, minus openings
//   agent quad mobility=aerial caps=sense start=20 patrol=20,24 [anchor=20]
//   agent Digit mobility=ground caps=push start=28 heading=E patrol=28,54
//   resolvable door1 kind=door at=47 action=push blocks=aerial
//   resolvable unc1 kind=uncertainty at=34 action=sense blocks=ground traversable=false target=west
//   cycles 2
//   max-steps 2000
//
// Optional resolvable keys: states=<ids> (defaults: the door's own region, or
// the free 4-neighbors of an uncertainty) and the flag expect-unresolvable.
// `#` starts a comment.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hetsynth/coordination.hpp"
#include "hetsynth/world.hpp"

namespace hetsynth {

/// Load failure naming the violated constraint (e.g. `syntax`,
/// `resolution-states-disjoint-from-obstacles`, `capability-coverage`).
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string constraint, int line, const std::string& message);
    const std::string& constraint() const { return constraint_; }
    int line() const { return line_; }  // 0 when not tied to a line

private:
    std::string constraint_;
    int line_;
};

struct Scenario {
    std::string name;
    WorldModel world;
    std::size_t cycles = 2;
    std::size_t max_steps = 2000;
    std::uint64_t digest = 0;  // FNV-1a of the source text
};

std::uint64_t fnv1a64(std::string_view bytes);

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Runs the mission described by `scenario`. `max_steps` overrides the file's limit when nonzero.
MissionResult run_scenario(const Scenario& scenario, std::size_t max_steps = 0,
                           std::function<void(const MissionState&)> on_round = {});

}  // namespace hetsynth
