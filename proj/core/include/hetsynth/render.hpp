#pragma once

#include <string>

#include "hetsynth/world.hpp"

namespace hetsynth {

/// One line per grid row. `.` free, `#` obstacle, agents by the uppercased
/// first letter of their id (`+` when several share a region), `d` unresolved
/// door, `?` unresolved uncertainty, `o` resolved obstacle.
std::string render_ascii(const WorldModel& world);

}  // namespace hetsynth
