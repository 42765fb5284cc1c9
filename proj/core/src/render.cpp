#include "hetsynth/render.hpp"

#include <cctype>
#include <map>

namespace hetsynth {

std::string render_ascii(const WorldModel& world)
{
    const Grid& g = world.grid;
    std::string cells(static_cast<std::size_t>(g.size()), '.');
    for (const auto& r : world.resolvables) {
        if (!g.contains(r.location)) continue;
        char c = 'o';
        if (r.status != ObstacleStatus::Resolved) c = r.kind == ObstacleKind::Door ? 'd' : '?';
        cells[static_cast<std::size_t>(r.location)] = c;
    }
    for (RegionId o : world.static_obstacles) {
        if (g.contains(o)) cells[static_cast<std::size_t>(o)] = '#';
    }
    std::map<RegionId, int> occupancy;
    for (const auto& a : world.agents) {
        auto it = world.poses.find(a.id);
        if (it == world.poses.end() || !g.contains(it->second.region)) continue;
        const RegionId r = it->second.region;
        const char letter = a.id.empty() ? '@' : static_cast<char>(std::toupper(static_cast<unsigned char>(a.id[0])));
        cells[static_cast<std::size_t>(r)] = ++occupancy[r] > 1 ? '+' : letter;
    }

    std::string out;
    out.reserve(cells.size() + static_cast<std::size_t>(g.rows));
    for (int row = 0; row < g.rows; ++row) {
        out.append(cells, static_cast<std::size_t>(row * g.cols), static_cast<std::size_t>(g.cols));
        out += '\n';
    }
    return out;
}

}  // namespace hetsynth
