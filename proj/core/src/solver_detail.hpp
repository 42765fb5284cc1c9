#pragma once

#include <vector>

#include "hetsynth/synthesis.hpp"

namespace hetsynth::detail {

/// Iterates of the least fixpoint for one system goal.
struct GoalLayers {
    std::vector<StateSet> y;               // y[0] = empty, y[r] = r-th iterate
    std::vector<std::vector<StateSet>> x;  // x[r-1][i]: greatest fixpoint for env goal i within iterate r
};

StateSet nu_x(const GameGraph& game, const StateSet& start, const StateSet& not_env_goal);
GoalLayers mu_y(const GameGraph& game, const StateSet& z, std::size_t j, bool keep_layers);

}  // namespace hetsynth::detail
