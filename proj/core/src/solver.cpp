#include "hetsynth/synthesis.hpp"
#include "solver_detail.hpp"

namespace hetsynth {
namespace detail {

StateSet nu_x(const GameGraph& game, const StateSet& start, const StateSet& not_env_goal)
{
    StateSet x = StateSet::all(game.state_count());
    while (true) {
        StateSet next = start | (not_env_goal & controllable_pre(game, x));
        if (next == x) return x;
        x = std::move(next);
    }
}

GoalLayers mu_y(const GameGraph& game, const StateSet& z, std::size_t j, bool keep_layers)
{
    const std::size_t n = game.state_count();
    const StateSet goal_and_cpre_z = game.sys_goals()[j] & controllable_pre(game, z);
    std::vector<StateSet> not_env_goals;
    for (const auto& e : game.env_goals()) not_env_goals.push_back(~e);

    GoalLayers out;
    out.y.push_back(StateSet::none(n));
    while (true) {
        const StateSet start = goal_and_cpre_z | controllable_pre(game, out.y.back());
        StateSet y_next = StateSet::none(n);
        std::vector<StateSet> xs;
        for (const auto& neg : not_env_goals) {
            StateSet x = nu_x(game, start, neg);
            y_next |= x;
            if (keep_layers) xs.push_back(std::move(x));
        }
        if (y_next == out.y.back()) break;
        out.y.push_back(std::move(y_next));
        if (keep_layers) out.x.push_back(std::move(xs));
    }
    return out;
}

}  // namespace detail

StateSet gr1_step(const GameGraph& game, const StateSet& z)
{
    StateSet out = StateSet::all(game.state_count());
    for (std::size_t j = 0; j < game.sys_goals().size(); ++j) {
        out &= detail::mu_y(game, z, j, false).y.back();
    }
    return out;
}

Gr1Solution solve_gr1(const GameGraph& game)
{
    const std::size_t n = game.state_count();
    StateSet z = StateSet::all(n);
    while (true) {
        StateSet next = gr1_step(game, z);
        if (next == z) break;
        z = std::move(next);
    }

    Gr1Solution sol;
    sol.winning = z;
    sol.ranks.assign(game.sys_goals().size(), std::vector<std::uint32_t>(n, 0));
    for (std::size_t j = 0; j < game.sys_goals().size(); ++j) {
        const auto layers = detail::mu_y(game, z, j, false);
        for (std::size_t r = layers.y.size() - 1; r >= 1; --r) {
            for (StateId s : layers.y[r].members()) sol.ranks[j][s] = static_cast<std::uint32_t>(r);
        }
    }
    return sol;
}

RealizabilityVerdict check_realizable(const GameGraph& game, const StateSet& winning)
{
    std::vector<bool> covered(game.input_count(), false);
    for (StateId s : (game.initial_states() & winning).members()) covered[game.input_part(s)] = true;
    for (InputId e : game.initial_inputs()) {
        if (!covered[e]) return RealizabilityVerdict{false, game.decode_input(e)};
    }
    return RealizabilityVerdict{true, std::nullopt};
}

}  // namespace hetsynth
