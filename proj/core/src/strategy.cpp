#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <deque>
#include <map>
#include <ostream>
#include <sstream>

#include "hetsynth/synthesis.hpp"
#include "solver_detail.hpp"

namespace hetsynth {
namespace {

// Picks the successor minimizing (rank, state id) among those accepted by `allowed`.
template <typename Pred>
std::optional<StateId> best_successor(const std::vector<StateId>& succ, const std::vector<std::uint32_t>& rank,
                                      Pred allowed)
{
    std::optional<StateId> best;
    for (StateId t : succ) {
        if (!allowed(t)) continue;
        if (!best || rank[t] < rank[*best]) best = t;  // succ is ascending, so ties keep the smaller id
    }
    return best;
}

std::string format_values(const std::vector<VarDecl>& vars, const std::vector<std::size_t>& which,
                          const std::vector<int>& values)
{
    if (which.empty()) return "-";
    std::ostringstream os;
    for (std::size_t k = 0; k < which.size(); ++k) {
        if (k) os << ' ';
        os << vars[which[k]].name << '=' << values[k];
    }
    return os.str();
}

std::vector<std::size_t> indices_of(const std::vector<VarDecl>& vars, VarOwner owner)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        if (vars[k].owner == owner) out.push_back(k);
    }
    return out;
}

}  // namespace

ControllerFsm extract_fsm(const GameGraph& game, const Gr1Solution& solution)
{
    const StateSet& w = solution.winning;
    const std::size_t goals = game.sys_goals().size();

    std::vector<detail::GoalLayers> layers;
    layers.reserve(goals);
    for (std::size_t j = 0; j < goals; ++j) layers.push_back(detail::mu_y(game, w, j, true));

    ControllerFsm fsm;
    fsm.vars_ = game.variables();
    fsm.goal_count_ = goals;
    for (auto k : indices_of(fsm.vars_, VarOwner::Input)) {
        fsm.input_radix_.push_back(static_cast<std::size_t>(fsm.vars_[k].domain_size()));
    }

    std::map<std::pair<StateId, std::size_t>, std::size_t> index;
    std::deque<std::size_t> queue;
    auto intern = [&](StateId s, std::size_t j) {
        auto [it, fresh] = index.emplace(std::make_pair(s, j), fsm.nodes_.size());
        if (fresh) {
            FsmNode n{s, game.decode(s), j, game.sys_goals()[j].contains(s), {}};
            fsm.nodes_.push_back(std::move(n));
            queue.push_back(it->second);
        }
        return it->second;
    };

    // Initial nodes: per env-initial input, the initial winning state of least rank for goal 0.
    const StateSet init_w = game.initial_states() & w;
    for (InputId e : game.initial_inputs()) {
        std::optional<StateId> best;
        for (StateId s : init_w.members()) {
            if (game.input_part(s) != e) continue;
            if (!best || solution.ranks[0][s] < solution.ranks[0][*best]) best = s;
        }
        if (best) fsm.initial_.emplace_back(e, intern(*best, 0));
    }

    while (!queue.empty()) {
        const std::size_t id = queue.front();
        queue.pop_front();
        const StateId s = fsm.nodes_[id].state;
        const std::size_t j = fsm.nodes_[id].memory;
        const auto& rank_j = solution.ranks[j];
        const std::uint32_t r = rank_j[s];
        assert(w.contains(s));

        const auto& moves = game.env_moves(s);
        for (std::size_t k = 0; k < moves.size(); ++k) {
            const auto& succ = game.sys_moves(s, k);
            std::optional<StateId> choice;
            std::size_t next_mem = j;

            if (game.sys_goals()[j].contains(s)) {
                next_mem = (j + 1) % goals;
                choice = best_successor(succ, solution.ranks[next_mem], [&](StateId t) { return w.contains(t); });
            } else {
                assert(r >= 1);
                choice = best_successor(succ, rank_j, [&](StateId t) { return w.contains(t) && rank_j[t] < r; });
                if (!choice) {
                    const auto& xs = layers[j].x[r - 1];
                    for (std::size_t i = 0; i < xs.size() && !choice; ++i) {
                        if (!xs[i].contains(s)) continue;
                        choice = best_successor(succ, rank_j, [&](StateId t) { return xs[i].contains(t); });
                    }
                }
            }
            if (!choice) throw std::logic_error("strategy extraction found no winning successor");
            const std::size_t target = intern(*choice, next_mem);
            fsm.nodes_[id].transitions.push_back(FsmTransition{moves[k], target, game.output_part(*choice)});
        }
    }
    return fsm;
}

std::optional<std::size_t> ControllerFsm::initial_node(std::span<const int> input) const
{
    InputId e = 0;
    for (std::size_t k = 0; k < input_radix_.size(); ++k) e = e * static_cast<InputId>(input_radix_[k]) + input[k];
    for (const auto& [in, node] : initial_) {
        if (in == e) return node;
    }
    return std::nullopt;
}

FsmStep ControllerFsm::step(std::size_t node, std::span<const int> input) const
{
    if (input.size() != input_radix_.size()) throw IllegalEnvMove("input valuation has wrong arity");
    InputId e = 0;
    for (std::size_t k = 0; k < input_radix_.size(); ++k) {
        if (input[k] < 0 || static_cast<std::size_t>(input[k]) >= input_radix_[k]) {
            throw IllegalEnvMove("input value out of domain");
        }
        e = e * static_cast<InputId>(input_radix_[k]) + static_cast<InputId>(input[k]);
    }
    const auto& ts = nodes_.at(node).transitions;
    auto it = std::lower_bound(ts.begin(), ts.end(), e,
                               [](const FsmTransition& t, InputId v) { return t.input < v; });
    if (it == ts.end() || it->input != e) {
        throw IllegalEnvMove("environment move not permitted from node " + std::to_string(node));
    }
    return FsmStep{it->target, it->output};
}

std::vector<std::string> ControllerFsm::input_names() const
{
    std::vector<std::string> out;
    for (const auto& v : vars_) {
        if (v.owner == VarOwner::Input) out.push_back(v.name);
    }
    return out;
}

std::vector<std::string> ControllerFsm::output_names() const
{
    std::vector<std::string> out;
    for (const auto& v : vars_) {
        if (v.owner == VarOwner::Output) out.push_back(v.name);
    }
    return out;
}

FsmStep fsm_step(const ControllerFsm& fsm, std::size_t node, std::span<const int> input)
{
    return fsm.step(node, input);
}

void write_fsm(std::ostream& os, const ControllerFsm& fsm)
{
    const auto& vars = fsm.variables();
    const auto ins = indices_of(vars, VarOwner::Input);
    const auto outs = indices_of(vars, VarOwner::Output);
    std::vector<std::size_t> radix;
    for (auto k : ins) radix.push_back(static_cast<std::size_t>(vars[k].domain_size()));
    auto input_values = [&](InputId e) {
        std::vector<int> v(ins.size());
        for (std::size_t k = ins.size(); k-- > 0;) {
            v[k] = static_cast<int>(e % radix[k]);
            e /= static_cast<InputId>(radix[k]);
        }
        return v;
    };

    os << "fsm nodes=" << fsm.node_count() << " goals=" << fsm.goal_count() << '\n';
    os << "vars";
    for (const auto& v : vars) {
        os << ' ' << v.name << ':' << (v.owner == VarOwner::Input ? "in" : "out") << ':';
        if (v.is_boolean) {
            os << "bool";
        } else {
            os << "0.." << v.max_value;
        }
    }
    os << '\n';
    for (const auto& [e, node] : fsm.initial_nodes()) {
        os << "initial " << format_values(vars, ins, input_values(e)) << " -> " << node << '\n';
    }
    for (std::size_t id = 0; id < fsm.node_count(); ++id) {
        const auto& n = fsm.node(id);
        os << "node " << id << " mem " << n.memory << (n.goal_reached ? " goal" : "") << " :";
        for (std::size_t k = 0; k < vars.size(); ++k) os << ' ' << vars[k].name << '=' << n.valuation[k];
        os << '\n';
        for (const auto& t : n.transitions) {
            os << "  " << format_values(vars, ins, input_values(t.input)) << " -> " << t.target << " / "
               << format_values(vars, outs, t.output) << '\n';
        }
    }
}

SynthesisResult synthesize(const Gr1Spec& spec, const SynthesisOptions& options)
{
    const GameGraph game = build_game(spec, options.state_cap);
    const Gr1Solution sol = solve_gr1(game);
    const RealizabilityVerdict verdict = check_realizable(game, sol.winning);
    if (!verdict.realizable) {
        const auto ins = indices_of(game.variables(), VarOwner::Input);
        return Unrealizable{*verdict.witness, "{" + (ins.empty() ? std::string() : format_values(game.variables(), ins, *verdict.witness)) + "}"};
    }
    return Realizable{extract_fsm(game, sol)};
}

}  // namespace hetsynth
