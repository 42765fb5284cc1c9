#pragma once

// Explicit-state GR(1) synthesis: game construction, the three-nested
// fixpoint solver, and Mealy strategy extraction.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hetsynth/speclang.hpp"

namespace hetsynth {

using StateId = std::uint32_t;
using InputId = std::uint32_t;

/// Fixed-universe bitset over game states.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe, bool full = false);

    static StateSet all(std::size_t universe) { return StateSet(universe, true); }
    static StateSet none(std::size_t universe) { return StateSet(universe, false); }

    std::size_t universe() const { return universe_; }
    bool contains(StateId s) const { return (words_[s >> 6] >> (s & 63)) & 1u; }
    void insert(StateId s) { words_[s >> 6] |= std::uint64_t{1} << (s & 63); }
    void erase(StateId s) { words_[s >> 6] &= ~(std::uint64_t{1} << (s & 63)); }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool subset_of(const StateSet& other) const;
    std::vector<StateId> members() const;

    StateSet& operator|=(const StateSet& o);
    StateSet& operator&=(const StateSet& o);
    StateSet operator~() const;
    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    bool operator==(const StateSet&) const = default;

private:
    void trim();
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

class StateCapExceeded : public std::runtime_error {
public:
    StateCapExceeded(std::uint64_t product, std::uint64_t cap);
    std::uint64_t product() const { return product_; }

private:
    std::uint64_t product_;
};

inline constexpr std::uint64_t default_state_cap = 5'000'000;

/// Two-player game over full valuations of a specification's variables.
///
/// States are numbered in mixed radix with the first declared variable most
/// significant, so for a fixed input part, state order equals lexicographic
/// order of output valuations.
class GameGraph {
public:
    const std::vector<VarDecl>& variables() const { return vars_; }
    std::size_t state_count() const { return state_count_; }
    std::size_t input_count() const { return input_count_; }  // number of input valuations

    std::vector<int> decode(StateId s) const;
    StateId encode(std::span<const int> valuation) const;
    Valuation valuation(StateId s) const;

    std::vector<int> decode_input(InputId e) const;  // values of input vars, declaration order
    InputId encode_input(std::span<const int> input_values) const;
    std::vector<int> output_part(StateId s) const;   // values of output vars, declaration order
    InputId input_part(StateId s) const;

    /// Next-input valuations the environment may choose from `s`.
    const std::vector<InputId>& env_moves(StateId s) const { return env_moves_[s]; }
    /// Successor states available to the system after env move `k` (index into env_moves(s)).
    const std::vector<StateId>& sys_moves(StateId s, std::size_t k) const { return sys_moves_[s][k]; }
    /// Successors for a given next-input valuation; null when the input is not a legal env move.
    const std::vector<StateId>* sys_moves_for_input(StateId s, InputId e) const;

    const StateSet& initial_states() const { return initial_; }
    /// Inputs admitted by env_init, ascending.
    const std::vector<InputId>& initial_inputs() const { return initial_inputs_; }
    const std::vector<StateSet>& env_goals() const { return env_goals_; }
    const std::vector<StateSet>& sys_goals() const { return sys_goals_; }

private:
    friend GameGraph build_game(const Gr1Spec&, std::uint64_t);

    std::vector<VarDecl> vars_;
    std::vector<std::size_t> radix_;   // stride per variable
    std::vector<std::size_t> inputs_;  // indices of input vars
    std::vector<std::size_t> outputs_; // indices of output vars
    std::size_t state_count_ = 0;
    std::size_t input_count_ = 1;
    std::vector<std::vector<InputId>> env_moves_;
    std::vector<std::vector<std::vector<StateId>>> sys_moves_;
    StateSet initial_;
    std::vector<InputId> initial_inputs_;
    std::vector<StateSet> env_goals_;
    std::vector<StateSet> sys_goals_;
};

/// Enumerates all states and evaluates the transition formulas over every
/// candidate successor. Throws StateCapExceeded.
GameGraph build_game(const Gr1Spec& spec, std::uint64_t state_cap = default_state_cap);

/// States from which every env move admits a system response into `target`.
/// States without env moves are included vacuously.
StateSet controllable_pre(const GameGraph& game, const StateSet& target);

struct Gr1Solution {
    StateSet winning;
    /// ranks[j][s]: 1-based iteration of the least fixpoint for system goal j
    /// at which s entered; 0 when s is outside the winning region.
    std::vector<std::vector<std::uint32_t>> ranks;
};

Gr1Solution solve_gr1(const GameGraph& game);

/// One application of the outer fixpoint body: the intersection over system
/// goals of the least fixpoints computed against `z`.
StateSet gr1_step(const GameGraph& game, const StateSet& z);

struct RealizabilityVerdict {
    bool realizable = false;
    std::optional<std::vector<int>> witness;  // losing initial input valuation
};

/// Realizable iff every env-initial input admits an initial state in W.
RealizabilityVerdict check_realizable(const GameGraph& game, const StateSet& winning);

struct FsmTransition {
    InputId input;
    std::size_t target;
    std::vector<int> output;  // output vars, declaration order
};

struct FsmNode {
    StateId state;
    std::vector<int> valuation;  // all vars, declaration order
    std::size_t memory;          // index of the system goal being pursued
    bool goal_reached;           // state satisfies goal `memory`
    std::vector<FsmTransition> transitions;  // ascending by input
};

struct FsmStep {
    std::size_t node;
    std::vector<int> output;
};

class IllegalEnvMove : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Deterministic Mealy controller with goal-index memory.
class ControllerFsm {
public:
    const std::vector<VarDecl>& variables() const { return vars_; }
    std::size_t node_count() const { return nodes_.size(); }
    const FsmNode& node(std::size_t i) const { return nodes_[i]; }
    std::size_t goal_count() const { return goal_count_; }

    /// Initial node for an env-initial input valuation (input vars, declaration order).
    std::optional<std::size_t> initial_node(std::span<const int> input) const;
    const std::vector<std::pair<InputId, std::size_t>>& initial_nodes() const { return initial_; }

    /// Throws IllegalEnvMove when `input` violates the environment's transition rules.
    FsmStep step(std::size_t node, std::span<const int> input) const;

    std::vector<std::string> input_names() const;
    std::vector<std::string> output_names() const;

private:
    friend ControllerFsm extract_fsm(const GameGraph&, const Gr1Solution&);

    std::vector<VarDecl> vars_;
    std::vector<std::size_t> input_radix_;
    std::size_t goal_count_ = 1;
    std::vector<FsmNode> nodes_;
    std::vector<std::pair<InputId, std::size_t>> initial_;
};

/// Builds the finite-state strategy reachable from the initial states.
/// Requires a realizable game.
ControllerFsm extract_fsm(const GameGraph& game, const Gr1Solution& solution);

FsmStep fsm_step(const ControllerFsm& fsm, std::size_t node, std::span<const int> input);

/// Line-oriented dump: one `node` line per node followed by one indented
/// `input -> target / output` line per transition.
void write_fsm(std::ostream& os, const ControllerFsm& fsm);

struct Realizable {
    ControllerFsm fsm;
};

struct Unrealizable {
    std::vector<int> witness_input;
    std::string witness;  // printable form of the losing input valuation
};

using SynthesisResult = std::variant<Realizable, Unrealizable>;

struct SynthesisOptions {
    std::uint64_t state_cap = default_state_cap;
};

SynthesisResult synthesize(const Gr1Spec& spec, const SynthesisOptions& options = {});

inline bool is_realizable(const SynthesisResult& r) { return std::holds_alternative<Realizable>(r); }

}  // namespace hetsynth
