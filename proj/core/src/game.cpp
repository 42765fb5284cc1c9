#include <algorithm>
#include <bit>
#include <limits>

#include "compiled_formula.hpp"
#include "hetsynth/synthesis.hpp"

namespace hetsynth {

// ---------------------------------------------------------------------------
// StateSet

StateSet::StateSet(std::size_t universe, bool full)
    : universe_(universe), words_((universe + 63) / 64, full ? ~std::uint64_t{0} : 0)
{
    trim();
}

void StateSet::trim()
{
    if (universe_ % 64 != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
    }
}

std::size_t StateSet::count() const
{
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool StateSet::subset_of(const StateSet& other) const
{
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
}

std::vector<StateId> StateSet::members() const
{
    std::vector<StateId> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        std::uint64_t w = words_[i];
        while (w != 0) {
            const int bit = std::countr_zero(w);
            out.push_back(static_cast<StateId>(i * 64 + static_cast<std::size_t>(bit)));
            w &= w - 1;
        }
    }
    return out;
}

StateSet& StateSet::operator|=(const StateSet& o)
{
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

StateSet& StateSet::operator&=(const StateSet& o)
{
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

StateSet StateSet::operator~() const
{
    StateSet r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
}

StateCapExceeded::StateCapExceeded(std::uint64_t product, std::uint64_t cap)
    : std::runtime_error("state space of " + std::to_string(product) + " valuations exceeds cap " +
                         std::to_string(cap)),
      product_(product)
{
}

// ---------------------------------------------------------------------------
// GameGraph

std::vector<int> GameGraph::decode(StateId s) const
{
    std::vector<int> v(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) {
        v[k] = static_cast<int>((s / radix_[k]) % static_cast<std::size_t>(vars_[k].domain_size()));
    }
    return v;
}

StateId GameGraph::encode(std::span<const int> valuation) const
{
    std::size_t s = 0;
    for (std::size_t k = 0; k < vars_.size(); ++k) s += static_cast<std::size_t>(valuation[k]) * radix_[k];
    return static_cast<StateId>(s);
}

Valuation GameGraph::valuation(StateId s) const
{
    Valuation out;
    const auto v = decode(s);
    for (std::size_t k = 0; k < vars_.size(); ++k) out.emplace(vars_[k].name, v[k]);
    return out;
}

std::vector<int> GameGraph::decode_input(InputId e) const
{
    std::vector<int> v(inputs_.size());
    for (std::size_t k = inputs_.size(); k-- > 0;) {
        const auto size = static_cast<InputId>(vars_[inputs_[k]].domain_size());
        v[k] = static_cast<int>(e % size);
        e /= size;
    }
    return v;
}

InputId GameGraph::encode_input(std::span<const int> input_values) const
{
    InputId e = 0;
    for (std::size_t k = 0; k < inputs_.size(); ++k) {
        e = e * static_cast<InputId>(vars_[inputs_[k]].domain_size()) + static_cast<InputId>(input_values[k]);
    }
    return e;
}

std::vector<int> GameGraph::output_part(StateId s) const
{
    const auto v = decode(s);
    std::vector<int> out;
    out.reserve(outputs_.size());
    for (auto k : outputs_) out.push_back(v[k]);
    return out;
}

InputId GameGraph::input_part(StateId s) const
{
    const auto v = decode(s);
    std::vector<int> in;
    in.reserve(inputs_.size());
    for (auto k : inputs_) in.push_back(v[k]);
    return encode_input(in);
}

const std::vector<StateId>* GameGraph::sys_moves_for_input(StateId s, InputId e) const
{
    const auto& moves = env_moves_[s];
    auto it = std::lower_bound(moves.begin(), moves.end(), e);
    if (it == moves.end() || *it != e) return nullptr;
    return &sys_moves_[s][static_cast<std::size_t>(it - moves.begin())];
}

namespace {

// Every valuation of a subset of variables, in mixed radix with the first
// variable most significant. `offsets` gives each valuation's contribution
// to the full state id.
struct PartialSpace {
    std::vector<std::vector<int>> values;
    std::vector<std::size_t> offsets;
};

PartialSpace enumerate_part(const std::vector<VarDecl>& vars, const std::vector<std::size_t>& which,
                            const std::vector<std::size_t>& radix)
{
    PartialSpace out;
    std::vector<int> cur(which.size(), 0);
    while (true) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < which.size(); ++k) off += static_cast<std::size_t>(cur[k]) * radix[which[k]];
        out.values.push_back(cur);
        out.offsets.push_back(off);
        std::size_t k = which.size();
        while (k > 0) {
            --k;
            if (++cur[k] < vars[which[k]].domain_size()) break;
            cur[k] = 0;
            if (k == 0) return out;
        }
        if (which.empty()) return out;
    }
}

std::vector<detail::CompiledFormula> compile_all(const std::vector<Formula>& fs, const std::vector<VarDecl>& vars)
{
    std::vector<detail::CompiledFormula> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.emplace_back(f, vars);
    return out;
}

}  // namespace

GameGraph build_game(const Gr1Spec& spec, std::uint64_t state_cap)
{
    std::uint64_t product = 1;
    for (const auto& v : spec.variables) {
        const auto size = static_cast<std::uint64_t>(v.domain_size());
        if (product > std::numeric_limits<std::uint64_t>::max() / size) {
            throw StateCapExceeded(std::numeric_limits<std::uint64_t>::max(), state_cap);
        }
        product *= size;
    }
    if (product > state_cap || product > std::numeric_limits<StateId>::max()) {
        throw StateCapExceeded(product, state_cap);
    }

    GameGraph g;
    g.vars_ = spec.variables;
    const std::size_t nvars = g.vars_.size();
    g.state_count_ = static_cast<std::size_t>(product);
    g.radix_.assign(nvars, 1);
    for (std::size_t k = nvars; k-- > 1;) {
        g.radix_[k - 1] = g.radix_[k] * static_cast<std::size_t>(g.vars_[k].domain_size());
    }
    for (std::size_t k = 0; k < nvars; ++k) {
        (g.vars_[k].owner == VarOwner::Input ? g.inputs_ : g.outputs_).push_back(k);
    }

    const PartialSpace in_space = enumerate_part(g.vars_, g.inputs_, g.radix_);
    const PartialSpace out_space = enumerate_part(g.vars_, g.outputs_, g.radix_);
    g.input_count_ = in_space.values.size();

    const auto env_trans = compile_all(spec.env_trans, g.vars_);
    const auto sys_trans = compile_all(spec.sys_trans, g.vars_);
    const auto env_init = compile_all(spec.env_init, g.vars_);
    const auto sys_init = compile_all(spec.sys_init, g.vars_);
    const auto env_live = compile_all(spec.env_liveness, g.vars_);
    const auto sys_live = compile_all(spec.sys_liveness, g.vars_);

    const std::size_t n = g.state_count_;
    g.env_moves_.assign(n, {});
    g.sys_moves_.assign(n, {});
    g.initial_ = StateSet::none(n);
    g.env_goals_.assign(env_live.size(), StateSet::none(n));
    g.sys_goals_.assign(sys_live.size(), StateSet::none(n));
    std::vector<bool> env_initial_input(g.input_count_, false);

    std::vector<int> next(nvars, 0);
    std::vector<const detail::CompiledFormula*> env_kept;
    std::vector<const detail::CompiledFormula*> sys_kept;

    // Residualizes a formula list against the current state; false when some
    // formula is already violated.
    auto residual = [](const std::vector<detail::CompiledFormula>& fs, std::span<const int> now,
                       std::vector<const detail::CompiledFormula*>& kept) {
        kept.clear();
        for (const auto& f : fs) {
            switch (f.eval_now(now)) {
            case detail::Tri::False: return false;
            case detail::Tri::Unknown: kept.push_back(&f); break;
            case detail::Tri::True: break;
            }
        }
        return true;
    };
    auto all_hold = [](const std::vector<const detail::CompiledFormula*>& fs, std::span<const int> now,
                       std::span<const int> nx) {
        for (const auto* f : fs) {
            if (!f->eval(now, nx)) return false;
        }
        return true;
    };

    for (StateId s = 0; s < n; ++s) {
        const std::vector<int> now = g.decode(s);

        bool env_init_ok = true;
        for (const auto& f : env_init) env_init_ok = env_init_ok && f.eval(now, now);
        if (env_init_ok) {
            env_initial_input[g.input_part(s)] = true;
            bool sys_init_ok = true;
            for (const auto& f : sys_init) sys_init_ok = sys_init_ok && f.eval(now, now);
            if (sys_init_ok) g.initial_.insert(s);
        }
        for (std::size_t i = 0; i < env_live.size(); ++i) {
            if (env_live[i].eval(now, now)) g.env_goals_[i].insert(s);
        }
        for (std::size_t j = 0; j < sys_live.size(); ++j) {
            if (sys_live[j].eval(now, now)) g.sys_goals_[j].insert(s);
        }

        if (!residual(env_trans, now, env_kept)) continue;
        const bool sys_possible = residual(sys_trans, now, sys_kept);

        for (InputId e = 0; e < g.input_count_; ++e) {
            const auto& in_vals = in_space.values[e];
            for (std::size_t k = 0; k < g.inputs_.size(); ++k) next[g.inputs_[k]] = in_vals[k];
            if (!all_hold(env_kept, now, next)) continue;
            g.env_moves_[s].push_back(e);
            auto& succ = g.sys_moves_[s].emplace_back();
            if (!sys_possible) continue;
            for (std::size_t o = 0; o < out_space.values.size(); ++o) {
                const auto& out_vals = out_space.values[o];
                for (std::size_t k = 0; k < g.outputs_.size(); ++k) next[g.outputs_[k]] = out_vals[k];
                if (all_hold(sys_kept, now, next)) {
                    succ.push_back(static_cast<StateId>(in_space.offsets[e] + out_space.offsets[o]));
                }
            }
        }
    }

    for (InputId e = 0; e < g.input_count_; ++e) {
        if (env_initial_input[e]) g.initial_inputs_.push_back(e);
    }
    return g;
}

StateSet controllable_pre(const GameGraph& game, const StateSet& target)
{
    const std::size_t n = game.state_count();
    StateSet out = StateSet::none(n);
    for (StateId s = 0; s < n; ++s) {
        const auto& moves = game.env_moves(s);
        bool ok = true;
        for (std::size_t k = 0; k < moves.size() && ok; ++k) {
            const auto& succ = game.sys_moves(s, k);
            ok = std::any_of(succ.begin(), succ.end(), [&](StateId t) { return target.contains(t); });
        }
        if (ok) out.insert(s);
    }
    return out;
}

}  // namespace hetsynth
