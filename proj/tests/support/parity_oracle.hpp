#pragma once

// Independent reference solver for GR(1) games.
//
// The GR(1) condition (all env goals infinitely often -> all sys goals
// infinitely often) is reduced to a max-parity game by two round-robin
// counters: i walks through the env goals, j through the sys goals. A wrap of
// j gets priority 2, a wrap of i (without a j wrap) priority 1, anything else
// 0. The parity game is solved with Zielonka's recursive algorithm, which
// shares no code with the fixpoint solver under test.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hetsynth/synthesis.hpp"

namespace hetsynth::oracle {

struct ParityGame {
    std::vector<int> owner;     // 0: system (even), 1: environment (odd)
    std::vector<int> priority;
    std::vector<std::vector<int>> succ;
    std::vector<std::vector<int>> pred;

    int add(int who, int prio)
    {
        owner.push_back(who);
        priority.push_back(prio);
        succ.emplace_back();
        pred.emplace_back();
        return static_cast<int>(owner.size()) - 1;
    }
    void edge(int a, int b)
    {
        succ[a].push_back(b);
        pred[b].push_back(a);
    }
};

namespace detail {

using Mask = std::vector<char>;

// Vertices in `live` from which `player` forces a visit to `target`.
inline Mask attractor(const ParityGame& g, const Mask& live, const Mask& target, int player)
{
    const std::size_t n = g.owner.size();
    Mask in(n, 0);
    std::vector<int> remaining(n, 0);
    std::vector<int> queue;
    for (std::size_t v = 0; v < n; ++v) {
        if (!live[v]) continue;
        for (int w : g.succ[v]) remaining[v] += live[w] ? 1 : 0;
        if (target[v]) {
            in[v] = 1;
            queue.push_back(static_cast<int>(v));
        }
    }
    while (!queue.empty()) {
        const int w = queue.back();
        queue.pop_back();
        for (int v : g.pred[w]) {
            if (!live[v] || in[v]) continue;
            if (g.owner[v] == player || --remaining[v] == 0) {
                in[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return in;
}

// Returns the winning mask of player 0 within `live`.
inline Mask zielonka(const ParityGame& g, const Mask& live)
{
    const std::size_t n = g.owner.size();
    int top = -1;
    for (std::size_t v = 0; v < n; ++v) {
        if (live[v] && g.priority[v] > top) top = g.priority[v];
    }
    if (top < 0) return Mask(n, 0);
    const int p = top % 2;

    Mask u(n, 0);
    for (std::size_t v = 0; v < n; ++v) u[v] = live[v] && g.priority[v] == top;
    const Mask a = attractor(g, live, u, p);
    Mask rest(n, 0);
    for (std::size_t v = 0; v < n; ++v) rest[v] = live[v] && !a[v];
    const Mask w0_sub = zielonka(g, rest);

    Mask opp(n, 0);  // opponent's winning part of the subgame
    bool opp_empty = true;
    for (std::size_t v = 0; v < n; ++v) {
        const bool w0 = w0_sub[v] != 0;
        opp[v] = rest[v] && (p == 0 ? !w0 : w0);
        if (opp[v]) opp_empty = false;
    }
    if (opp_empty) {
        Mask out(n, 0);
        if (p == 0) out = live;
        return out;
    }
    const Mask b = attractor(g, live, opp, 1 - p);
    Mask rest2(n, 0);
    for (std::size_t v = 0; v < n; ++v) rest2[v] = live[v] && !b[v];
    Mask out = zielonka(g, rest2);
    if (p == 1) {
        // opponent (player 0) also wins b
        for (std::size_t v = 0; v < n; ++v) {
            if (b[v]) out[v] = 1;
        }
    }
    return out;
}

}  // namespace detail

/// Winning region of the system computed by the parity reduction.
inline StateSet reference_winning_region(const GameGraph& game)
{
    const std::size_t n = game.state_count();
    const std::size_t ne = game.env_goals().size();
    const std::size_t ns = game.sys_goals().size();

    ParityGame g;
    const int win = g.add(0, 2);
    const int lose = g.add(0, 1);
    g.edge(win, win);
    g.edge(lose, lose);

    auto env_vertex = [&](std::size_t s, std::size_t i, std::size_t j) {
        return 2 + static_cast<int>((s * ne + i) * ns + j);
    };
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < ne; ++i) {
            for (std::size_t j = 0; j < ns; ++j) {
                const bool sys_hit = game.sys_goals()[j].contains(static_cast<StateId>(s));
                const bool env_hit = game.env_goals()[i].contains(static_cast<StateId>(s));
                int prio = 0;
                if (sys_hit && j + 1 == ns) {
                    prio = 2;
                } else if (env_hit && i + 1 == ne) {
                    prio = 1;
                }
                g.add(1, prio);
            }
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        const auto& moves = game.env_moves(static_cast<StateId>(s));
        for (std::size_t i = 0; i < ne; ++i) {
            for (std::size_t j = 0; j < ns; ++j) {
                const int v = env_vertex(s, i, j);
                if (moves.empty()) {
                    g.edge(v, win);
                    continue;
                }
                const bool sys_hit = game.sys_goals()[j].contains(static_cast<StateId>(s));
                const bool env_hit = game.env_goals()[i].contains(static_cast<StateId>(s));
                const std::size_t i2 = env_hit ? (i + 1) % ne : i;
                const std::size_t j2 = sys_hit ? (j + 1) % ns : j;
                for (std::size_t k = 0; k < moves.size(); ++k) {
                    const int choice = g.add(0, 0);
                    g.edge(v, choice);
                    const auto& succ = game.sys_moves(static_cast<StateId>(s), k);
                    if (succ.empty()) g.edge(choice, lose);
                    for (StateId t : succ) g.edge(choice, env_vertex(t, i2, j2));
                }
            }
        }
    }

    const detail::Mask all(g.owner.size(), 1);
    const detail::Mask w = detail::zielonka(g, all);
    StateSet out = StateSet::none(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (w[static_cast<std::size_t>(env_vertex(s, 0, 0))]) out.insert(static_cast<StateId>(s));
    }
    return out;
}

}  // namespace hetsynth::oracle
