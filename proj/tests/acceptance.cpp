// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "hetsynth/scenario.hpp"
#include "hetsynth/synthesis.hpp"
#include "hetsynth/trace_io.hpp"
#include "parity_oracle.hpp"
#include "random_games.hpp"
#include "trace_checks.hpp"

using namespace hetsynth;
using namespace hetsynth::testing;

namespace {

// Pinned limits.
constexpr double mission_budget_s = 60.0;
constexpr double synthesis_budget_s = 5.0;
constexpr double oracle_budget_s = 60.0;
constexpr int oracle_games = 100;
constexpr std::size_t oracle_max_states = 200;
constexpr int soundness_controllers = 20;
constexpr int soundness_steps = 1000;
constexpr int env_policies = 4;

const std::string scenario_dir = HETSYNTH_SCENARIO_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Scenario shipped(const std::string& name) { return load_scenario(scenario_dir + "/" + name + ".scn"); }

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail)
{
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string join(const Problems& p)
{
    std::string out;
    for (const auto& s : p) out += (out.empty() ? "" : "; ") + s;
    return out;
}

// Slowest single-agent synthesis over a scenario's initial specifications.
double slowest_synthesis(const Scenario& sc)
{
    double worst = 0;
    for (const auto& a : sc.world.agents) {
        const auto t0 = Clock::now();
        synthesize(spec_for_agent(sc.world, a.id, View::Synthesis, a.objective));
        worst = std::max(worst, seconds_since(t0));
    }
    return worst;
}

void case_criterion(const std::string& label, const std::string& name,
                    const std::function<Problems(const Scenario&, const MissionResult&)>& check)
{
    const Scenario sc = shipped(name);
    const auto t0 = Clock::now();
    const MissionResult r = run_scenario(sc);
    const double mission_s = seconds_since(t0);
    const double synth_s = slowest_synthesis(sc);
    Problems p = check(sc, r);
    if (mission_s >= mission_budget_s) p.push_back("mission took " + std::to_string(mission_s) + " s");
    if (synth_s >= synthesis_budget_s) p.push_back("synthesis took " + std::to_string(synth_s) + " s");
    char detail[256];
    std::snprintf(detail, sizeof detail, "status=%s rounds=%zu resyntheses=%zu depth=%zu mission=%.2fs synth=%.3fs",
                  std::string(to_string(r.status)).c_str(), r.rounds, r.resyntheses, r.max_stack_depth, mission_s,
                  synth_s);
    report(label, p.empty(), p.empty() ? detail : join(p));
}

void oracle_criterion()
{
    const auto t0 = Clock::now();
    int games = 0;
    int mismatches = 0;
    std::size_t largest = 0;
    for (std::uint32_t seed = 0; games < oracle_games; ++seed) {
        const auto rg = random_grid_game(seed);
        const GameGraph g = build_game(rg.spec);
        if (g.state_count() > oracle_max_states) continue;
        ++games;
        largest = std::max(largest, g.state_count());
        if (solve_gr1(g).winning != oracle::reference_winning_region(g)) ++mismatches;
    }
    const double s = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof detail, "%d games (max %zu states), %d mismatches, %.2fs", games, largest, mismatches, s);
    report("solver oracle equivalence", mismatches == 0 && s < oracle_budget_s, detail);
}

struct Controller {
    RandomGame rg;
    GameGraph game;
    ControllerFsm fsm;
};

std::vector<Controller> random_controllers()
{
    std::vector<Controller> out;
    for (std::uint32_t seed = 1000; static_cast<int>(out.size()) < soundness_controllers; ++seed) {
        auto rg = random_grid_game(seed);
        GameGraph g = build_game(rg.spec);
        const Gr1Solution sol = solve_gr1(g);
        if (!check_realizable(g, sol.winning).realizable) continue;
        ControllerFsm fsm = extract_fsm(g, sol);
        out.push_back({std::move(rg), std::move(g), std::move(fsm)});
    }
    return out;
}

void soundness_criterion(const std::vector<Controller>& cs)
{
    std::mt19937 rng(2024);
    long trans_violations = 0;
    long obstacle_entries = 0;
    long steps = 0;
    for (const auto& c : cs) {
        std::size_t node = c.fsm.initial_nodes()[rng() % c.fsm.initial_nodes().size()].second;
        for (int k = 0; k < soundness_steps; ++k) {
            const StateId s = c.fsm.node(node).state;
            const auto& moves = c.game.env_moves(s);
            const InputId e = moves[rng() % moves.size()];
            const std::size_t next = c.fsm.step(node, c.game.decode_input(e)).node;
            const Valuation now = c.game.valuation(s);
            const Valuation after = c.game.valuation(c.fsm.node(next).state);
            for (const auto& f : c.rg.spec.sys_trans) trans_violations += eval_formula(f, now, &after) ? 0 : 1;
            obstacle_entries += c.rg.walls.count(after.at("pos_r")) ? 1 : 0;
            node = next;
            ++steps;
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof detail, "%zu controllers, %ld steps, %ld transition violations, %ld obstacle entries",
                  cs.size(), steps, trans_violations, obstacle_entries);
    report("safety soundness", trans_violations == 0 && obstacle_entries == 0, detail);
}

void liveness_criterion(const std::vector<Controller>& cs)
{
    int fair_loops = 0;
    int skipped = 0;
    std::size_t worst_gap = 0;
    std::size_t worst_bound = 0;
    bool ok = true;
    for (const auto& c : cs) {
        const std::size_t bound = c.fsm.node_count() * c.fsm.goal_count();
        for (std::uint32_t policy = 0; policy < static_cast<std::uint32_t>(env_policies); ++policy) {
            auto choose = [&](StateId s) {
                const auto& moves = c.game.env_moves(s);
                return moves[(s * 2654435761u + policy * 40503u) % moves.size()];
            };
            const std::size_t steps = 4 * bound + 50;
            std::vector<StateId> states;
            std::size_t node = c.fsm.initial_nodes()[policy % c.fsm.initial_nodes().size()].second;
            states.push_back(c.fsm.node(node).state);
            for (std::size_t k = 0; k < steps; ++k) {
                node = c.fsm.step(node, c.game.decode_input(choose(states.back()))).node;
                states.push_back(c.fsm.node(node).state);
            }
            // Deterministic loop: the last node-count steps lie on its cycle.
            bool fair = true;
            for (const auto& goal : c.game.env_goals()) {
                bool hit = false;
                for (std::size_t k = steps - c.fsm.node_count(); k <= steps; ++k) hit = hit || goal.contains(states[k]);
                fair = fair && hit;
            }
            if (!fair) {
                ++skipped;
                continue;
            }
            ++fair_loops;
            for (const auto& goal : c.game.sys_goals()) {
                std::size_t last = 0;
                for (std::size_t k = 0; k <= steps; ++k) {
                    if (goal.contains(states[k])) last = k;
                    const std::size_t gap = k - last;
                    if (gap > worst_gap) {
                        worst_gap = gap;
                        worst_bound = bound;
                    }
                    if (gap > bound) ok = false;
                }
            }
        }
    }
    char detail[200];
    std::snprintf(detail, sizeof detail, "%d fair loops (%d env-unfair skipped), worst gap %zu (bound there %zu)",
                  fair_loops, skipped, worst_gap, worst_bound);
    report("liveness bound", ok && fair_loops > 0, detail);
}

void unrealizability_criterion()
{
    const Scenario sc = shipped("case1");
    const PatrolParams obj = sc.world.agent("quad").objective;
    const auto actual = synthesize(spec_for_agent(sc.world, "quad", View::Actual, obj));
    const auto assumed = synthesize(spec_for_agent(sc.world, "quad", View::Synthesis, obj));
    const bool ok = !is_realizable(actual) && is_realizable(assumed);
    std::string detail = "actual view: ";
    detail += is_realizable(actual) ? "realizable" : "unrealizable witness=" + std::get<Unrealizable>(actual).witness;
    detail += ", synthesis view: ";
    detail += is_realizable(assumed) ? "realizable" : "unrealizable";
    report("unrealizability detection", ok, detail);
}

void determinism_criterion()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"case1", "case2", "case3", "stuck"}) {
        const Scenario sc = shipped(name);
        const std::string a = trace_to_string({sc.name, sc.digest, run_scenario(sc).trace});
        const std::string b = trace_to_string({sc.name, sc.digest, run_scenario(sc).trace});
        ok = ok && a == b;
        detail += std::string(detail.empty() ? "" : ", ") + name + (a == b ? " identical" : " DIFFERENT");
    }
    report("determinism", ok, detail);
}

std::string rejection(const std::string& text)
{
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.constraint();
    }
    return "accepted";
}

void validation_criterion()
{
    const std::string base = "scenario v1\nname v\ngrid 7 13\nactions push sense lift\nobstacle-column 8 except 47\n"
                             "agent quad mobility=aerial caps=sense start=20 patrol=20,24\n"
                             "agent Digit mobility=ground caps=push start=28 heading=E patrol=28,54\n";
    const std::string overlap =
        rejection(base + "resolvable u kind=uncertainty at=47 action=sense states=34,46 blocks=ground\n");
    const std::string incapable = rejection(base + "resolvable h kind=door at=47 action=lift blocks=ground\n");
    const bool ok = overlap == "resolution-states-disjoint-from-obstacles" && incapable == "capability-coverage";
    report("validation", ok, "overlap -> " + overlap + ", no capable agent -> " + incapable);
}

}  // namespace

int main()
{
    case_criterion("case study 1 structure", "case1", check_case1);
    case_criterion("case study 2 structure", "case2", check_case2);
    case_criterion("case study 3 structure", "case3", check_case3);
    oracle_criterion();
    const auto controllers = random_controllers();
    soundness_criterion(controllers);
    liveness_criterion(controllers);
    unrealizability_criterion();
    determinism_criterion();
    validation_criterion();
    std::printf("%d criteria failed\n", failures);
    return failures;
}
