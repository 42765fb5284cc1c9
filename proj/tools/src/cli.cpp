#include "hetsynth/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hetsynth/render.hpp"
#include "hetsynth/scenario.hpp"
#include "hetsynth/speclang.hpp"
#include "hetsynth/synthesis.hpp"
#include "hetsynth/trace_io.hpp"

namespace hetsynth {
namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

bool read_file(const std::string& path, std::string& text, std::ostream& err)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot open '" << path << "'\n";
        return false;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    return true;
}

std::optional<Gr1Spec> load_spec(const std::string& path, std::ostream& err)
{
    std::string text;
    if (!read_file(path, text, err)) return std::nullopt;
    try {
        return parse_spec(text);
    } catch (const SpecError& e) {
        err << path << ':' << e.line() << ':' << e.column() << ": error: " << e.what() << '\n';
        return std::nullopt;
    }
}

int cmd_synth(const std::string& spec_path, const std::string& fsm_out, std::ostream& out, std::ostream& err)
{
    const auto spec = load_spec(spec_path, err);
    if (!spec) return exit_failure;
    const SynthesisResult result = synthesize(*spec);
    if (const auto* u = std::get_if<Unrealizable>(&result)) {
        out << "unrealizable witness=" << u->witness << '\n';
        return exit_failure;
    }
    const ControllerFsm& fsm = std::get<Realizable>(result).fsm;
    out << "realizable nodes=" << fsm.node_count() << " goals=" << fsm.goal_count() << '\n';
    if (fsm_out == "-") {
        write_fsm(out, fsm);
    } else if (!fsm_out.empty()) {
        std::ofstream f(fsm_out, std::ios::binary);
        if (!f) {
            err << "error: cannot write '" << fsm_out << "'\n";
            return exit_failure;
        }
        write_fsm(f, fsm);
    }
    return exit_ok;
}

int cmd_check(const std::string& spec_path, std::ostream& out, std::ostream& err)
{
    const auto spec = load_spec(spec_path, err);
    if (!spec) return exit_failure;
    const GameGraph game = build_game(*spec);
    const Gr1Solution sol = solve_gr1(game);
    const RealizabilityVerdict v = check_realizable(game, sol.winning);
    out << "states=" << game.state_count() << " winning=" << sol.winning.count() << '\n';
    if (v.realizable) {
        out << "realizable\n";
        return exit_ok;
    }
    std::string witness;
    std::size_t k = 0;
    for (const auto& var : game.variables()) {
        if (var.owner != VarOwner::Input) continue;
        if (!witness.empty()) witness += ' ';
        witness += var.name + '=' + std::to_string((*v.witness)[k++]);
    }
    out << "unrealizable witness={" << witness << "}\n";
    return exit_failure;
}

int cmd_run(const std::string& path, std::size_t max_steps, const std::string& trace_path, bool render,
            std::ostream& out, std::ostream& err)
{
    Scenario sc;
    try {
        sc = load_scenario(path);
    } catch (const ScenarioError& e) {
        err << "error: " << path << ": " << e.what() << '\n';
        return exit_failure;
    }

    std::function<void(const MissionState&)> on_round;
    if (render) {
        on_round = [&out](const MissionState& m) {
            out << "round " << m.step << '\n' << render_ascii(m.world) << '\n';
        };
    }
    const MissionResult res = run_scenario(sc, max_steps, on_round);

    if (!trace_path.empty()) {
        std::ofstream f(trace_path, std::ios::binary);
        if (!f) {
            err << "error: cannot write '" << trace_path << "'\n";
            return exit_failure;
        }
        write_trace(f, TraceFile{sc.name, sc.digest, res.trace});
    }
    out << "scenario=" << sc.name << " status=" << to_string(res.status) << " rounds=" << res.rounds
        << " resyntheses=" << res.resyntheses << " max-stack-depth=" << res.max_stack_depth << '\n';
    if (res.status == MissionStatus::Stuck) err << "mission stuck: " << res.reason << '\n';
    return res.status == MissionStatus::Success ? exit_ok : exit_failure;
}

}  // namespace

int cli_main(int argc, const char* const argv[], std::ostream& out, std::ostream& err)
{
    CLI::App app{"Reactive controller synthesis and multi-agent mission runner", "hetsynth"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string fsm_out;
    auto* synth = app.add_subcommand("synth", "Synthesize a controller from a GR(1) specification");
    synth->add_option("spec", spec_path, "Specification file")->required();
    synth->add_option("--fsm-out", fsm_out, "Write the controller here ('-' for standard output)");

    std::string check_path;
    auto* check = app.add_subcommand("check", "Decide realizability and print a witness when unrealizable");
    check->add_option("spec", check_path, "Specification file")->required();

    std::string scenario_path;
    std::size_t max_steps = 0;
    std::string trace_path;
    bool render = false;
    unsigned long long seed = 0;
    auto* run = app.add_subcommand("run", "Run a multi-agent mission scenario");
    run->add_option("scenario", scenario_path, "Scenario file")->required();
    run->add_option("--max-steps", max_steps, "Round limit (overrides the scenario)")->check(CLI::PositiveNumber);
    run->add_option("--trace", trace_path, "Write the event trace here");
    run->add_flag("--render", render, "Print an ASCII frame after every round");
    run->add_option("--seed", seed, "Reserved; missions are deterministic");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*synth) return cmd_synth(spec_path, fsm_out, out, err);
        if (*check) return cmd_check(check_path, out, err);
        return cmd_run(scenario_path, max_steps, trace_path, render, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace hetsynth
