#include "hetsynth/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace hetsynth {

ScenarioError::ScenarioError(std::string constraint, int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message + " [" + constraint + "]"
                                  : message + " [" + constraint + "]"),
      constraint_(std::move(constraint)),
      line_(line)
{
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

std::vector<std::string_view> tokens(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::vector<std::string_view> split_commas(std::string_view s)
{
    std::vector<std::string_view> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) return out;
        start = comma + 1;
    }
}

struct RawAgent {
    int line = 0;
    AgentSpec spec;
    bool has_heading = false;
};

struct RawResolvable {
    int line = 0;
    ResolvableObstacle obstacle;
    bool explicit_states = false;
    std::optional<Heading> target_direction;
    std::optional<RegionId> target_region;
    bool traversable_given = false;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Scenario run()
    {
        std::size_t pos = 0;
        bool header = false;
        while (pos <= text_.size()) {
            const auto nl = text_.find('\n', pos);
            std::string_view line = text_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++line_;
            pos = nl == std::string_view::npos ? text_.size() + 1 : nl + 1;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            const auto toks = tokens(line);
            if (toks.empty()) continue;
            if (!header) {
                if (toks.size() != 2 || toks[0] != "scenario" || toks[1] != "v1") {
                    fail("syntax", "expected header 'scenario v1'");
                }
                header = true;
                continue;
            }
            directive(toks);
        }
        if (!header) fail("syntax", "empty scenario");
        line_ = 0;
        return finish();
    }

private:
    [[noreturn]] void fail(const std::string& constraint, const std::string& msg) const
    {
        throw ScenarioError(constraint, line_, msg);
    }
    [[noreturn]] void fail_at(int line, const std::string& constraint, const std::string& msg) const
    {
        throw ScenarioError(constraint, line, msg);
    }

    long long number(std::string_view s) const
    {
        long long v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) fail("syntax", "expected a number, got '" + std::string(s) + "'");
        return v;
    }

    int region(std::string_view s) const
    {
        const long long v = number(s);
        if (v < 0 || v > 1'000'000) fail("grid-bounds", "region " + std::string(s) + " out of range");
        return static_cast<int>(v);
    }

    bool flag(std::string_view s) const
    {
        if (s == "true") return true;
        if (s == "false") return false;
        fail("syntax", "expected true or false, got '" + std::string(s) + "'");
    }

    void directive(const std::vector<std::string_view>& t)
    {
        const std::string_view d = t[0];
        auto arity = [&](std::size_t n) {
            if (t.size() != n) fail("syntax", "'" + std::string(d) + "' takes " + std::to_string(n - 1) + " argument(s)");
        };
        if (d == "name") {
            arity(2);
            name_ = std::string(t[1]);
        } else if (d == "grid") {
            arity(3);
            const long long r = number(t[1]);
            const long long c = number(t[2]);
            if (r <= 0 || c <= 0 || r * c > 1'000'000) fail("grid-bounds", "grid dimensions must be positive");
            grid_ = Grid{static_cast<int>(r), static_cast<int>(c)};
        } else if (d == "actions") {
            for (std::size_t i = 1; i < t.size(); ++i) actions_.emplace_back(t[i]);
        } else if (d == "obstacles") {
            for (std::size_t i = 1; i < t.size(); ++i) obstacles_.emplace_back(line_, region(t[i]));
        } else if (d == "obstacle-column") {
            if (t.size() < 2 || (t.size() > 2 && t[2] != "except")) {
                fail("syntax", "expected 'obstacle-column <col> [except <ids>]'");
            }
            std::vector<RegionId> except;
            for (std::size_t i = 3; i < t.size(); ++i) except.push_back(region(t[i]));
            columns_.push_back({line_, static_cast<int>(number(t[1])), std::move(except)});
        } else if (d == "agent") {
            agent(t);
        } else if (d == "resolvable") {
            resolvable(t);
        } else if (d == "cycles") {
            arity(2);
            const long long k = number(t[1]);
            if (k < 1) fail("syntax", "cycles must be positive");
            cycles_ = static_cast<std::size_t>(k);
        } else if (d == "max-steps") {
            arity(2);
            const long long k = number(t[1]);
            if (k < 1) fail("syntax", "max-steps must be positive");
            max_steps_ = static_cast<std::size_t>(k);
        } else {
            fail("syntax", "unknown directive '" + std::string(d) + "'");
        }
    }

    std::map<std::string, std::string, std::less<>> key_values(const std::vector<std::string_view>& t,
                                                               std::vector<std::string>* flags) const
    {
        std::map<std::string, std::string, std::less<>> kv;
        for (std::size_t i = 2; i < t.size(); ++i) {
            const auto eq = t[i].find('=');
            if (eq == std::string_view::npos) {
                if (flags) {
                    flags->emplace_back(t[i]);
                    continue;
                }
                fail("syntax", "expected key=value, got '" + std::string(t[i]) + "'");
            }
            if (!kv.emplace(std::string(t[i].substr(0, eq)), std::string(t[i].substr(eq + 1))).second) {
                fail("syntax", "duplicate key '" + std::string(t[i].substr(0, eq)) + "'");
            }
        }
        return kv;
    }

    void agent(const std::vector<std::string_view>& t)
    {
        if (t.size() < 2) fail("syntax", "agent needs an id");
        RawAgent a;
        a.line = line_;
        a.spec.id = std::string(t[1]);
        auto kv = key_values(t, nullptr);
        for (const auto& [k, v] : kv) {
            if (k == "mobility") {
                const auto m = parse_mobility(v);
                if (!m) fail("syntax", "unknown mobility '" + v + "'");
                a.spec.mobility = *m;
            } else if (k == "caps") {
                for (auto c : split_commas(v)) {
                    if (!c.empty()) a.spec.capabilities.emplace(c);
                }
            } else if (k == "start") {
                a.spec.start.region = region(v);
            } else if (k == "heading") {
                const auto h = parse_heading(v);
                if (!h) fail("syntax", "unknown heading '" + v + "'");
                a.spec.start.heading = *h;
                a.has_heading = true;
            } else if (k == "patrol") {
                const auto ends = split_commas(v);
                if (ends.size() != 2) fail("syntax", "patrol takes two regions");
                a.spec.objective = PatrolParams{region(ends[0]), region(ends[1])};
            } else if (k == "anchor") {
                a.spec.anchor = region(v);
            } else {
                fail("syntax", "unknown agent key '" + k + "'");
            }
        }
        for (const char* req : {"mobility", "start", "patrol"}) {
            if (!kv.count(req)) fail("syntax", "agent '" + a.spec.id + "' lacks " + req + "=");
        }
        agents_.push_back(std::move(a));
    }

    void resolvable(const std::vector<std::string_view>& t)
    {
        if (t.size() < 2) fail("syntax", "resolvable needs an id");
        RawResolvable r;
        r.line = line_;
        r.obstacle.id = std::string(t[1]);
        std::vector<std::string> flags;
        auto kv = key_values(t, &flags);
        for (const auto& f : flags) {
            if (f != "expect-unresolvable") fail("syntax", "unknown flag '" + f + "'");
            r.obstacle.expect_unresolvable = true;
        }
        bool blocks_given = false;
        for (const auto& [k, v] : kv) {
            if (k == "kind") {
                if (v == "door") {
                    r.obstacle.kind = ObstacleKind::Door;
                } else if (v == "uncertainty") {
                    r.obstacle.kind = ObstacleKind::Uncertainty;
                } else {
                    fail("syntax", "unknown obstacle kind '" + v + "'");
                }
            } else if (k == "at") {
                r.obstacle.location = region(v);
            } else if (k == "action") {
                r.obstacle.required_action = v;
            } else if (k == "states") {
                for (auto s : split_commas(v)) r.obstacle.resolution_states.push_back(region(s));
                r.explicit_states = true;
            } else if (k == "target") {
                if (const auto h = v.size() > 1 ? std::optional<Heading>{} : parse_heading(v); h) {
                    r.target_direction = h;
                } else if (v == "north") {
                    r.target_direction = Heading::N;
                } else if (v == "east") {
                    r.target_direction = Heading::E;
                } else if (v == "south") {
                    r.target_direction = Heading::S;
                } else if (v == "west") {
                    r.target_direction = Heading::W;
                } else {
                    r.target_region = region(v);
                }
            } else if (k == "blocks") {
                blocks_given = true;
                for (auto b : split_commas(v)) {
                    const auto m = parse_mobility(b);
                    if (!m) fail("syntax", "unknown mobility '" + std::string(b) + "'");
                    r.obstacle.blocks.insert(*m);
                }
            } else if (k == "traversable") {
                r.obstacle.hidden_traversable = flag(v);
                r.traversable_given = true;
            } else {
                fail("syntax", "unknown resolvable key '" + k + "'");
            }
        }
        for (const char* req : {"kind", "at", "action"}) {
            if (!kv.count(req)) fail("syntax", "resolvable '" + r.obstacle.id + "' lacks " + req + "=");
        }
        if (!blocks_given) {
            r.obstacle.blocks.insert(r.obstacle.kind == ObstacleKind::Door ? Mobility::Aerial : Mobility::Ground);
        }
        resolvables_.push_back(std::move(r));
    }

    Scenario finish()
    {
        const Grid g = grid_;
        auto in_grid = [&](int line, RegionId r, const std::string& what) {
            if (!g.contains(r)) {
                fail_at(line, "grid-bounds", what + " region " + std::to_string(r) + " is outside the grid");
            }
        };

        std::set<RegionId> obstacles;
        for (const auto& [line, r] : obstacles_) {
            in_grid(line, r, "obstacle");
            obstacles.insert(r);
        }
        for (const auto& c : columns_) {
            if (c.col < 0 || c.col >= g.cols) fail_at(c.line, "grid-bounds", "column " + std::to_string(c.col) + " is outside the grid");
            for (RegionId e : c.except) {
                in_grid(c.line, e, "opening");
                if (e % g.cols != c.col) fail_at(c.line, "syntax", "opening " + std::to_string(e) + " is not in column " + std::to_string(c.col));
            }
            for (int row = 0; row < g.rows; ++row) {
                const RegionId r = row * g.cols + c.col;
                if (std::find(c.except.begin(), c.except.end(), r) == c.except.end()) obstacles.insert(r);
            }
        }

        if (agents_.empty()) fail_at(0, "nonempty-roster", "scenario declares no agents");
        std::set<std::string> ids;
        auto vocab = [&](const std::string& a) {
            return std::find(actions_.begin(), actions_.end(), a) != actions_.end();
        };
        for (const auto& a : agents_) {
            if (!ids.insert(a.spec.id).second) fail_at(a.line, "unique-ids", "duplicate id '" + a.spec.id + "'");
            in_grid(a.line, a.spec.start.region, "start");
            in_grid(a.line, a.spec.objective.a, "patrol");
            in_grid(a.line, a.spec.objective.b, "patrol");
            if (a.spec.anchor) in_grid(a.line, *a.spec.anchor, "anchor");
            if ((a.spec.mobility == Mobility::Ground) != a.has_heading) {
                fail_at(a.line, "heading-mobility", "ground agents need a heading and aerial agents take none");
            }
            for (const auto& c : a.spec.capabilities) {
                if (!vocab(c)) fail_at(a.line, "capability-vocabulary", "capability '" + c + "' is not a declared action");
            }
            if (obstacles.count(a.spec.start.region)) {
                fail_at(a.line, "start-outside-obstacles", "agent '" + a.spec.id + "' starts inside an obstacle");
            }
            for (RegionId r : {a.spec.objective.a, a.spec.objective.b}) {
                if (obstacles.count(r)) fail_at(a.line, "patrol-outside-obstacles", "patrol region " + std::to_string(r) + " is an obstacle");
            }
        }

        std::vector<ResolvableObstacle> resolvables;
        for (auto& raw : resolvables_) {
            ResolvableObstacle& r = raw.obstacle;
            if (!ids.insert(r.id).second) fail_at(raw.line, "unique-ids", "duplicate id '" + r.id + "'");
            in_grid(raw.line, r.location, "obstacle");
            if (obstacles.count(r.location)) {
                fail_at(raw.line, "resolvable-location-free", "resolvable '" + r.id + "' sits on a static obstacle");
            }
            if (!vocab(r.required_action)) {
                fail_at(raw.line, "capability-vocabulary", "action '" + r.required_action + "' is not declared");
            }
            if (raw.traversable_given && r.kind == ObstacleKind::Door) {
                fail_at(raw.line, "traversable-uncertainty-only", "only uncertainty obstacles carry traversable=");
            }

            std::vector<RegionId> around;
            for (Heading h : {Heading::N, Heading::E, Heading::S, Heading::W}) {
                if (auto n = neighbor(r.location, h, g)) around.push_back(*n);
            }
            if (!raw.explicit_states) {
                if (r.kind == ObstacleKind::Door) {
                    r.resolution_states = {r.location};
                } else {
                    for (RegionId n : around) {
                        if (!obstacles.count(n)) r.resolution_states.push_back(n);
                    }
                }
            }
            std::sort(r.resolution_states.begin(), r.resolution_states.end());
            r.resolution_states.erase(std::unique(r.resolution_states.begin(), r.resolution_states.end()),
                                      r.resolution_states.end());
            for (RegionId s : r.resolution_states) in_grid(raw.line, s, "resolution");
            if (r.resolution_states.empty()) {
                fail_at(raw.line, "resolution-states-nonempty", "resolvable '" + r.id + "' has no resolution state");
            }
            if (r.kind == ObstacleKind::Door && r.resolution_states != std::vector<RegionId>{r.location}) {
                fail_at(raw.line, "door-resolution-state", "a door is resolved from its own region");
            }
            if (r.kind == ObstacleKind::Uncertainty) {
                for (RegionId s : r.resolution_states) {
                    if (std::find(around.begin(), around.end(), s) == around.end()) {
                        fail_at(raw.line, "uncertainty-neighborhood",
                                "region " + std::to_string(s) + " does not neighbor " + std::to_string(r.location));
                    }
                }
            }
            for (RegionId s : r.resolution_states) {
                if (obstacles.count(s)) {
                    fail_at(raw.line, "resolution-states-disjoint-from-obstacles",
                            "resolution state " + std::to_string(s) + " of '" + r.id + "' is a static obstacle");
                }
            }
            if (raw.target_direction) {
                const auto n = neighbor(r.location, *raw.target_direction, g);
                if (!n) fail_at(raw.line, "grid-bounds", "target direction leaves the grid");
                r.target_override = *n;
            } else if (raw.target_region) {
                r.target_override = *raw.target_region;
            }
            if (r.target_override &&
                std::find(r.resolution_states.begin(), r.resolution_states.end(), *r.target_override) ==
                    r.resolution_states.end()) {
                fail_at(raw.line, "target-in-resolution-states",
                        "target " + std::to_string(*r.target_override) + " is not a resolution state of '" + r.id + "'");
            }
            const bool covered = std::any_of(agents_.begin(), agents_.end(),
                                             [&](const RawAgent& a) { return a.spec.can(r.required_action); });
            if (!covered && !r.expect_unresolvable) {
                fail_at(raw.line, "capability-coverage",
                        "no agent can " + r.required_action + " obstacle '" + r.id + "' and it is not marked expect-unresolvable");
            }
            resolvables.push_back(r);
        }

        std::vector<AgentSpec> agents;
        for (const auto& a : agents_) agents.push_back(a.spec);

        Scenario sc;
        sc.name = name_.empty() ? "unnamed" : name_;
        sc.cycles = cycles_;
        sc.max_steps = max_steps_;
        sc.digest = fnv1a64(text_);
        try {
            sc.world = make_world(g, actions_, std::move(obstacles), std::move(resolvables), std::move(agents));
        } catch (const WorldError& e) {
            fail_at(0, "world", e.what());
        }
        return sc;
    }

    struct Column {
        int line;
        int col;
        std::vector<RegionId> except;
    };

    std::string_view text_;
    int line_ = 0;
    std::string name_;
    Grid grid_;
    std::vector<std::string> actions_;
    std::vector<std::pair<int, RegionId>> obstacles_;
    std::vector<Column> columns_;
    std::vector<RawAgent> agents_;
    std::vector<RawResolvable> resolvables_;
    std::size_t cycles_ = 2;
    std::size_t max_steps_ = 2000;
};

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser(text).run(); }

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("io", 0, "cannot open scenario '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

MissionResult run_scenario(const Scenario& scenario, std::size_t max_steps,
                           std::function<void(const MissionState&)> on_round)
{
    MissionOptions opts;
    opts.max_steps = max_steps ? max_steps : scenario.max_steps;
    opts.success_cycles = scenario.cycles;
    opts.on_round = std::move(on_round);
    return run_mission(scenario.world, opts);
}

}  // namespace hetsynth
