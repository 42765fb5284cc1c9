#include "hetsynth/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace hetsynth {
namespace {

std::vector<std::string_view> split_ws(std::string_view line)
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

std::pair<std::string, std::string> split_field(std::string_view tok)
{
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw TraceFormatError("malformed field '" + std::string(tok) + "'");
    }
    return {std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1))};
}

}  // namespace

std::string format_event(const TraceEvent& e)
{
    std::string out = std::to_string(e.step);
    out += ' ';
    out += to_string(e.kind);
    for (const auto& [k, v] : e.fields) {
        out += ' ';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

TraceEvent parse_event(std::string_view line)
{
    const auto toks = split_ws(line);
    if (toks.size() < 2) throw TraceFormatError("event line needs a step and a kind");
    TraceEvent e;
    const auto [ptr, ec] = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), e.step);
    if (ec != std::errc() || ptr != toks[0].data() + toks[0].size()) {
        throw TraceFormatError("bad step '" + std::string(toks[0]) + "'");
    }
    const auto kind = parse_event_kind(toks[1]);
    if (!kind) throw TraceFormatError("unknown event kind '" + std::string(toks[1]) + "'");
    e.kind = *kind;
    for (std::size_t i = 2; i < toks.size(); ++i) e.fields.push_back(split_field(toks[i]));
    return e;
}

void write_trace(std::ostream& os, const TraceFile& trace)
{
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(trace.digest));
    os << "hetsynth-trace " << trace_format_version << " scenario=" << trace.scenario << " digest=" << digest
       << '\n';
    for (const auto& e : trace.events) os << format_event(e) << '\n';
}

std::string trace_to_string(const TraceFile& trace)
{
    std::ostringstream os;
    write_trace(os, trace);
    return os.str();
}

TraceFile read_trace(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw TraceFormatError("empty trace");
    const auto head = split_ws(line);
    if (head.size() != 4 || head[0] != "hetsynth-trace") throw TraceFormatError("missing trace header");
    if (head[1] != std::to_string(trace_format_version)) {
        throw TraceFormatError("unsupported trace version " + std::string(head[1]));
    }
    TraceFile t;
    for (std::size_t i = 2; i < 4; ++i) {
        const auto [k, v] = split_field(head[i]);
        if (k == "scenario") {
            t.scenario = v;
        } else if (k == "digest") {
            const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), t.digest, 16);
            if (ec != std::errc() || p != v.data() + v.size()) throw TraceFormatError("bad digest '" + v + "'");
        } else {
            throw TraceFormatError("unknown header field '" + k + "'");
        }
    }
    while (std::getline(is, line)) {
        if (split_ws(line).empty()) continue;
        t.events.push_back(parse_event(line));
    }
    return t;
}

}  // namespace hetsynth
