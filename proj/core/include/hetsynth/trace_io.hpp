#pragma once

// Persisted mission traces:
//
//   hetsynth-trace 1 scenario=<name> digest=<16 hex digits>
//   <step> <kind> key=value ...

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetsynth/coordination.hpp"

namespace hetsynth {

inline constexpr int trace_format_version = 1;

class TraceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TraceFile {
    std::string scenario;
    std::uint64_t digest = 0;
    std::vector<TraceEvent> events;

    bool operator==(const TraceFile&) const = default;
};

std::string format_event(const TraceEvent& e);
TraceEvent parse_event(std::string_view line);

void write_trace(std::ostream& os, const TraceFile& trace);
std::string trace_to_string(const TraceFile& trace);
TraceFile read_trace(std::istream& is);

}  // namespace hetsynth
