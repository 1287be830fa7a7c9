#pragma once

// JSON-lines trace format.
//
// The first line is a header object:
//   {"variant":"patched","profile":[...],"n":159,"rho":9,"capacity":null}
// and every following line one event:
//   {"k":"PUSH|M2|M3|M4|M5|F|OV","c":cost,"s":[lengths top to bottom]}

#include "mergelab/policy.hpp"

#include <iosfwd>
#include <string>

namespace mergelab {

std::string trace_header_line(const Trace& trace);
std::string trace_event_line(const TraceEvent& event);

void write_trace(std::ostream& out, const Trace& trace);

struct TraceDocument {
    Trace trace;
    /// False when the input carried a header (or a simulation summary) but no
    /// events; callers re-simulate from the header in that case.
    bool has_events = false;
};

/// Parses a trace written by write_trace. Also accepts a single JSON object
/// with "variant" and "profile" keys spread over several lines. Throws
/// std::runtime_error naming the offending line on malformed input.
TraceDocument read_trace(std::istream& in);

} // namespace mergelab
