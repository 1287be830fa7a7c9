#include "mergelab/trace_io.hpp"

#include <json.hpp>

#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mergelab {

using nlohmann::json;

std::string trace_header_line(const Trace& trace)
{
    json h;
    h["variant"] = to_string(trace.variant);
    h["profile"] = trace.profile.lengths();
    h["n"] = trace.profile.total();
    h["rho"] = trace.profile.size();
    h["capacity"] = trace.capacity ? json(*trace.capacity) : json(nullptr);
    return h.dump();
}

std::string trace_event_line(const TraceEvent& event)
{
    json e;
    e["k"] = to_string(event.kind);
    e["c"] = event.cost;
    e["s"] = event.snapshot;
    return e.dump();
}

void write_trace(std::ostream& out, const Trace& trace)
{
    out << trace_header_line(trace) << '\n';
    for (const auto& e : trace.events)
        out << trace_event_line(e) << '\n';
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw std::runtime_error("trace line " + std::to_string(line) + ": " + what);
}

void read_header(const json& h, Trace& trace, std::size_t line)
{
    if (!h.is_object() || !h.contains("variant") || !h.contains("profile"))
        fail(line, "header needs \"variant\" and \"profile\"");
    const auto v = parse_variant(h.at("variant").get<std::string>());
    if (!v)
        fail(line, "unknown variant");
    trace.variant = *v;
    try {
        trace.profile = RunProfile(h.at("profile").get<std::vector<Length>>());
    } catch (const std::invalid_argument& e) {
        fail(line, e.what());
    }
    if (h.contains("n") && h.at("n").get<std::uint64_t>() != trace.profile.total())
        fail(line, "header n does not match the profile");
    if (h.contains("rho") && h.at("rho").get<std::uint64_t>() != trace.profile.size())
        fail(line, "header rho does not match the profile");
    if (h.contains("capacity") && !h.at("capacity").is_null())
        trace.capacity = h.at("capacity").get<std::size_t>();
}

} // namespace

TraceDocument read_trace(std::istream& in)
{
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    TraceDocument doc;

    // A single (possibly pretty-printed) object: header or summary only.
    const json whole = json::parse(text, nullptr, false);
    if (!whole.is_discarded()) {
        read_header(whole, doc.trace, 1);
        return doc;
    }

    std::istringstream lines(text);
    std::string line;
    std::size_t number = 0;
    bool have_header = false;
    while (std::getline(lines, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            fail(number, "not valid JSON");
        if (!have_header) {
            read_header(j, doc.trace, number);
            have_header = true;
            continue;
        }
        if (!j.is_object() || !j.contains("k") || !j.contains("c") || !j.contains("s"))
            fail(number, "event needs \"k\", \"c\" and \"s\"");
        TraceEvent e;
        const auto kind = parse_event_kind(j.at("k").get<std::string>());
        if (!kind)
            fail(number, "unknown event kind");
        try {
            e.kind = *kind;
            e.cost = j.at("c").get<Length>();
            e.snapshot = j.at("s").get<std::vector<Length>>();
        } catch (const json::exception& ex) {
            fail(number, ex.what());
        }
        doc.trace.events.push_back(std::move(e));
        doc.has_events = true;
    }
    if (!have_header)
        throw std::runtime_error("trace: empty input");
    return doc;
}

} // namespace mergelab
