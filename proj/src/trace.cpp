#include "cidp/trace.hpp"

#include <array>
#include <utility>

#include <json.hpp>

#include "cidp/errors.hpp"

namespace cidp {

namespace {
constexpr std::array<std::pair<EventKind, std::string_view>, 7> kNames{{
    {EventKind::Arrival, "arrival"},
    {EventKind::Forward, "forward"},
    {EventKind::Dummy, "dummy"},
    {EventKind::Hold, "hold"},
    {EventKind::Deliver, "deliver"},
    {EventKind::Drop, "drop"},
    {EventKind::BarrierViolation, "barrier_violation"},
}};
}

std::string_view to_string(EventKind kind) {
  for (const auto &[k, name] : kNames)
    if (k == kind)
      return name;
  throw InternalError("unknown event kind");
}

EventKind event_kind_from_string(std::string_view name) {
  for (const auto &[k, n] : kNames)
    if (n == name)
      return k;
  throw DomainError("unknown trace event kind: " + std::string(name));
}

std::string to_json_line(const TraceEvent &event) {
  nlohmann::ordered_json j;
  j["slot"] = event.slot;
  j["kind"] = to_string(event.kind);
  j["flow"] = event.flow;
  j["node"] = event.node;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
  for (const auto &[key, value] : event.payload)
    payload[key] = value;
  j["payload"] = payload;
  return j.dump();
}

TraceEvent from_json_line(const std::string &line) {
  const auto j = nlohmann::json::parse(line);
  TraceEvent e;
  e.slot = j.at("slot").get<std::int64_t>();
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.flow = j.at("flow").get<int>();
  e.node = j.at("node").get<int>();
  for (const auto &[key, value] : j.at("payload").items())
    e.payload[key] = value.get<double>();
  return e;
}

void JsonlTraceWriter::operator()(const TraceEvent &event) {
  if (event.slot < last_slot_)
    throw InternalError("trace slots must be non-decreasing");
  last_slot_ = event.slot;
  out_ << to_json_line(event) << '\n';
  ++lines_;
}

} // namespace cidp
