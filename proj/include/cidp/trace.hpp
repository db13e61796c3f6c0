#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

namespace cidp {

enum class EventKind { Arrival, Forward, Dummy, Hold, Deliver, Drop, BarrierViolation };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);

struct TraceEvent {
  std::int64_t slot = 0;
  EventKind kind = EventKind::Arrival;
  int flow = -1; ///< -1 when the event is not tied to a flow (dummies)
  int node = -1;
  std::map<std::string, double> payload;
};

using TraceSink = std::function<void(const TraceEvent &)>;

std::string to_json_line(const TraceEvent &event);
TraceEvent from_json_line(const std::string &line);

/// Writes one JSON object per line; rejects slots that go backwards.
class JsonlTraceWriter {
public:
  explicit JsonlTraceWriter(std::ostream &out) : out_(out) {}
  void operator()(const TraceEvent &event);
  std::int64_t lines() const { return lines_; }

private:
  std::ostream &out_;
  std::int64_t last_slot_ = 0;
  std::int64_t lines_ = 0;
};

} // namespace cidp
