#include "adv2e/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "adv2e/errors.hpp"

namespace adv2e {

InvalidConfig::InvalidConfig(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += " [" + v + "]";
        return msg;
      }()),
      violations_(std::move(violations)) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}

void check_frame(const Frame& frame) {
  if (frame.width <= 0 || frame.height <= 0) {
    throw InvariantViolation("frame has non-positive dimensions");
  }
  if (frame.data.size() != frame.size().pixel_count()) {
    throw InvariantViolation("frame data length does not match width x height");
  }
  for (double v : frame.data) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvariantViolation("frame intensity not finite and non-negative");
    }
  }
}

bool event_before(const Event& a, const Event& b) noexcept {
  return std::tie(a.t, a.y, a.x, a.p) < std::tie(b.t, b.y, b.x, b.p);
}

bool event_is_valid(const Event& e, SensorSize sensor) noexcept {
  return sensor.contains(e.x, e.y) && (e.p == 1 || e.p == -1) && std::isfinite(e.t) &&
         e.t >= 0.0;
}

void EventStream::sort() { std::sort(events.begin(), events.end(), event_before); }

bool EventStream::is_sorted() const {
  return std::is_sorted(events.begin(), events.end(), event_before);
}

void check_stream(const EventStream& stream) {
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const Event& e = stream.events[i];
    if (!event_is_valid(e, stream.sensor)) {
      throw InvariantViolation("event " + std::to_string(i) + " violates bounds, polarity or time");
    }
    if (i > 0 && event_before(e, stream.events[i - 1])) {
      throw InvariantViolation("event " + std::to_string(i) + " out of order");
    }
  }
}

std::int64_t to_microseconds(double seconds) noexcept { return std::llround(seconds * 1e6); }

double from_microseconds(std::int64_t us) noexcept { return static_cast<double>(us) / 1e6; }

}  // namespace adv2e
