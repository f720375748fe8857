#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace adv2e {

/// Full-scale linear intensity of an 8-bit source.
inline constexpr double kMaxIntensity = 255.0;

struct SensorSize {
  int width = 0;
  int height = 0;

  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width && y < height;
  }
  friend bool operator==(const SensorSize&, const SensorSize&) = default;
};

/// Single-channel image with a timestamp. Row-major, one value per pixel.
/// Holds linear intensities on input and log intensities after log_transform().
struct Frame {
  int width = 0;
  int height = 0;
  double timestamp = 0.0;  // seconds
  std::vector<double> data;

  Frame() = default;
  Frame(int w, int h, double t, double fill = 0.0)
      : width(w), height(h), timestamp(t),
        data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  SensorSize size() const noexcept { return {width, height}; }
  double& at(int x, int y) { return data[index(x, y)]; }
  double at(int x, int y) const { return data[index(x, y)]; }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
};

/// Throws InvariantViolation unless geometry matches data and every value is finite and >= 0.
void check_frame(const Frame& frame);

struct Event {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  double t = 0.0;     // seconds
  std::int8_t p = 1;  // -1 or +1

  friend bool operator==(const Event&, const Event&) = default;
};

/// Stream order: time, then row, then column, then polarity.
bool event_before(const Event& a, const Event& b) noexcept;

bool event_is_valid(const Event& e, SensorSize sensor) noexcept;

struct EventStream {
  SensorSize sensor;
  std::vector<Event> events;

  /// Sorts into the canonical total order. Idempotent.
  void sort();
  bool is_sorted() const;
  std::size_t size() const noexcept { return events.size(); }
  bool empty() const noexcept { return events.empty(); }

  friend bool operator==(const EventStream&, const EventStream&) = default;
};

/// Throws InvariantViolation on the first event breaking bounds, polarity,
/// finiteness or ordering.
void check_stream(const EventStream& stream);

/// Microsecond timestamp conversion shared by all serializers.
std::int64_t to_microseconds(double seconds) noexcept;
double from_microseconds(std::int64_t us) noexcept;

}  // namespace adv2e
