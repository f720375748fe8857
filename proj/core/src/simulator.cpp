#include "adv2e/simulator.hpp"

#include <algorithm>
#include <numbers>
#include <thread>

namespace adv2e {

std::size_t sample_count(std::size_t frame_count, int interp_factor,
                         int oversample_factor) noexcept {
  if (frame_count == 0) return 0;
  return (frame_count - 1) * static_cast<std::size_t>(interp_factor) *
             static_cast<std::size_t>(oversample_factor) +
         1;
}

namespace {

struct RowOutput {
  std::vector<Event> events;
  double max_alpha = 0.0;
};

void simulate_row(const FrameSource& src, const ValidatedConfig& cfg,
                  std::span<const double> times, int y, RowOutput& row,
                  PixelState* initial_states, PixelState* final_states) {
  const SensorSize sensor = src.sensor();
  std::vector<double> history(src.size());
  for (int x = 0; x < sensor.width; ++x) {
    for (std::size_t n = 0; n < src.size(); ++n) history[n] = src[n].at(x, y);

    PixelSimulator pixel(cfg, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y));
    bool first = true;
    for_each_sample(times, history, cfg.get(), [&](const Sample& s) {
      if (first) {
        pixel.initialize(s.t, s.intensity, s.log_value, s.dt);
        if (initial_states) initial_states[x] = pixel.state();
        first = false;
      } else {
        pixel.step(s.t, s.dt, s.intensity, s.log_value, row.events);
      }
    });
    row.max_alpha = std::max(row.max_alpha, pixel.max_alpha());
    if (final_states) final_states[x] = pixel.state();
  }
}

}  // namespace

SimulationResult simulate_detailed(const FrameSource& src, const ValidatedConfig& cfg,
                                   const SimulateOptions& opts) {
  const SensorSize sensor = src.sensor();
  std::vector<double> times(src.size());
  double max_span = 0.0;
  for (std::size_t n = 0; n < src.size(); ++n) {
    times[n] = src[n].timestamp;
    if (n > 0) max_span = std::max(max_span, times[n] - times[n - 1]);
  }

  SimulationResult result;
  result.stream.sensor = sensor;
  result.steps_per_pixel = sample_count(src.size(), cfg->interp_factor, cfg->oversample_factor) - 1;
  result.alpha_bound = cfg->filter_mode == FilterMode::kNone
                           ? 0.0
                           : 2.0 * std::numbers::pi * cfg->cutoff_max * max_span /
                                 (static_cast<double>(cfg->interp_factor) * cfg->oversample_factor);
  if (opts.keep_states) {
    result.initial_states.resize(sensor.pixel_count());
    result.final_states.resize(sensor.pixel_count());
  }

  std::vector<RowOutput> rows(static_cast<std::size_t>(sensor.height));
  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : opts.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(sensor.height));

  auto run_rows = [&](unsigned worker) {
    // Rows are dealt round-robin; each row is owned by exactly one worker.
    for (int y = static_cast<int>(worker); y < sensor.height; y += static_cast<int>(threads)) {
      const std::size_t offset = static_cast<std::size_t>(y) * static_cast<std::size_t>(sensor.width);
      simulate_row(src, cfg, times, y, rows[static_cast<std::size_t>(y)],
                   opts.keep_states ? result.initial_states.data() + offset : nullptr,
                   opts.keep_states ? result.final_states.data() + offset : nullptr);
    }
  };
  if (threads <= 1) {
    run_rows(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run_rows, w);
  }

  std::size_t total = 0;
  for (const auto& row : rows) {
    total += row.events.size();
    result.max_alpha = std::max(result.max_alpha, row.max_alpha);
  }
  auto& events = result.stream.events;
  events.reserve(total);
  for (auto& row : rows) {
    for (Event e : row.events) {
      e.t = from_microseconds(to_microseconds(e.t));
      events.push_back(e);
    }
    row.events = {};
  }
  result.stream.sort();
  return result;
}

}  // namespace adv2e
