#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "adv2e/config.hpp"
#include "adv2e/ingestion.hpp"
#include "adv2e/pixel_model.hpp"
#include "adv2e/types.hpp"

namespace adv2e {

/// One over-sampled instant of a single pixel.
struct Sample {
  double t = 0.0;          // seconds
  double dt = 0.0;         // step length ending at t (first sample: length of the next step)
  double intensity = 0.0;  // linear, drives the cutoff
  double log_value = 0.0;  // filter input
};

/// Number of samples a source of `frame_count` frames expands to.
std::size_t sample_count(std::size_t frame_count, int interp_factor, int oversample_factor) noexcept;

/// Expands one pixel's raw intensity history into its over-sampled sequence:
/// linear interpolation by L in the intensity domain, log transform, then
/// continuity sampling by K in the log domain. Calls `fn(const Sample&)` in
/// time order, (N-1)*L*K + 1 times.
template <class Fn>
void for_each_sample(std::span<const double> times, std::span<const double> intensities,
                     const SimConfig& cfg, Fn&& fn) {
  const std::size_t n = times.size();
  if (n == 0) return;
  const int L = cfg.interp_factor;
  const int K = cfg.oversample_factor;
  const bool printed = cfg.continuity_bridge == ContinuityBridge::kPrinted;

  struct Slot {
    double t, intensity, log_value;
  };
  auto slot = [&](std::size_t frame, int l) {
    if (frame + 1 >= n) {
      return Slot{times[frame], intensities[frame], log_intensity(intensities[frame], cfg.log_eps)};
    }
    const double f = static_cast<double>(l) / L;
    const double t = blend(times[frame], times[frame + 1], f);
    const double i = blend(intensities[frame], intensities[frame + 1], f);
    return Slot{t, i, log_intensity(i, cfg.log_eps)};
  };

  std::vector<double> fractions(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) fractions[static_cast<std::size_t>(k)] = static_cast<double>(k) / K;

  Slot cur = slot(0, 0);
  double prev_h = -1.0;
  for (std::size_t frame = 0; frame + 1 < n; ++frame) {
    for (int l = 0; l < L; ++l) {
      const Slot next = (l + 1 < L) ? slot(frame, l + 1) : slot(frame + 1, 0);
      const double h = (next.t - cur.t) / K;
      const bool extrapolate = printed && l == L - 1;
      for (int k = 0; k < K; ++k) {
        const double f = fractions[static_cast<std::size_t>(k)];
        Sample s;
        s.t = blend(cur.t, next.t, f);
        s.dt = (k == 0 && prev_h > 0.0) ? prev_h : h;
        if (extrapolate) {
          s.intensity = std::clamp(next.intensity + (next.intensity - cur.intensity) * f, 0.0,
                                   kMaxIntensity);
          s.log_value = next.log_value + (next.log_value - cur.log_value) * f;
        } else {
          s.intensity = blend(cur.intensity, next.intensity, f);
          s.log_value = blend(cur.log_value, next.log_value, f);
        }
        fn(static_cast<const Sample&>(s));
      }
      cur = next;
      prev_h = h;
    }
  }
  // Terminal sample closes the last span.
  Sample last;
  last.t = cur.t;
  last.intensity = cur.intensity;
  last.log_value = cur.log_value;
  last.dt = prev_h > 0.0 ? prev_h : 0.0;
  fn(static_cast<const Sample&>(last));
}

struct SimulateOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
  bool keep_states = false;
};

struct SimulationResult {
  EventStream stream;
  double max_alpha = 0.0;       // largest filter coefficient seen
  double alpha_bound = 0.0;     // 2*pi*f_max * max span / (K*L)
  std::size_t steps_per_pixel = 0;
  // Row-major, filled when SimulateOptions::keep_states is set.
  std::vector<PixelState> initial_states;
  std::vector<PixelState> final_states;
};

/// Coefficient above which the verbatim filter update drifts noticeably from
/// the analogue response (DC gain error exp(-a) + a - 1 > 0.37).
inline constexpr double kAlphaWarnThreshold = 1.0;

/// Full pipeline: interpolate -> log -> continuity sample -> filter ->
/// threshold + noise. Pixels are independent and may be split across threads;
/// output is identical for any thread count. Event times are quantized to
/// microseconds before the final sort.
SimulationResult simulate_detailed(const FrameSource& src, const ValidatedConfig& cfg,
                                   const SimulateOptions& opts = {});

inline EventStream simulate(const FrameSource& src, const ValidatedConfig& cfg,
                            const SimulateOptions& opts = {}) {
  return simulate_detailed(src, cfg, opts).stream;
}

}  // namespace adv2e
