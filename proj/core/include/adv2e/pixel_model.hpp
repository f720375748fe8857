#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "adv2e/config.hpp"
#include "adv2e/types.hpp"

namespace adv2e {

/// ln(I + log_eps). Finite at I = 0 for any log_eps > 0.
double log_intensity(double intensity, double log_eps) noexcept;

Frame log_transform(const Frame& frame, double log_eps);

/// `a + (b - a) * fraction`; exact at fraction = 0.
inline double blend(double a, double b, double fraction) noexcept {
  return a + (b - a) * fraction;
}

/// K linearly over-sampled frames from `prev` toward `next`. Frame k carries
/// prev + (next - prev) * k/K at t_prev + k * (t_next - t_prev)/K.
/// Throws InvalidFactor when K < 1 and DimensionMismatch on differing geometry.
std::vector<Frame> continuity_sample(const Frame& prev, const Frame& next, int factor);

/// Maps linear intensity to the pixel's cutoff. Full scale gives cutoff_max_hz;
/// the floor ratio keeps black pixels from freezing the filter.
struct CutoffModel {
  double cutoff_max_hz = 250.0;
  double floor_ratio = 0.01;

  static CutoffModel from(const SimConfig& cfg) noexcept {
    return {cfg.cutoff_max, cfg.cutoff_floor_ratio};
  }
};

/// Angular cutoff in rad/s: 2*pi*f_max*max(I/I_max, floor_ratio).
double cutoff(double intensity, const CutoffModel& model) noexcept;

/// One impulse-invariant update: exp(-alpha) * y + alpha * input.
/// The input weight is alpha itself, so the DC gain is filter_dc_gain(alpha).
double filter_step(double y, double input, double alpha) noexcept;

/// Steady-state output for unit input: alpha / (1 - exp(-alpha)).
double filter_dc_gain(double alpha) noexcept;

/// Per-step filter coefficient for `mode`: omega0 * dt, where omega0 is taken from
/// the current linear intensity (kAdv2e) or pinned at the full-scale cutoff
/// (kFixed). Returns 0 for kNone.
double filter_alpha(FilterMode mode, const CutoffModel& model, double intensity,
                    double dt) noexcept;

struct PixelState {
  double filtered = 0.0;   // low-pass output in log units
  double memorized = 0.0;  // log level at the last event
  bool initialized = false;
};

/// Threshold crossings for one pixel. With delta = filtered - memorized, emits
/// floor(|delta| / C) events of sign(delta) at t_prev + (t_now - t_prev) * j*C/|delta|
/// and advances the memorized level by the emitted amount; the sub-threshold
/// residual stays in the state. Leaves `state.filtered` set to `filtered`.
void generate_events(double filtered, PixelState& state, double t_prev, double t_now,
                     const ValidatedConfig& cfg, std::uint16_t x, std::uint16_t y,
                     std::vector<Event>& out);

/// Whole-frame variant; `states` is row-major and must match the frame size.
std::vector<Event> generate_events(const Frame& filtered, std::vector<PixelState>& states,
                                   double t_prev, double t_now, const ValidatedConfig& cfg);

// Noise ----------------------------------------------------------------------

using NoiseRng = std::mt19937_64;

/// Independent seed per pixel, so any partition of pixels across workers
/// yields the same noise.
std::uint64_t pixel_seed(std::uint64_t global_seed, int x, int y) noexcept;

/// Spreads the leak phase: lowers the memorized level by U[0,1) * C_pos so
/// leak events of different pixels do not fire in lockstep. No-op when
/// leak_rate == 0.
void seed_leak_phase(PixelState& state, const ValidatedConfig& cfg, NoiseRng& rng);

/// Relative shot-noise rate: 1 at I = 0 falling linearly to 0.25 at I_max.
double shot_noise_scale(double intensity) noexcept;

/// Noise stage for one step of one pixel. Leak lowers the memorized level by
/// C_pos * leak_rate * dt and emits any crossing that results; shot noise fires
/// with probability shot_noise_rate * dt * shot_noise_scale(I) as a single event
/// of random sign, which also moves the memorized level by one threshold.
void inject_noise(PixelState& state, double intensity, double t_prev, double t_now,
                  const ValidatedConfig& cfg, NoiseRng& rng, std::uint16_t x,
                  std::uint16_t y, std::vector<Event>& out);

/// Drives one pixel through the filter, threshold and noise stages.
class PixelSimulator {
 public:
  PixelSimulator(const ValidatedConfig& cfg, std::uint16_t x, std::uint16_t y);

  /// First sample: primes the filter at its steady state for the current
  /// input and sets the memorized level. Emits nothing. `dt_next` is the
  /// spacing to the next sample.
  void initialize(double t, double intensity, double log_value, double dt_next);

  /// Advances to the sample at `t`; `dt` is the step length used for alpha.
  void step(double t, double dt, double intensity, double log_value, std::vector<Event>& out);

  const PixelState& state() const noexcept { return state_; }
  double time() const noexcept { return t_; }
  double last_alpha() const noexcept { return last_alpha_; }
  double max_alpha() const noexcept { return max_alpha_; }

 private:
  const ValidatedConfig* cfg_;
  CutoffModel cutoff_;
  std::uint16_t x_;
  std::uint16_t y_;
  NoiseRng rng_;
  PixelState state_;
  double t_ = 0.0;
  double last_alpha_ = 0.0;
  double max_alpha_ = 0.0;
};

}  // namespace adv2e
