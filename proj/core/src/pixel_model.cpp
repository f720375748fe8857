#include "adv2e/pixel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adv2e/errors.hpp"

namespace adv2e {

double log_intensity(double intensity, double log_eps) noexcept {
  return std::log(intensity + log_eps);
}

Frame log_transform(const Frame& frame, double log_eps) {
  Frame out = frame;
  for (double& v : out.data) v = log_intensity(v, log_eps);
  return out;
}

std::vector<Frame> continuity_sample(const Frame& prev, const Frame& next, int factor) {
  if (factor < 1) throw InvalidFactor("over-sampling factor K must be >= 1");
  if (prev.size() != next.size() || prev.data.size() != next.data.size()) {
    throw DimensionMismatch("continuity_sample: frames differ in geometry");
  }
  std::vector<Frame> out;
  out.reserve(static_cast<std::size_t>(factor));
  for (int k = 0; k < factor; ++k) {
    const double f = static_cast<double>(k) / factor;
    Frame frame(prev.width, prev.height, blend(prev.timestamp, next.timestamp, f));
    for (std::size_t i = 0; i < frame.data.size(); ++i) {
      frame.data[i] = blend(prev.data[i], next.data[i], f);
    }
    out.push_back(std::move(frame));
  }
  return out;
}

double cutoff(double intensity, const CutoffModel& model) noexcept {
  const double ratio = std::max(intensity / kMaxIntensity, model.floor_ratio);
  return 2.0 * std::numbers::pi * model.cutoff_max_hz * ratio;
}

double filter_step(double y, double input, double alpha) noexcept {
  return std::exp(-alpha) * y + alpha * input;
}

double filter_dc_gain(double alpha) noexcept {
  if (alpha <= 0.0) return 1.0;
  return alpha / -std::expm1(-alpha);
}

double filter_alpha(FilterMode mode, const CutoffModel& model, double intensity,
                    double dt) noexcept {
  switch (mode) {
    case FilterMode::kNone:
      return 0.0;
    case FilterMode::kFixed:
      return cutoff(kMaxIntensity, {model.cutoff_max_hz, 1.0}) * dt;
    case FilterMode::kAdv2e:
      return cutoff(intensity, model) * dt;
  }
  return 0.0;
}

void generate_events(double filtered, PixelState& state, double t_prev, double t_now,
                     const ValidatedConfig& cfg, std::uint16_t x, std::uint16_t y,
                     std::vector<Event>& out) {
  state.filtered = filtered;
  const double delta = filtered - state.memorized;
  if (delta == 0.0) return;
  const bool positive = delta > 0.0;
  const double threshold = positive ? cfg->pos_threshold : cfg->neg_threshold;
  const double magnitude = std::abs(delta);
  if (magnitude < threshold) return;
  const auto count = static_cast<long>(std::floor(magnitude / threshold));
  if (count <= 0) return;
  const double span = t_now - t_prev;
  const std::int8_t p = positive ? 1 : -1;
  for (long j = 1; j <= count; ++j) {
    const double frac = std::min(1.0, static_cast<double>(j) * threshold / magnitude);
    out.push_back(Event{x, y, t_prev + span * frac, p});
  }
  const double advance = static_cast<double>(count) * threshold;
  state.memorized += positive ? advance : -advance;
}

std::vector<Event> generate_events(const Frame& filtered, std::vector<PixelState>& states,
                                   double t_prev, double t_now, const ValidatedConfig& cfg) {
  if (states.size() != filtered.data.size()) {
    throw DimensionMismatch("generate_events: state count does not match frame size");
  }
  std::vector<Event> out;
  for (int y = 0; y < filtered.height; ++y) {
    for (int x = 0; x < filtered.width; ++x) {
      const std::size_t i = filtered.index(x, y);
      generate_events(filtered.data[i], states[i], t_prev, t_now, cfg,
                      static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), out);
    }
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 53-bit uniform in [0, 1); fixed so noise does not depend on the standard
// library's distribution implementations.
double uniform01(NoiseRng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t pixel_seed(std::uint64_t global_seed, int x, int y) noexcept {
  const std::uint64_t coord =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 32) |
      static_cast<std::uint32_t>(x);
  return splitmix64(splitmix64(global_seed) ^ coord);
}

void seed_leak_phase(PixelState& state, const ValidatedConfig& cfg, NoiseRng& rng) {
  if (cfg->leak_rate <= 0.0) return;
  state.memorized -= uniform01(rng) * cfg->pos_threshold;
}

double shot_noise_scale(double intensity) noexcept {
  const double r = std::clamp(intensity / kMaxIntensity, 0.0, 1.0);
  return 1.0 - 0.75 * r;
}

void inject_noise(PixelState& state, double intensity, double t_prev, double t_now,
                  const ValidatedConfig& cfg, NoiseRng& rng, std::uint16_t x,
                  std::uint16_t y, std::vector<Event>& out) {
  const double dt = t_now - t_prev;
  if (cfg->leak_rate > 0.0) {
    state.memorized -= cfg->pos_threshold * cfg->leak_rate * dt;
    generate_events(state.filtered, state, t_prev, t_now, cfg, x, y, out);
  }
  if (cfg->shot_noise_rate > 0.0) {
    const double probability = cfg->shot_noise_rate * dt * shot_noise_scale(intensity);
    const double draw = uniform01(rng);
    const double sign_draw = uniform01(rng);
    const double when = uniform01(rng);
    if (draw < probability) {
      const bool positive = sign_draw < 0.5;
      // (t_prev, t_now]
      out.push_back(Event{x, y, t_now - dt * when, static_cast<std::int8_t>(positive ? 1 : -1)});
      state.memorized += positive ? cfg->pos_threshold : -cfg->neg_threshold;
    }
  }
}

PixelSimulator::PixelSimulator(const ValidatedConfig& cfg, std::uint16_t x, std::uint16_t y)
    : cfg_(&cfg),
      cutoff_(CutoffModel::from(cfg.get())),
      x_(x),
      y_(y),
      rng_(pixel_seed(cfg->rng_seed, x, y)) {}

void PixelSimulator::initialize(double t, double intensity, double log_value, double dt_next) {
  const double alpha = filter_alpha((*cfg_)->filter_mode, cutoff_, intensity, dt_next);
  state_.filtered =
      (*cfg_)->filter_mode == FilterMode::kNone ? log_value : filter_dc_gain(alpha) * log_value;
  state_.memorized = state_.filtered;
  state_.initialized = true;
  seed_leak_phase(state_, *cfg_, rng_);
  t_ = t;
  last_alpha_ = alpha;
  max_alpha_ = alpha;
}

void PixelSimulator::step(double t, double dt, double intensity, double log_value,
                          std::vector<Event>& out) {
  double filtered = log_value;
  if ((*cfg_)->filter_mode != FilterMode::kNone) {
    last_alpha_ = filter_alpha((*cfg_)->filter_mode, cutoff_, intensity, dt);
    max_alpha_ = std::max(max_alpha_, last_alpha_);
    filtered = filter_step(state_.filtered, log_value, last_alpha_);
  }
  generate_events(filtered, state_, t_, t, *cfg_, x_, y_, out);
  inject_noise(state_, intensity, t_, t, *cfg_, rng_, x_, y_, out);
  t_ = t;
}

}  // namespace adv2e
