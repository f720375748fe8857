#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace adv2e {

enum class FilterMode {
  kNone,   // no low-pass stage; the filtered value is the log input itself
  kFixed,  // constant cutoff at cutoff_max
  kAdv2e,  // cutoff proportional to the instantaneous linear intensity
};

/// How the over-sampler bridges the last interpolated slot of a frame pair
/// to the next original frame.
enum class ContinuityBridge {
  kInterpolate,  // blend from I'(n, L-1) toward I'(n+1, 0), like every other slot
  kPrinted,      // legacy form: start at I'(n+1, 0) and extrapolate by the same slope
};

std::string_view to_string(FilterMode mode) noexcept;
std::optional<FilterMode> parse_filter_mode(std::string_view text) noexcept;
std::string_view to_string(ContinuityBridge bridge) noexcept;
std::optional<ContinuityBridge> parse_continuity_bridge(std::string_view text) noexcept;

struct SimConfig {
  double pos_threshold = 0.2;
  double neg_threshold = 0.2;
  int interp_factor = 10;     // L
  int oversample_factor = 10; // K
  double cutoff_max = 250.0;  // Hz, reached at full-scale intensity
  double cutoff_floor_ratio = 0.01;
  FilterMode filter_mode = FilterMode::kAdv2e;
  double leak_rate = 0.1;       // Hz per pixel
  double shot_noise_rate = 0.0; // Hz per pixel at zero intensity
  std::uint64_t rng_seed = 0;
  double log_eps = 1.0;
  ContinuityBridge continuity_bridge = ContinuityBridge::kInterpolate;
};

/// A SimConfig that passed validate_config(). Only constructible through it.
class ValidatedConfig {
 public:
  const SimConfig& get() const noexcept { return cfg_; }
  const SimConfig* operator->() const noexcept { return &cfg_; }

 private:
  explicit ValidatedConfig(SimConfig cfg) : cfg_(std::move(cfg)) {}
  friend ValidatedConfig validate_config(const SimConfig& cfg);

  SimConfig cfg_;
};

/// Returns the validated config, or throws InvalidConfig listing every violation.
ValidatedConfig validate_config(const SimConfig& cfg);

/// Every violated constraint, empty when valid.
std::vector<std::string> config_violations(const SimConfig& cfg);

// JSON keys mirror the SimConfig field names. Missing keys keep their
// defaults; unknown keys and wrongly typed values raise InvalidConfig.
SimConfig config_from_json(const nlohmann::json& j, SimConfig base = {});
nlohmann::json config_to_json(const SimConfig& cfg);

}  // namespace adv2e
